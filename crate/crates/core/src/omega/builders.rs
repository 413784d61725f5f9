//! Small standard algebras and representations.

use std::sync::Arc;

use super::{FiniteOmegaAlgebra, Hand, OmegaError, RepKind, Representation, Signature};

fn sig(ops: &[(&str, usize)]) -> Signature {
    Signature::new(ops.iter().map(|(n, a)| (n.to_string(), *a)).collect()).expect("distinct names")
}

/// ℤ/n under `+`, with the given labels (or "0".."n-1").
pub fn cyclic(n: usize, labels: Option<Vec<String>>) -> FiniteOmegaAlgebra {
    let labels = labels.unwrap_or_else(|| (0..n).map(|i| i.to_string()).collect());
    let table = (0..n * n).map(|k| (k / n + k % n) % n).collect();
    FiniteOmegaAlgebra::with_bound(labels, sig(&[("+", 2)]), vec![table], usize::MAX).expect("valid table")
}

/// Cyclic group written multiplicatively: labels e, a, a2, ..., a{n-1}.
pub fn cyclic_powers(n: usize, gen: &str) -> FiniteOmegaAlgebra {
    let labels = (0..n)
        .map(|k| match k {
            0 => "e".to_string(),
            1 => gen.to_string(),
            _ => format!("{gen}{k}"),
        })
        .collect();
    cyclic(n, Some(labels))
}

/// The field 𝔽_p with `+` and `*`.
pub fn prime_field(p: usize) -> FiniteOmegaAlgebra {
    let labels = (0..p).map(|i| i.to_string()).collect();
    let add = (0..p * p).map(|k| (k / p + k % p) % p).collect();
    let mul = (0..p * p).map(|k| (k / p) * (k % p) % p).collect();
    FiniteOmegaAlgebra::with_bound(labels, sig(&[("+", 2), ("*", 2)]), vec![add, mul], usize::MAX).expect("valid table")
}

/// Coordinates of vector index `x` in 𝔽_p^d (first coordinate least significant).
pub fn vector_coords(p: usize, d: usize, mut x: usize) -> Vec<usize> {
    (0..d)
        .map(|_| {
            let c = x % p;
            x /= p;
            c
        })
        .collect()
}

pub fn vector_index(p: usize, c: &[usize]) -> usize {
    c.iter().rev().fold(0, |acc, &x| acc * p + x % p)
}

/// Label such as "0", "e1", "2e1+e2".
pub fn vector_label(p: usize, d: usize, x: usize) -> String {
    let c = vector_coords(p, d, x);
    let parts: Vec<String> = c
        .iter()
        .enumerate()
        .filter(|(_, &v)| v != 0)
        .map(|(k, &v)| if v == 1 { format!("e{}", k + 1) } else { format!("{v}e{}", k + 1) })
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join("+")
    }
}

/// The abelian group 𝔽_p^d under `+`.
pub fn vector_group(p: usize, d: usize) -> FiniteOmegaAlgebra {
    let n = p.pow(d as u32);
    let labels = (0..n).map(|x| vector_label(p, d, x)).collect();
    let add = (0..n * n)
        .map(|k| {
            let a = vector_coords(p, d, k / n);
            let b = vector_coords(p, d, k % n);
            let s: Vec<usize> = a.iter().zip(&b).map(|(x, y)| (x + y) % p).collect();
            vector_index(p, &s)
        })
        .collect();
    FiniteOmegaAlgebra::with_bound(labels, sig(&[("+", 2)]), vec![add], usize::MAX).expect("valid table")
}

/// One-element monoid.
pub fn trivial_monoid() -> FiniteOmegaAlgebra {
    FiniteOmegaAlgebra::new(vec!["1".into()], sig(&[("*", 2)]), vec![vec![0]]).expect("valid table")
}

/// `m` acted on by the trivial monoid, so closure is closure under m's own operations.
pub fn trivial_over(m: FiniteOmegaAlgebra) -> Representation {
    let n = m.size();
    Representation::new(
        Arc::new(trivial_monoid()),
        Arc::new(m),
        vec![(0..n).collect()],
        RepKind::MonoidAction,
        Hand::Left,
    )
    .expect("identity action is valid")
}

/// A group acting on its own carrier (as a bare set) by translation g ↦ (x ↦ g·x).
pub fn translation(group: FiniteOmegaAlgebra, hand: Hand) -> Result<Representation, OmegaError> {
    let op = *group.signature().binary().first().ok_or_else(|| OmegaError::Invalid("no binary operation".into()))?;
    let n = group.size();
    let action = (0..n)
        .map(|a| {
            (0..n)
                .map(|m| match hand {
                    Hand::Left => group.apply(op, &[a, m]),
                    Hand::Right => group.apply(op, &[m, a]),
                })
                .collect()
        })
        .collect();
    let points = FiniteOmegaAlgebra::bare(group.labels().to_vec())?;
    Representation::new(Arc::new(group), Arc::new(points), action, RepKind::MonoidAction, hand)
}

/// 𝔽_p acting on 𝔽_p^d by scalar multiplication.
pub fn scalar_action(p: usize, d: usize) -> Representation {
    let field = prime_field(p);
    let vectors = vector_group(p, d);
    let n = vectors.size();
    let action = (0..p)
        .map(|s| {
            (0..n)
                .map(|x| {
                    let c: Vec<usize> = vector_coords(p, d, x).iter().map(|v| v * s % p).collect();
                    vector_index(p, &c)
                })
                .collect()
        })
        .collect();
    Representation::new(Arc::new(field), Arc::new(vectors), action, RepKind::RingOnAbelianGroup, Hand::Left)
        .expect("scalar multiplication is a module action")
}

/// 𝔽_p^d acting on p^d points ("p0", "p1", ...) by translation; point k has
/// the coordinates of vector k relative to the origin p0.
pub fn point_translation(p: usize, d: usize) -> Representation {
    let vectors = vector_group(p, d);
    let n = vectors.size();
    let points = FiniteOmegaAlgebra::bare((0..n).map(|k| format!("p{k}")).collect()).expect("distinct labels");
    let action = (0..n).map(|v| (0..n).map(|x| vectors.apply(0, &[v, x])).collect()).collect();
    Representation::new(Arc::new(vectors), Arc::new(points), action, RepKind::MonoidAction, Hand::Left)
        .expect("translation is a group action")
}
