use std::sync::Arc;

use super::{OmegaError, Representation};

/// (r, R) is a morphism from f to g: r and R are homomorphisms and
/// R(f(a)(m)) = g(r(a))(R(m)) for all a, m.
pub fn check_morphism(r: &[usize], big_r: &[usize], f: &Representation, g: &Representation) -> bool {
    f.acting().is_homomorphism(r, g.acting())
        && f.acted().is_homomorphism(big_r, g.acted())
        && (0..f.acting().size()).all(|a| {
            (0..f.acted().size()).all(|m| big_r[f.act(a, m)] == g.act(r[a], big_r[m]))
        })
}

/// Factorization (r, R) = (i, I)(t, T)(j, J) through the quotients by the
/// kernels and the images.
#[derive(Clone, Debug)]
pub struct Decomposition {
    /// Class of each element of A under ker r, and of M under ker R.
    pub j: Vec<usize>,
    pub big_j: Vec<usize>,
    /// Representation of A/s on M/S.
    pub quotient: Representation,
    /// Bijections A/s → rA and M/S → RM, into the image carriers.
    pub t: Vec<usize>,
    pub big_t: Vec<usize>,
    /// Representation of rA on RM, image carriers in the order of `image_a`, `image_m`.
    pub image: Representation,
    pub image_a: Vec<usize>,
    pub image_m: Vec<usize>,
    /// Results of the factor checks, by name.
    pub checks: Vec<(&'static str, bool)>,
}

impl Decomposition {
    pub fn all_checks_pass(&self) -> bool {
        self.checks.iter().all(|(_, ok)| *ok)
    }

    pub fn i(&self) -> &[usize] {
        &self.image_a
    }

    pub fn big_i(&self) -> &[usize] {
        &self.image_m
    }
}

/// Kernel classes numbered in order of first appearance.
fn kernel_classes(map: &[usize]) -> Vec<usize> {
    let mut firsts: Vec<usize> = Vec::new();
    map.iter()
        .map(|v| match firsts.iter().position(|w| w == v) {
            Some(c) => c,
            None => {
                firsts.push(*v);
                firsts.len() - 1
            }
        })
        .collect()
}

fn image_of(map: &[usize]) -> Vec<usize> {
    let mut im = map.to_vec();
    im.sort_unstable();
    im.dedup();
    im
}

fn inverse_perm(p: &[usize]) -> Option<Vec<usize>> {
    let mut inv = vec![usize::MAX; p.len()];
    for (i, &x) in p.iter().enumerate() {
        if x >= p.len() || inv[x] != usize::MAX {
            return None;
        }
        inv[x] = i;
    }
    Some(inv)
}

fn compose(outer: &[usize], inner: &[usize]) -> Vec<usize> {
    inner.iter().map(|&x| outer[x]).collect()
}

pub fn decompose_morphism(
    r: &[usize],
    big_r: &[usize],
    f: &Representation,
    g: &Representation,
) -> Result<Decomposition, OmegaError> {
    if !check_morphism(r, big_r, f, g) {
        return Err(OmegaError::NotMorphism);
    }
    let j = kernel_classes(r);
    let big_j = kernel_classes(big_r);
    let a_s = Arc::new(f.acting().quotient(&j)?);
    let m_s = Arc::new(f.acted().quotient(&big_j)?);
    let rep_of = |classes: &[usize], c: usize| classes.iter().position(|&x| x == c).expect("dense classes");

    // F(j(a))(J(m)) = J(f(a)(m)), read off on class representatives
    let quotient_action: Vec<Vec<usize>> = (0..a_s.size())
        .map(|ca| (0..m_s.size()).map(|cm| big_j[f.act(rep_of(&j, ca), rep_of(&big_j, cm))]).collect())
        .collect();
    let well_defined_f = (0..f.acting().size())
        .all(|a| (0..f.acted().size()).all(|m| quotient_action[j[a]][big_j[m]] == big_j[f.act(a, m)]));
    let quotient = Representation::new(a_s.clone(), m_s.clone(), quotient_action, f.kind(), f.hand());

    let image_a = image_of(r);
    let image_m = image_of(big_r);
    let r_a = Arc::new(g.acting().restrict(&image_a)?);
    let r_m = Arc::new(g.acted().restrict(&image_m)?);
    let pos = |im: &[usize], x: usize| im.iter().position(|&y| y == x).expect("in image");
    let t: Vec<usize> = (0..a_s.size()).map(|c| pos(&image_a, r[rep_of(&j, c)])).collect();
    let big_t: Vec<usize> = (0..m_s.size()).map(|c| pos(&image_m, big_r[rep_of(&big_j, c)])).collect();

    // G(t(j(a)))(T(J(m))) = T(F(j(a))(J(m)))
    let image_action: Option<Vec<Vec<usize>>> = match &quotient {
        Ok(fq) => {
            let t_inv = inverse_perm(&t);
            let bt_inv = inverse_perm(&big_t);
            match (t_inv, bt_inv) {
                (Some(ti), Some(bti)) => Some(
                    (0..r_a.size())
                        .map(|x| (0..r_m.size()).map(|y| big_t[fq.act(ti[x], bti[y])]).collect())
                        .collect(),
                ),
                _ => None,
            }
        }
        Err(_) => None,
    };
    let image = image_action
        .ok_or(OmegaError::NotMorphism)
        .and_then(|act| Representation::new(r_a.clone(), r_m.clone(), act, g.kind(), g.hand()));

    let mut checks: Vec<(&'static str, bool)> = vec![
        ("F is well defined", well_defined_f),
        ("F is a representation", quotient.is_ok()),
        ("G is a representation", image.is_ok()),
    ];
    let (Ok(quotient), Ok(image)) = (quotient, image) else {
        checks.push(("factors built", false));
        return Err(OmegaError::Invalid(format!("decomposition failed: {checks:?}")));
    };
    let t_inv = inverse_perm(&t).expect("checked above");
    let big_t_inv = inverse_perm(&big_t).expect("checked above");
    checks.push(("(j, J) is a morphism from f to F", check_morphism(&j, &big_j, f, &quotient)));
    checks.push(("(t, T) is a morphism from F to G", check_morphism(&t, &big_t, &quotient, &image)));
    checks.push(("(t⁻¹, T⁻¹) is a morphism from G to F", check_morphism(&t_inv, &big_t_inv, &image, &quotient)));
    checks.push(("(i, I) is a morphism from G to g", check_morphism(&image_a, &image_m, &image, g)));
    checks.push((
        "(r, R) = (i, I)(t, T)(j, J)",
        compose(&image_a, &compose(&t, &j)) == r && compose(&image_m, &compose(&big_t, &big_j)) == big_r,
    ));
    checks.push(("t and T are bijections", t.len() == image_a.len() && big_t.len() == image_m.len()));
    Ok(Decomposition { j, big_j, quotient, t, big_t, image, image_a, image_m, checks })
}
