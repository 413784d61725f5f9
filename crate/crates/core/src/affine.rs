//! Affine geometry over a division ring D. Points and vectors are
//! coordinate tuples in Dⁿ relative to a fixed frame (ē, O).
//!
//! With `Hand::Right` (the default) scalars multiply vectors from the right
//! and a linear map acts as A′ⁱ = Σ_j Aʲ P_jⁱ. `Hand::Left` mirrors every
//! product.

use std::sync::Arc;

use thiserror::Error;

use crate::algebra::{Algebra, AlgebraError, Element};
use crate::forms::{BilinearMatrix, FormError};
use crate::omega::{FiniteOmegaAlgebra, Hand, OmegaError, Representation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AffineError {
    #[error("expected dimension {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("linear part is singular")]
    SingularLinearPart,
    #[error("pivot {0} has no inverse")]
    NotDivisionRing(String),
    #[error("span vectors are dependent")]
    DependentSpan,
    #[error("map has a nonzero displacement")]
    NotLinear,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Form(#[from] FormError),
    #[error(transparent)]
    Omega(#[from] OmegaError),
}

type Result<T> = std::result::Result<T, AffineError>;

pub type Point = Vec<Element>;
pub type Vector = Vec<Element>;
/// Square matrix, `m[j][i]` is the entry P_jⁱ (row j, column i).
pub type ElementMatrix = Vec<Vec<Element>>;

fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(AffineError::DimensionMismatch { expected, found });
    }
    Ok(())
}

/// Product written as `x * scalar` for `Hand::Right` and `scalar * x` otherwise.
fn act(hand: Hand, x: &Element, scalar: &Element) -> Result<Element> {
    Ok(match hand {
        Hand::Right => x.checked_mul(scalar)?,
        Hand::Left => scalar.checked_mul(x)?,
    })
}

/// Dⁿ with its frame; only fixes the dimension, algebra and scalar side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSpace {
    alg: Arc<Algebra>,
    n: usize,
    hand: Hand,
}

impl AffineSpace {
    pub fn new(alg: &Arc<Algebra>, n: usize) -> AffineSpace {
        AffineSpace { alg: alg.clone(), n, hand: Hand::Right }
    }

    pub fn with_hand(&self, hand: Hand) -> AffineSpace {
        AffineSpace { hand, ..self.clone() }
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.alg
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn hand(&self) -> Hand {
        self.hand
    }

    pub fn origin(&self) -> Point {
        vec![self.alg.zero(); self.n]
    }

    pub fn point(&self, coords: Vec<Element>) -> Result<Point> {
        check_dim(self.n, coords.len())?;
        Ok(coords)
    }

    /// v̄·d (or d·v̄ on the left).
    pub fn scale(&self, v: &[Element], d: &Element) -> Result<Vector> {
        check_dim(self.n, v.len())?;
        v.iter().map(|x| act(self.hand, x, d)).collect()
    }

    pub fn add(&self, v: &[Element], w: &[Element]) -> Result<Vector> {
        check_dim(self.n, v.len())?;
        check_dim(self.n, w.len())?;
        v.iter().zip(w).map(|(a, b)| Ok(a.checked_add(b)?)).collect()
    }
}

/// Parallel shift A ↦ A + ā.
pub fn shift(a: &[Element], v: &[Element]) -> Result<Point> {
    check_dim(a.len(), v.len())?;
    a.iter().zip(v).map(|(x, y)| Ok(x.checked_add(y)?)).collect()
}

/// The unique vector carrying A to B.
pub fn vec_between(a: &[Element], b: &[Element]) -> Result<Vector> {
    check_dim(a.len(), b.len())?;
    a.iter().zip(b).map(|(x, y)| Ok(y.checked_add(&-x)?)).collect()
}

/// Row vector times matrix under the given product side.
pub fn vec_mat(hand: Hand, v: &[Element], p: &[Vec<Element>]) -> Result<Vector> {
    check_dim(p.len(), v.len())?;
    let cols = p.first().map_or(0, Vec::len);
    (0..cols)
        .map(|i| {
            let mut s = v.first().map(|x| x.algebra().zero()).unwrap_or_else(|| p[0][0].algebra().zero());
            for (j, x) in v.iter().enumerate() {
                s += &act(hand, x, &p[j][i])?;
            }
            Ok(s)
        })
        .collect()
}

/// Matrix product under the given product side: (PQ)_jⁱ = Σ_k P_jᵏ Q_kⁱ on
/// the right, Σ_k Q_kⁱ P_jᵏ on the left.
pub fn mat_mul(hand: Hand, p: &[Vec<Element>], q: &[Vec<Element>]) -> Result<ElementMatrix> {
    p.iter().map(|row| vec_mat(hand, row, q)).collect()
}

pub fn identity_matrix(alg: &Arc<Algebra>, n: usize) -> ElementMatrix {
    (0..n).map(|j| (0..n).map(|i| if i == j { alg.one() } else { alg.zero() }).collect()).collect()
}

fn transpose(m: &[Vec<Element>]) -> ElementMatrix {
    let cols = m.first().map_or(0, Vec::len);
    (0..cols).map(|i| m.iter().map(|row| row[i].clone()).collect()).collect()
}

/// Inverse under the usual (right) product: Gauss–Jordan on [P | I] with
/// left row operations, then checked on both sides.
fn inverse_right(p: &[Vec<Element>]) -> Result<ElementMatrix> {
    let n = p.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    let alg = p[0][0].algebra().clone();
    let mut a: ElementMatrix = p.to_vec();
    let mut e = identity_matrix(&alg, n);
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero()).ok_or(AffineError::SingularLinearPart)?;
        a.swap(col, piv);
        e.swap(col, piv);
        let inv = a[col][col].inverse().map_err(|_| AffineError::NotDivisionRing(a[col][col].to_string()))?;
        a[col] = a[col].iter().map(|x| &inv * x).collect();
        e[col] = e[col].iter().map(|x| &inv * x).collect();
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let d = a[r][col].clone();
                for c in 0..n {
                    let t = &d * &a[col][c];
                    a[r][c] -= &t;
                    let t = &d * &e[col][c];
                    e[r][c] -= &t;
                }
            }
        }
    }
    let id = identity_matrix(&alg, n);
    if mat_mul(Hand::Right, p, &e)? != id || mat_mul(Hand::Right, &e, p)? != id {
        return Err(AffineError::SingularLinearPart);
    }
    Ok(e)
}

/// Inverse of P under the product of the given side.
pub fn matrix_inverse(hand: Hand, p: &[Vec<Element>]) -> Result<ElementMatrix> {
    match hand {
        Hand::Right => inverse_right(p),
        // Left products are transposed right products of the transposes.
        Hand::Left => Ok(transpose(&inverse_right(&transpose(p))?)),
    }
}

/// x ↦ xP + R.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineMap {
    pub p: ElementMatrix,
    pub r: Vector,
    pub hand: Hand,
}

impl AffineMap {
    pub fn new(p: ElementMatrix, r: Vector, hand: Hand) -> Result<AffineMap> {
        let n = r.len();
        check_dim(n, p.len())?;
        for row in &p {
            check_dim(n, row.len())?;
        }
        if nc_rank_with(&p, hand)? != n {
            return Err(AffineError::SingularLinearPart);
        }
        Ok(AffineMap { p, r, hand })
    }

    pub fn identity(alg: &Arc<Algebra>, n: usize, hand: Hand) -> AffineMap {
        AffineMap { p: identity_matrix(alg, n), r: vec![alg.zero(); n], hand }
    }

    pub fn translation(alg: &Arc<Algebra>, r: Vector, hand: Hand) -> AffineMap {
        AffineMap { p: identity_matrix(alg, r.len()), r, hand }
    }

    pub fn dim(&self) -> usize {
        self.r.len()
    }

    pub fn apply(&self, a: &[Element]) -> Result<Point> {
        shift(&vec_mat(self.hand, a, &self.p)?, &self.r)
    }

    /// First `self`, then `next`: (P, R)∘(Q, S) = (PQ, RQ + S).
    pub fn compose(&self, next: &AffineMap) -> Result<AffineMap> {
        check_dim(self.dim(), next.dim())?;
        let p = mat_mul(self.hand, &self.p, &next.p)?;
        let r = shift(&vec_mat(self.hand, &self.r, &next.p)?, &next.r)?;
        Ok(AffineMap { p, r, hand: self.hand })
    }

    /// (P⁻¹, −R P⁻¹).
    pub fn inverse(&self) -> Result<AffineMap> {
        let p = matrix_inverse(self.hand, &self.p)?;
        let r = vec_mat(self.hand, &self.r, &p)?.into_iter().map(|x| -x).collect();
        Ok(AffineMap { p, r, hand: self.hand })
    }
}

pub fn apply_affine(m: &AffineMap, a: &[Element]) -> Result<Point> {
    m.apply(a)
}

pub fn compose_affine(m1: &AffineMap, m2: &AffineMap) -> Result<AffineMap> {
    m1.compose(m2)
}

pub fn inverse_affine(m: &AffineMap) -> Result<AffineMap> {
    m.inverse()
}

/// Row rank under row operations row_r ← row_r − d·row_s with d ∈ D on the
/// left. This is the column rank for right coefficients.
pub fn nc_rank(m: &[Vec<Element>]) -> Result<usize> {
    nc_rank_with(m, Hand::Right)
}

/// `Hand::Right` eliminates with left multipliers, `Hand::Left` with right
/// multipliers.
pub fn nc_rank_with(m: &[Vec<Element>], hand: Hand) -> Result<usize> {
    let mut a: ElementMatrix = m.to_vec();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(piv) = (rank..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, piv);
        let inv = a[rank][col].inverse().map_err(|_| AffineError::NotDivisionRing(a[rank][col].to_string()))?;
        for r in rank + 1..rows {
            if a[r][col].is_zero() {
                continue;
            }
            let d = match hand {
                Hand::Right => &a[r][col] * &inv,
                Hand::Left => &inv * &a[r][col],
            };
            for c in col..cols {
                let t = match hand {
                    Hand::Right => &d * &a[rank][c],
                    Hand::Left => &a[rank][c] * &d,
                };
                a[r][c] -= &t;
            }
        }
        rank += 1;
    }
    Ok(rank)
}

/// A + span(ē₁..ē_k) with coefficients on the scalar side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Plane {
    anchor: Point,
    span: Vec<Vector>,
    hand: Hand,
}

impl Plane {
    pub fn new(anchor: Point, span: Vec<Vector>, hand: Hand) -> Result<Plane> {
        for v in &span {
            check_dim(anchor.len(), v.len())?;
        }
        if nc_rank_with(&columns(&span, anchor.len()), hand)? != span.len() {
            return Err(AffineError::DependentSpan);
        }
        Ok(Plane { anchor, span, hand })
    }

    pub fn anchor(&self) -> &Point {
        &self.anchor
    }

    pub fn span(&self) -> &[Vector] {
        &self.span
    }

    pub fn dim(&self) -> usize {
        self.span.len()
    }

    /// B lies in the plane iff adding B − A as a column keeps the rank at k.
    pub fn contains(&self, b: &[Element]) -> Result<bool> {
        let mut cols = self.span.clone();
        cols.push(vec_between(&self.anchor, b)?);
        Ok(nc_rank_with(&columns(&cols, self.anchor.len()), self.hand)? == self.span.len())
    }
}

/// n × k matrix whose column t holds vector t.
fn columns(vs: &[Vector], n: usize) -> ElementMatrix {
    (0..n).map(|r| vs.iter().map(|v| v[r].clone()).collect()).collect()
}

pub fn plane_contains(pl: &Plane, b: &[Element]) -> Result<bool> {
    pl.contains(b)
}

/// g(v̄, w̄) = Σ_i ᵢᵢg(vⁱ, wⁱ) with a form on D per axis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorScalarProduct {
    axes: Vec<BilinearMatrix>,
}

impl VectorScalarProduct {
    pub fn new(axes: Vec<BilinearMatrix>) -> Result<VectorScalarProduct> {
        if let Some(g) = axes.first() {
            for h in &axes {
                if h.algebra() != g.algebra() {
                    return Err(AlgebraError::AlgebraMismatch.into());
                }
                check_dim(g.algebra().dim(), h.var_count())?;
            }
        }
        Ok(VectorScalarProduct { axes })
    }

    /// Same form on each of n axes.
    pub fn uniform(g: &BilinearMatrix, n: usize) -> Result<VectorScalarProduct> {
        VectorScalarProduct::new(vec![g.clone(); n])
    }

    /// Coordinate dot product on every axis (diagonal unit form).
    pub fn euclidean(alg: &Arc<Algebra>, n: usize) -> VectorScalarProduct {
        let g = BilinearMatrix::diagonal(alg, &vec![alg.one(); alg.dim()]);
        VectorScalarProduct { axes: vec![g; n] }
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn axes(&self) -> &[BilinearMatrix] {
        &self.axes
    }

    pub fn eval(&self, v: &[Element], w: &[Element]) -> Result<Element> {
        check_dim(self.dim(), v.len())?;
        check_dim(self.dim(), w.len())?;
        let alg = self.axes.first().map(|g| g.algebra().clone()).ok_or(AffineError::DimensionMismatch { expected: 1, found: 0 })?;
        let mut s = alg.zero();
        for ((g, a), b) in self.axes.iter().zip(v).zip(w) {
            s += &g.eval_elements(a, b)?;
        }
        Ok(s)
    }
}

pub fn eval_vector_product(g: &VectorScalarProduct, v: &[Element], w: &[Element]) -> Result<Element> {
    g.eval(v, w)
}

/// g(ēᵢ, ēᵢ) = 1 and g(ēᵢ, ēⱼ) = 0 for i ≠ j, with as many vectors as axes.
pub fn is_orthonormal(g: &VectorScalarProduct, basis: &[Vector]) -> Result<bool> {
    if basis.len() != g.dim() {
        return Ok(false);
    }
    let alg = g.axes[0].algebra();
    for (i, e) in basis.iter().enumerate() {
        for (j, f) in basis.iter().enumerate() {
            let want = if i == j { alg.one() } else { alg.zero() };
            if g.eval(e, f)? != want {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// g(vP, wP) = g(v, w) on all pairs of vectors eᵢ·ε_s, which span Dⁿ over
/// the rationals.
pub fn preserves_form(m: &AffineMap, g: &VectorScalarProduct) -> Result<bool> {
    if m.r.iter().any(|x| !x.is_zero()) {
        return Err(AffineError::NotLinear);
    }
    let n = m.dim();
    check_dim(g.dim(), n)?;
    let alg = g.axes[0].algebra();
    let spanning: Vec<Vector> = (0..n)
        .flat_map(|i| {
            (0..alg.dim()).map(move |s| (0..n).map(|k| if k == i { alg.basis(s) } else { alg.zero() }).collect())
        })
        .collect();
    let images: Vec<Vector> = spanning.iter().map(|v| m.apply(v)).collect::<Result<_>>()?;
    for (a, pa) in spanning.iter().zip(&images) {
        for (b, pb) in spanning.iter().zip(&images) {
            if g.eval(pa, pb)? != g.eval(a, b)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Carry the operations of the acting algebra to the acted carrier through
/// a base point v₀: ω(v₁..vₙ) = f(ω(a₁..aₙ))(v₀), where aₖ is the unique
/// element with f(aₖ)(v₀) = vₖ.
pub fn transfer_structure(rep: &Representation, v0: usize) -> Result<FiniteOmegaAlgebra> {
    if !rep.classify().unique_connecting {
        return Err(OmegaError::NotSingleTransitive.into());
    }
    let m = rep.acted();
    if v0 >= m.size() {
        return Err(OmegaError::Invalid(format!("base point {v0} out of range")).into());
    }
    let a = rep.acting();
    let from: Vec<usize> = (0..m.size())
        .map(|v| (0..a.size()).find(|&x| rep.act(x, v0) == v).expect("transitive"))
        .collect();
    let tables = a
        .signature()
        .ops()
        .iter()
        .enumerate()
        .map(|(op, o)| {
            m.tuples(o.arity)
                .map(|vs| {
                    let args: Vec<usize> = vs.iter().map(|&v| from[v]).collect();
                    rep.act(a.apply(op, &args), v0)
                })
                .collect()
        })
        .collect();
    Ok(FiniteOmegaAlgebra::new(m.labels().to_vec(), a.signature().clone(), tables)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::omega::builders::point_translation;
    use crate::text::parse_element;

    fn q(s: &str) -> Element {
        parse_element(s, &Algebra::quaternion()).unwrap()
    }

    fn qv(s: &[&str]) -> Vec<Element> {
        s.iter().map(|x| q(x)).collect()
    }

    #[test]
    fn shifts() {
        assert_eq!(shift(&qv(&["1", "i"]), &qv(&["j", "k"])).unwrap(), qv(&["1+j", "i+k"]));
        let a = qv(&["1", "i"]);
        let b = qv(&["j", "2k"]);
        assert_eq!(vec_between(&a, &a).unwrap(), qv(&["0", "0"]));
        let ab = vec_between(&a, &b).unwrap();
        assert_eq!(shift(&a, &ab).unwrap(), b);
    }

    #[test]
    fn one_dimensional_maps() {
        let m1 = AffineMap::new(vec![qv(&["i"])], qv(&["1"]), Hand::Right).unwrap();
        assert_eq!(m1.apply(&qv(&["j"])).unwrap(), qv(&["1-k"]));
        let m2 = AffineMap::new(vec![qv(&["j"])], qv(&["k"]), Hand::Right).unwrap();
        let c = m1.compose(&m2).unwrap();
        assert_eq!(c.p, vec![qv(&["k"])]);
        assert_eq!(c.r, qv(&["j+k"]));
        let inv = m1.inverse().unwrap();
        assert_eq!(inv.p, vec![qv(&["-i"])]);
        assert_eq!(inv.r, qv(&["i"]));
        let alg = Algebra::quaternion();
        assert_eq!(m1.compose(&inv).unwrap(), AffineMap::identity(&alg, 1, Hand::Right));
    }

    #[test]
    fn left_mirror() {
        let m = AffineMap::new(vec![qv(&["i"])], qv(&["1"]), Hand::Left).unwrap();
        assert_eq!(m.apply(&qv(&["j"])).unwrap(), qv(&["1+k"]));
        let alg = Algebra::quaternion();
        let singular = vec![qv(&["1", "i"]), qv(&["j", "k"])];
        assert_eq!(AffineMap::new(singular, qv(&["0", "0"]), Hand::Left), Err(AffineError::SingularLinearPart));
        let p = vec![qv(&["1", "i"]), qv(&["j", "-k"])];
        let m = AffineMap::new(p, qv(&["1", "0"]), Hand::Left).unwrap();
        assert_eq!(m.compose(&m.inverse().unwrap()).unwrap(), AffineMap::identity(&alg, 2, Hand::Left));
    }

    #[test]
    fn ranks() {
        let alg = Algebra::quaternion();
        assert_eq!(nc_rank(&identity_matrix(&alg, 3)).unwrap(), 3);
        assert_eq!(nc_rank(&[qv(&["1", "0"]), qv(&["i", "0"])]).unwrap(), 1);
        assert_eq!(nc_rank(&[qv(&["1", "i"]), qv(&["j", "k"])]).unwrap(), 2);
        // j·(1, i) = (j, -k): dependent over left multipliers only
        assert_eq!(nc_rank(&[qv(&["1", "i"]), qv(&["j", "-k"])]).unwrap(), 1);
        assert_eq!(nc_rank_with(&[qv(&["1", "i"]), qv(&["j", "-k"])], Hand::Left).unwrap(), 2);
    }

    #[test]
    fn planes() {
        let a = qv(&["1", "i"]);
        let pl = Plane::new(a.clone(), vec![qv(&["1", "0"])], Hand::Right).unwrap();
        assert!(pl.contains(&a).unwrap());
        assert!(pl.contains(&shift(&a, &qv(&["j", "0"])).unwrap()).unwrap());
        assert!(!pl.contains(&shift(&a, &qv(&["0", "1"])).unwrap()).unwrap());
        // (1, i)·j = (j, k)
        assert_eq!(Plane::new(a.clone(), vec![qv(&["1", "i"]), qv(&["j", "k"])], Hand::Right), Err(AffineError::DependentSpan));
        assert!(Plane::new(a, vec![qv(&["1", "i"]), qv(&["j", "-k"])], Hand::Right).is_ok());
    }

    #[test]
    fn scalar_products() {
        let alg = Algebra::quaternion();
        let g = VectorScalarProduct::euclidean(&alg, 2);
        assert_eq!(g.eval(&qv(&["1", "0"]), &qv(&["1", "0"])).unwrap(), alg.one());
        assert_eq!(g.eval(&qv(&["i", "0"]), &qv(&["j", "0"])).unwrap(), alg.zero());
        let std = vec![qv(&["1", "0"]), qv(&["0", "1"])];
        assert!(is_orthonormal(&g, &std).unwrap());
        assert!(is_orthonormal(&g, &[std[1].clone(), std[0].clone()]).unwrap());
        assert!(!is_orthonormal(&g, &[qv(&["2", "0"]), qv(&["0", "1"])]).unwrap());
        let swap = AffineMap::new(vec![qv(&["0", "1"]), qv(&["1", "0"])], qv(&["0", "0"]), Hand::Right).unwrap();
        assert!(preserves_form(&swap, &g).unwrap());
        let double = AffineMap::new(vec![qv(&["2", "0"]), qv(&["0", "2"])], qv(&["0", "0"]), Hand::Right).unwrap();
        assert!(!preserves_form(&double, &g).unwrap());
        assert!(preserves_form(&AffineMap::identity(&alg, 2, Hand::Right), &g).unwrap());
    }

    #[test]
    fn transferred_sum() {
        let rep = point_translation(3, 2);
        let sum = transfer_structure(&rep, 0).unwrap();
        let idx = |l: &str| sum.index_of(l).unwrap();
        assert_eq!(sum.apply(0, &[idx("p1"), idx("p3")]), idx("p4"));
        assert_eq!(sum.apply(0, &[idx("p5"), idx("p0")]), idx("p5"));
        let other = transfer_structure(&rep, 1).unwrap();
        assert_ne!(sum.tables(), other.tables());
    }
}
