//! Finite-dimensional algebras over ℚ given by structural constants.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::{Arc, OnceLock};

use num_traits::{One, Zero};
use thiserror::Error;

use crate::linalg::{self, LinearSolution, Matrix};
use crate::par::{self, Exec};
use crate::rational::{int, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("constants must be a {0}x{0}x{0} array")]
    Shape(usize),
    #[error("unit index {0} out of range")]
    UnitOutOfRange(usize),
    #[error("associativity fails at i={i}, m={m}, n={n}, k={k}")]
    AssociativityViolation { i: usize, m: usize, n: usize, k: usize },
    #[error("unit is not two-sided at basis vector {0}")]
    UnitViolation(usize),
    #[error("elements belong to different algebras")]
    AlgebraMismatch,
    #[error("expected {expected} coordinates, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("zero has no inverse")]
    ZeroElement,
    #[error("element is not invertible")]
    NotInvertible,
    #[error("basis change is singular")]
    SingularBasisChange,
}

type Result<T> = std::result::Result<T, AlgebraError>;

/// An associative unital algebra with basis e_0..e_{n-1} and
/// e_i e_j = Σ_k C[i][j][k] e_k.
#[derive(Clone)]
pub struct Algebra {
    dim: usize,
    constants: Vec<Rational>,
    terms: Vec<(usize, usize, usize, Rational)>,
    unit_index: Option<usize>,
    unit: Vec<Rational>,
    names: Vec<String>,
    label: Option<String>,
}

impl PartialEq for Algebra {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.constants == other.constants && self.unit == other.unit
    }
}

impl Eq for Algebra {}

impl Algebra {
    /// Validate a constant table and its unit.
    pub fn new(constants: Vec<Vec<Vec<Rational>>>, unit_index: usize) -> Result<Arc<Algebra>> {
        Self::new_with(constants, unit_index, Exec::default())
    }

    pub fn new_with(
        constants: Vec<Vec<Vec<Rational>>>,
        unit_index: usize,
        exec: Exec,
    ) -> Result<Arc<Algebra>> {
        let dim = constants.len();
        if dim == 0
            || constants
                .iter()
                .any(|m| m.len() != dim || m.iter().any(|r| r.len() != dim))
        {
            return Err(AlgebraError::Shape(dim));
        }
        if unit_index >= dim {
            return Err(AlgebraError::UnitOutOfRange(unit_index));
        }
        let flat: Vec<Rational> = constants.into_iter().flatten().flatten().collect();
        let mut unit = vec![Rational::zero(); dim];
        unit[unit_index] = Rational::one();
        let alg = Self::from_flat(dim, flat, unit, Some(unit_index));
        alg.check_unit_index(unit_index)?;
        alg.check_associative(exec)?;
        Ok(Arc::new(alg))
    }

    fn from_flat(dim: usize, constants: Vec<Rational>, unit: Vec<Rational>, unit_index: Option<usize>) -> Algebra {
        let mut terms = Vec::new();
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    let c = &constants[(i * dim + j) * dim + k];
                    if !c.is_zero() {
                        terms.push((i, j, k, c.clone()));
                    }
                }
            }
        }
        Algebra {
            dim,
            constants,
            terms,
            unit_index,
            unit,
            names: (0..dim).map(|i| format!("e{i}")).collect(),
            label: None,
        }
    }

    fn check_unit_index(&self, u: usize) -> Result<()> {
        for j in 0..self.dim {
            for k in 0..self.dim {
                let delta = if j == k { Rational::one() } else { Rational::zero() };
                if *self.c(u, j, k) != delta || *self.c(j, u, k) != delta {
                    return Err(AlgebraError::UnitViolation(j));
                }
            }
        }
        Ok(())
    }

    /// Check (e_i e_m) e_n = e_i (e_m e_n) for every basis triple and output index.
    pub fn check_associative(&self, exec: Exec) -> Result<()> {
        let n = self.dim;
        let found = par::find_first(exec, n, |i| {
            for m in 0..n {
                for nn in 0..n {
                    for k in 0..n {
                        let mut lhs = Rational::zero();
                        let mut rhs = Rational::zero();
                        for j in 0..n {
                            let a = self.c(i, m, j);
                            if !a.is_zero() {
                                lhs += a * self.c(j, nn, k);
                            }
                            let b = self.c(m, nn, j);
                            if !b.is_zero() {
                                rhs += self.c(i, j, k) * b;
                            }
                        }
                        if lhs != rhs {
                            return Some((i, m, nn, k));
                        }
                    }
                }
            }
            None
        });
        match found {
            Some((i, m, n, k)) => Err(AlgebraError::AssociativityViolation { i, m, n, k }),
            None => Ok(()),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Structural constant C[i][j][k].
    pub fn c(&self, i: usize, j: usize, k: usize) -> &Rational {
        &self.constants[(i * self.dim + j) * self.dim + k]
    }

    pub fn constants(&self) -> Vec<Vec<Vec<Rational>>> {
        let n = self.dim;
        (0..n)
            .map(|i| (0..n).map(|j| (0..n).map(|k| self.c(i, j, k).clone()).collect()).collect())
            .collect()
    }

    /// Nonzero constants as (i, j, k, C[i][j][k]).
    pub fn terms(&self) -> &[(usize, usize, usize, Rational)] {
        &self.terms
    }

    /// Index of the basis vector equal to the unit, when there is one.
    pub fn unit_index(&self) -> Option<usize> {
        self.unit_index
    }

    pub fn unit_coords(&self) -> &[Rational] {
        &self.unit
    }

    pub fn basis_names(&self) -> &[String] {
        &self.names
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    fn named(mut self, label: &str, names: &[&str]) -> Algebra {
        self.label = Some(label.to_string());
        self.names = names.iter().map(|s| s.to_string()).collect();
        self
    }

    /// Hamilton quaternions with basis 1, i, j, k.
    pub fn quaternion() -> Arc<Algebra> {
        static Q: OnceLock<Arc<Algebra>> = OnceLock::new();
        Q.get_or_init(|| {
            // e_a e_b = sign * e_c
            let table: [[(i64, usize); 4]; 4] = [
                [(1, 0), (1, 1), (1, 2), (1, 3)],
                [(1, 1), (-1, 0), (1, 3), (-1, 2)],
                [(1, 2), (-1, 3), (-1, 0), (1, 1)],
                [(1, 3), (1, 2), (-1, 1), (-1, 0)],
            ];
            Self::from_sign_table(&table, "quaternion", &["1", "i", "j", "k"])
        })
        .clone()
    }

    /// Gaussian rationals with basis 1, i.
    pub fn complex() -> Arc<Algebra> {
        static C: OnceLock<Arc<Algebra>> = OnceLock::new();
        C.get_or_init(|| {
            let table: [[(i64, usize); 2]; 2] = [[(1, 0), (1, 1)], [(1, 1), (-1, 0)]];
            Self::from_sign_table(&table, "complex", &["1", "i"])
        })
        .clone()
    }

    /// ℚ itself.
    pub fn rational() -> Arc<Algebra> {
        static R: OnceLock<Arc<Algebra>> = OnceLock::new();
        R.get_or_init(|| Self::from_sign_table(&[[(1, 0)]], "rational", &["1"]))
            .clone()
    }

    fn from_sign_table<const N: usize>(
        table: &[[(i64, usize); N]; N],
        label: &str,
        names: &[&str],
    ) -> Arc<Algebra> {
        let mut c = vec![vec![vec![Rational::zero(); N]; N]; N];
        for (a, row) in table.iter().enumerate() {
            for (b, &(s, k)) in row.iter().enumerate() {
                c[a][b][k] = int(s);
            }
        }
        let alg = Algebra::new(c, 0).expect("built-in table is valid");
        Arc::new(Arc::unwrap_or_clone(alg).named(label, names))
    }

    /// Look up a built-in algebra by name.
    pub fn builtin(name: &str) -> Option<Arc<Algebra>> {
        match name {
            "quaternion" => Some(Self::quaternion()),
            "complex" => Some(Self::complex()),
            "rational" => Some(Self::rational()),
            _ => None,
        }
    }

    pub fn zero(self: &Arc<Self>) -> Element {
        Element { coords: vec![Rational::zero(); self.dim], alg: self.clone() }
    }

    pub fn one(self: &Arc<Self>) -> Element {
        Element { coords: self.unit.clone(), alg: self.clone() }
    }

    pub fn basis(self: &Arc<Self>, i: usize) -> Element {
        let mut coords = vec![Rational::zero(); self.dim];
        coords[i] = Rational::one();
        Element { coords, alg: self.clone() }
    }

    pub fn scalar(self: &Arc<Self>, q: Rational) -> Element {
        self.one().scale(&q)
    }

    pub fn element(self: &Arc<Self>, coords: Vec<Rational>) -> Result<Element> {
        if coords.len() != self.dim {
            return Err(AlgebraError::DimensionMismatch { expected: self.dim, found: coords.len() });
        }
        Ok(Element { coords, alg: self.clone() })
    }

    /// Matrix of x ↦ a x in the basis, so that (a x)_k = Σ_j L[k][j] x_j.
    pub fn left_regular(&self, a: &[Rational]) -> Matrix {
        let mut m = linalg::zeros(self.dim, self.dim);
        for (i, j, k, c) in &self.terms {
            if !a[*i].is_zero() {
                m[*k][*j] += c * &a[*i];
            }
        }
        m
    }

    /// Matrix of x ↦ x a.
    pub fn right_regular(&self, a: &[Rational]) -> Matrix {
        let mut m = linalg::zeros(self.dim, self.dim);
        for (i, j, k, c) in &self.terms {
            if !a[*j].is_zero() {
                m[*k][*i] += c * &a[*j];
            }
        }
        m
    }

    fn mul_coords(&self, a: &[Rational], b: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.dim];
        for (i, j, k, c) in &self.terms {
            if !a[*i].is_zero() && !b[*j].is_zero() {
                let p = &a[*i] * &b[*j];
                if c.is_one() {
                    out[*k] += p;
                } else if (-c).is_one() {
                    out[*k] -= p;
                } else {
                    out[*k] += c * p;
                }
            }
        }
        out
    }
}

impl fmt::Debug for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.label {
            Some(l) => write!(f, "Algebra({l})"),
            None => write!(f, "Algebra(dim {})", self.dim),
        }
    }
}

/// An element a = Σ a^i e_i.
#[derive(Clone)]
pub struct Element {
    coords: Vec<Rational>,
    alg: Arc<Algebra>,
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Element({self})")
    }
}

impl PartialEq for Element {
    fn eq(&self, other: &Self) -> bool {
        self.coords == other.coords && same_algebra(&self.alg, &other.alg)
    }
}

impl Eq for Element {}

fn same_algebra(a: &Arc<Algebra>, b: &Arc<Algebra>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl Element {
    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.alg
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    /// The rational q when this element is q·1.
    pub fn as_scalar(&self) -> Option<Rational> {
        let u = &self.alg.unit;
        let pos = u.iter().position(|x| !x.is_zero())?;
        let q = &self.coords[pos] / &u[pos];
        if self.coords.iter().zip(u).all(|(c, e)| *c == &q * e) {
            Some(q)
        } else {
            None
        }
    }

    pub fn scale(&self, q: &Rational) -> Element {
        Element { coords: self.coords.iter().map(|c| c * q).collect(), alg: self.alg.clone() }
    }

    pub fn checked_mul(&self, rhs: &Element) -> Result<Element> {
        if !same_algebra(&self.alg, &rhs.alg) {
            return Err(AlgebraError::AlgebraMismatch);
        }
        Ok(Element { coords: self.alg.mul_coords(&self.coords, &rhs.coords), alg: self.alg.clone() })
    }

    pub fn checked_add(&self, rhs: &Element) -> Result<Element> {
        if !same_algebra(&self.alg, &rhs.alg) {
            return Err(AlgebraError::AlgebraMismatch);
        }
        Ok(Element {
            coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a + b).collect(),
            alg: self.alg.clone(),
        })
    }

    /// Two-sided inverse, found from the left regular representation and
    /// then checked on the right.
    pub fn inverse(&self) -> Result<Element> {
        if self.is_zero() {
            return Err(AlgebraError::ZeroElement);
        }
        let l = self.alg.left_regular(&self.coords);
        let x = match linalg::solve(&l, &self.alg.unit) {
            LinearSolution::Unique(x) => x,
            _ => return Err(AlgebraError::NotInvertible),
        };
        let x = Element { coords: x, alg: self.alg.clone() };
        if &x * self != self.alg.one() {
            return Err(AlgebraError::NotInvertible);
        }
        Ok(x)
    }

    /// Commutes with every basis vector, hence with everything.
    pub fn is_central(&self) -> bool {
        (0..self.alg.dim).all(|x| {
            let e = self.alg.basis(x);
            self * &e == &e * self
        })
    }

    pub fn pow(&self, k: u32) -> Element {
        (0..k).fold(self.alg.one(), |acc, _| &acc * self)
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::text::format_element(self))
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl $tr<&Element> for &Element {
            type Output = Element;
            fn $m(self, rhs: &Element) -> Element {
                assert!(same_algebra(&self.alg, &rhs.alg), "elements belong to different algebras");
                let coords = $body(self, rhs);
                Element { coords, alg: self.alg.clone() }
            }
        }
        impl $tr<Element> for Element {
            type Output = Element;
            fn $m(self, rhs: Element) -> Element {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Element> for Element {
            type Output = Element;
            fn $m(self, rhs: &Element) -> Element {
                (&self).$m(rhs)
            }
        }
        impl $tr<Element> for &Element {
            type Output = Element;
            fn $m(self, rhs: Element) -> Element {
                self.$m(&rhs)
            }
        }
    };
}

binop!(Add, add, |a: &Element, b: &Element| a
    .coords
    .iter()
    .zip(&b.coords)
    .map(|(x, y)| x + y)
    .collect::<Vec<_>>());
binop!(Sub, sub, |a: &Element, b: &Element| a
    .coords
    .iter()
    .zip(&b.coords)
    .map(|(x, y)| x - y)
    .collect::<Vec<_>>());
binop!(Mul, mul, |a: &Element, b: &Element| a.alg.mul_coords(&a.coords, &b.coords));

impl Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        Element { coords: self.coords.iter().map(|c| -c).collect(), alg: self.alg.clone() }
    }
}

impl Neg for Element {
    type Output = Element;
    fn neg(self) -> Element {
        -&self
    }
}

impl AddAssign<&Element> for Element {
    fn add_assign(&mut self, rhs: &Element) {
        assert!(same_algebra(&self.alg, &rhs.alg), "elements belong to different algebras");
        for (a, b) in self.coords.iter_mut().zip(&rhs.coords) {
            *a += b;
        }
    }
}

impl SubAssign<&Element> for Element {
    fn sub_assign(&mut self, rhs: &Element) {
        assert!(same_algebra(&self.alg, &rhs.alg), "elements belong to different algebras");
        for (a, b) in self.coords.iter_mut().zip(&rhs.coords) {
            *a -= b;
        }
    }
}

/// New basis e'_i = Σ_j e_j A_i^j, stored with `matrix[j][i] = A_i^j`, so
/// column i holds the old coordinates of e'_i.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisChange {
    matrix: Matrix,
    inverse: Matrix,
}

impl BasisChange {
    pub fn new(matrix: Matrix) -> Result<BasisChange> {
        let n = matrix.len();
        if matrix.iter().any(|r| r.len() != n) {
            return Err(AlgebraError::SingularBasisChange);
        }
        let inverse = linalg::inverse(&matrix).ok_or(AlgebraError::SingularBasisChange)?;
        Ok(BasisChange { matrix, inverse })
    }

    pub fn identity(n: usize) -> BasisChange {
        BasisChange { matrix: linalg::identity(n), inverse: linalg::identity(n) }
    }

    /// Exchange e_a and e_b.
    pub fn swap(n: usize, a: usize, b: usize) -> BasisChange {
        let mut m = linalg::identity(n);
        m.swap(a, b);
        BasisChange::new(m).expect("permutation is invertible")
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn inverse(&self) -> &Matrix {
        &self.inverse
    }

    /// Change by `self` first, then by `next` (expressed in the intermediate basis).
    pub fn then(&self, next: &BasisChange) -> BasisChange {
        BasisChange {
            matrix: linalg::mat_mul(&self.matrix, &next.matrix),
            inverse: linalg::mat_mul(&next.inverse, &self.inverse),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.len()
    }
}

/// Coordinates of `a` in the new basis: a' = A⁻¹ a.
pub fn transform_vector(a: &Element, change: &BasisChange) -> Result<Vec<Rational>> {
    if change.dim() != a.alg.dim {
        return Err(AlgebraError::SingularBasisChange);
    }
    Ok(linalg::mat_vec(&change.inverse, &a.coords))
}

/// Structural constants relative to the new basis.
pub fn change_basis(alg: &Arc<Algebra>, change: &BasisChange) -> Result<Arc<Algebra>> {
    change_basis_with(alg, change, Exec::default())
}

pub fn change_basis_with(alg: &Arc<Algebra>, change: &BasisChange, exec: Exec) -> Result<Arc<Algebra>> {
    let n = alg.dim;
    if change.dim() != n {
        return Err(AlgebraError::SingularBasisChange);
    }
    let cols: Vec<Vec<Rational>> = linalg::transpose(&change.matrix);
    // products e'_i e'_j, one block of rows per i
    let blocks = par::map_range(exec, n, |i| {
        let mut out = Vec::with_capacity(n * n);
        for j in 0..n {
            let old = alg.mul_coords(&cols[i], &cols[j]);
            out.extend(linalg::mat_vec(&change.inverse, &old));
        }
        out
    });
    let flat: Vec<Rational> = blocks.into_iter().flatten().collect();
    let unit = linalg::mat_vec(&change.inverse, &alg.unit);
    let unit_index = unit
        .iter()
        .position(|x| x.is_one())
        .filter(|&p| unit.iter().enumerate().all(|(i, x)| i == p || x.is_zero()));
    let out = Algebra::from_flat(n, flat, unit, unit_index);
    out.check_associative(exec)?;
    Ok(Arc::new(out))
}
