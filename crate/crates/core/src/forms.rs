//! Bilinear and quadratic maps of a division ring over ℚ.

use std::sync::Arc;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::algebra::{Algebra, Element};
use crate::linalg::{self, LinearSolution, Matrix};
use crate::par::{self, Exec};
use crate::rational::{int, rat, sign, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormError {
    #[error("matrix must be square with entries in one algebra")]
    Shape,
    #[error("expected {expected} coordinates, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not symmetric at ({0}, {1})")]
    NotSymmetric(usize, usize),
    #[error("no completion for variable {j} with pivot variable {pivot}")]
    PivotConditionFailed { pivot: usize, j: usize },
    #[error("diagonal entry {0} is zero")]
    ZeroDiagonalEntry(usize),
    #[error("entry ({0}, {1}) off the diagonal is nonzero")]
    NotDiagonal(usize, usize),
    #[error("diagonal entry {0} is not a rational multiple of the unit")]
    NotRationalDiagonal(usize),
}

type Result<T> = std::result::Result<T, FormError>;

fn check_square(alg: &Arc<Algebra>, entries: &[Vec<Element>]) -> Result<()> {
    let m = entries.len();
    if entries
        .iter()
        .any(|r| r.len() != m || r.iter().any(|e| **e.algebra() != **alg))
    {
        return Err(FormError::Shape);
    }
    Ok(())
}

fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(FormError::DimensionMismatch { expected, found })
    }
}

/// g(a, b) = Σ a^i b^j g_ij with rational coordinates a, b.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BilinearMatrix {
    alg: Arc<Algebra>,
    entries: Vec<Vec<Element>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Symmetry {
    Symmetric,
    Skew,
    Neither,
}

impl BilinearMatrix {
    pub fn new(alg: &Arc<Algebra>, entries: Vec<Vec<Element>>) -> Result<BilinearMatrix> {
        check_square(alg, &entries)?;
        Ok(BilinearMatrix { alg: alg.clone(), entries })
    }

    pub fn zero(alg: &Arc<Algebra>, m: usize) -> BilinearMatrix {
        BilinearMatrix { alg: alg.clone(), entries: vec![vec![alg.zero(); m]; m] }
    }

    pub fn diagonal(alg: &Arc<Algebra>, diag: &[Element]) -> BilinearMatrix {
        let mut g = BilinearMatrix::zero(alg, diag.len());
        for (i, d) in diag.iter().enumerate() {
            g.entries[i][i] = d.clone();
        }
        g
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.alg
    }

    pub fn var_count(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Vec<Element>] {
        &self.entries
    }

    pub fn entry(&self, i: usize, j: usize) -> &Element {
        &self.entries[i][j]
    }

    pub fn transpose(&self) -> BilinearMatrix {
        let m = self.var_count();
        let entries = (0..m).map(|i| (0..m).map(|j| self.entries[j][i].clone()).collect()).collect();
        BilinearMatrix { alg: self.alg.clone(), entries }
    }

    pub fn eval(&self, a: &[Rational], b: &[Rational]) -> Result<Element> {
        check_len(self.var_count(), a.len())?;
        check_len(self.var_count(), b.len())?;
        let mut out = self.alg.zero();
        for (i, ai) in a.iter().enumerate() {
            for (j, bj) in b.iter().enumerate() {
                let w = ai * bj;
                if !w.is_zero() {
                    out += &self.entries[i][j].scale(&w);
                }
            }
        }
        Ok(out)
    }

    /// Evaluate on two algebra elements, using their coordinates as the form variables.
    pub fn eval_elements(&self, a: &Element, b: &Element) -> Result<Element> {
        self.eval(a.coords(), b.coords())
    }

    pub fn symmetry_class(&self) -> Symmetry {
        let m = self.var_count();
        let pairs = || (0..m).flat_map(|i| (0..m).map(move |j| (i, j)));
        if pairs().all(|(i, j)| self.entries[i][j] == self.entries[j][i]) {
            Symmetry::Symmetric
        } else if pairs().all(|(i, j)| self.entries[i][j] == -&self.entries[j][i]) {
            Symmetry::Skew
        } else {
            Symmetry::Neither
        }
    }
}

/// The two families of standard components of a bilinear map D × D → D:
/// f(a, b) = f1^{ijk} e_i a e_j b e_k + f2^{ijk} e_i b e_j a e_k.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StandardComponents {
    alg: Arc<Algebra>,
    f1: Vec<Rational>,
    f2: Vec<Rational>,
}

impl StandardComponents {
    pub fn new(
        alg: &Arc<Algebra>,
        f1: Vec<Vec<Vec<Rational>>>,
        f2: Vec<Vec<Vec<Rational>>>,
    ) -> Result<StandardComponents> {
        let n = alg.dim();
        let ok = |f: &Vec<Vec<Vec<Rational>>>| {
            f.len() == n && f.iter().all(|m| m.len() == n && m.iter().all(|r| r.len() == n))
        };
        if !ok(&f1) || !ok(&f2) {
            return Err(FormError::Shape);
        }
        Ok(StandardComponents {
            alg: alg.clone(),
            f1: f1.into_iter().flatten().flatten().collect(),
            f2: f2.into_iter().flatten().flatten().collect(),
        })
    }

    pub fn zero(alg: &Arc<Algebra>) -> StandardComponents {
        let n3 = alg.dim().pow(3);
        StandardComponents { alg: alg.clone(), f1: vec![Rational::zero(); n3], f2: vec![Rational::zero(); n3] }
    }

    pub fn set(&mut self, which: usize, i: usize, j: usize, k: usize, q: Rational) {
        let n = self.alg.dim();
        let f = if which == 1 { &mut self.f1 } else { &mut self.f2 };
        f[(i * n + j) * n + k] = q;
    }

    /// Exchange the two families; the resulting map has the transposed matrix.
    pub fn swap(&self) -> StandardComponents {
        StandardComponents { alg: self.alg.clone(), f1: self.f2.clone(), f2: self.f1.clone() }
    }

    fn nonzero(&self, f: &[Rational]) -> Vec<(usize, usize, usize, Rational)> {
        let n = self.alg.dim();
        f.iter()
            .enumerate()
            .filter(|(_, q)| !q.is_zero())
            .map(|(idx, q)| (idx / (n * n), (idx / n) % n, idx % n, q.clone()))
            .collect()
    }

    /// Direct evaluation from the defining sum.
    pub fn eval(&self, a: &Element, b: &Element) -> Element {
        let e = |i| self.alg.basis(i);
        let mut out = self.alg.zero();
        for (i, j, k, q) in self.nonzero(&self.f1) {
            out += &(e(i) * a * e(j) * b * e(k)).scale(&q);
        }
        for (i, j, k, q) in self.nonzero(&self.f2) {
            out += &(e(i) * b * e(j) * a * e(k)).scale(&q);
        }
        out
    }
}

/// Matrix of the bilinear map with the given standard components:
/// g_pq = f1^{ijk} e_i e_p e_j e_q e_k + f2^{ijk} e_i e_q e_j e_p e_k.
pub fn bilinear_from_standard(sc: &StandardComponents) -> BilinearMatrix {
    bilinear_from_standard_with(sc, Exec::default())
}

pub fn bilinear_from_standard_with(sc: &StandardComponents, exec: Exec) -> BilinearMatrix {
    let alg = &sc.alg;
    let n = alg.dim();
    let t1 = sc.nonzero(&sc.f1);
    let t2 = sc.nonzero(&sc.f2);
    let entries = par::map_range(exec, n, |p| {
        (0..n)
            .map(|q| {
                let e = |i| alg.basis(i);
                let mut g = alg.zero();
                for (i, j, k, c) in &t1 {
                    g += &(e(*i) * e(p) * e(*j) * e(q) * e(*k)).scale(c);
                }
                for (i, j, k, c) in &t2 {
                    g += &(e(*i) * e(q) * e(*j) * e(p) * e(*k)).scale(c);
                }
                g
            })
            .collect()
    });
    BilinearMatrix { alg: alg.clone(), entries }
}

/// f(a) = Σ a^i a^j f_ij with f_ij = f_ji.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticMatrix {
    alg: Arc<Algebra>,
    entries: Vec<Vec<Element>>,
}

impl QuadraticMatrix {
    pub fn new(alg: &Arc<Algebra>, entries: Vec<Vec<Element>>) -> Result<QuadraticMatrix> {
        check_square(alg, &entries)?;
        let m = entries.len();
        for i in 0..m {
            for j in i + 1..m {
                if entries[i][j] != entries[j][i] {
                    return Err(FormError::NotSymmetric(i, j));
                }
            }
        }
        Ok(QuadraticMatrix { alg: alg.clone(), entries })
    }

    pub fn diagonal(alg: &Arc<Algebra>, diag: &[Element]) -> QuadraticMatrix {
        let g = BilinearMatrix::diagonal(alg, diag);
        QuadraticMatrix { alg: alg.clone(), entries: g.entries }
    }

    /// Symmetrize: f_ij = (g_ij + g_ji) / 2.
    pub fn from_bilinear(g: &BilinearMatrix) -> QuadraticMatrix {
        let m = g.var_count();
        let half = rat(1, 2);
        let entries = (0..m)
            .map(|i| (0..m).map(|j| (&g.entries[i][j] + &g.entries[j][i]).scale(&half)).collect())
            .collect();
        QuadraticMatrix { alg: g.alg.clone(), entries }
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.alg
    }

    pub fn var_count(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Vec<Element>] {
        &self.entries
    }

    pub fn entry(&self, i: usize, j: usize) -> &Element {
        &self.entries[i][j]
    }

    pub fn eval(&self, a: &[Rational]) -> Result<Element> {
        check_len(self.var_count(), a.len())?;
        let mut out = self.alg.zero();
        for (i, ai) in a.iter().enumerate() {
            for (j, aj) in a.iter().enumerate() {
                let w = ai * aj;
                if !w.is_zero() {
                    out += &self.entries[i][j].scale(&w);
                }
            }
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(Element::is_zero)
    }
}

pub fn quadratic_from_bilinear(g: &BilinearMatrix) -> QuadraticMatrix {
    QuadraticMatrix::from_bilinear(g)
}

/// Solutions of a x + x a = b.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AxxaSolution {
    Unique(Element),
    Infinite { witness: Element, nullspace_dim: usize },
    None,
}

impl AxxaSolution {
    pub fn witness(&self) -> Option<&Element> {
        match self {
            AxxaSolution::Unique(x) => Some(x),
            AxxaSolution::Infinite { witness, .. } => Some(witness),
            AxxaSolution::None => None,
        }
    }
}

/// Matrix of x ↦ a x + x a.
pub fn axxa_matrix(a: &Element) -> Matrix {
    let alg = a.algebra();
    let l = alg.left_regular(a.coords());
    let r = alg.right_regular(a.coords());
    l.iter()
        .zip(&r)
        .map(|(lr, rr)| lr.iter().zip(rr).map(|(x, y)| x + y).collect())
        .collect()
}

pub fn solve_axxa(a: &Element, b: &Element) -> AxxaSolution {
    let alg = a.algebra();
    match linalg::solve(&axxa_matrix(a), b.coords()) {
        LinearSolution::Unique(x) => AxxaSolution::Unique(alg.element(x).expect("dimension")),
        LinearSolution::Infinite(x, nullspace_dim) => AxxaSolution::Infinite {
            witness: alg.element(x).expect("dimension"),
            nullspace_dim,
        },
        LinearSolution::Inconsistent => AxxaSolution::None,
    }
}

/// One square d·(L(a))², with L(a) = Σ a^i L_i over the original variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquareTerm {
    /// The pivot coefficient P; the term coefficient is P⁻¹.
    pub pivot: Element,
    pub coefficient: Element,
    pub covector: Vec<Element>,
}

impl SquareTerm {
    pub fn linear(&self, a: &[Rational]) -> Element {
        let alg = self.pivot.algebra();
        let mut out = alg.zero();
        for (ai, li) in a.iter().zip(&self.covector) {
            if !ai.is_zero() {
                out += &li.scale(ai);
            }
        }
        out
    }

    pub fn eval(&self, a: &[Rational]) -> Element {
        let l = self.linear(a);
        &self.coefficient * &l * &l
    }
}

/// The extra substitution c_i = b_i − b_j, c_j = b_i + b_j applied when every
/// remaining diagonal entry vanishes. Indices refer to the variables
/// remaining at that step.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PairSubstitution {
    pub step: usize,
    pub i: usize,
    pub j: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagonalization {
    pub terms: Vec<SquareTerm>,
    pub extra_linear: Vec<PairSubstitution>,
    pub residual_rank: usize,
}

impl Diagonalization {
    pub fn diagonal(&self) -> Vec<Element> {
        self.terms.iter().map(|t| t.coefficient.clone()).collect()
    }

    pub fn pivots(&self) -> Vec<Element> {
        self.terms.iter().map(|t| t.pivot.clone()).collect()
    }

    pub fn covectors(&self) -> Vec<Vec<Element>> {
        self.terms.iter().map(|t| t.covector.clone()).collect()
    }

    /// Σ d_k L_k(a)², which equals the original form.
    pub fn eval(&self, alg: &Arc<Algebra>, a: &[Rational]) -> Element {
        let mut out = alg.zero();
        for t in &self.terms {
            out += &t.eval(a);
        }
        out
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DiagonalizeOptions {
    /// On a failed completion, backtrack and try every other admissible pivot.
    pub try_all_pivots: bool,
}

/// Residual form over current variables c_t = Σ_i s[t][i] a^i.
#[derive(Clone)]
struct State {
    form: Vec<Vec<Element>>,
    s: Matrix,
    terms: Vec<SquareTerm>,
    extra: Vec<PairSubstitution>,
}

pub fn diagonalize(f: &QuadraticMatrix) -> Result<Diagonalization> {
    diagonalize_with(f, DiagonalizeOptions::default())
}

pub fn diagonalize_with(f: &QuadraticMatrix, opts: DiagonalizeOptions) -> Result<Diagonalization> {
    let m = f.var_count();
    let state = State { form: f.entries.clone(), s: linalg::identity(m), terms: vec![], extra: vec![] };
    let done = complete(&f.alg, state, opts)?;
    Ok(Diagonalization { residual_rank: done.terms.len(), terms: done.terms, extra_linear: done.extra })
}

fn complete(alg: &Arc<Algebra>, mut st: State, opts: DiagonalizeOptions) -> Result<State> {
    loop {
        let r = st.form.len();
        let candidates: Vec<usize> = (0..r).filter(|&i| !st.form[i][i].is_zero()).collect();
        if candidates.is_empty() {
            let pair = (0..r).flat_map(|i| (i + 1..r).map(move |j| (i, j))).find(|&(i, j)| !st.form[i][j].is_zero());
            match pair {
                None => return Ok(st),
                Some((i, j)) => {
                    pair_substitution(&mut st, i, j);
                    continue;
                }
            }
        }
        if !opts.try_all_pivots {
            st = complete_square(alg, st, candidates[0])?;
            continue;
        }
        let mut first_err = None;
        for &p in &candidates {
            let attempt = complete_square(alg, st.clone(), p).and_then(|next| complete(alg, next, opts));
            match attempt {
                Ok(done) => return Ok(done),
                Err(e) => {
                    first_err.get_or_insert(e);
                }
            }
        }
        return Err(first_err.expect("at least one candidate"));
    }
}

fn pair_substitution(st: &mut State, i: usize, j: usize) {
    let r = st.form.len();
    // c = T b, so the form becomes Tᵀ F T and b = T⁻¹ c
    let mut t = linalg::identity(r);
    t[i][j] = int(-1);
    t[j][i] = int(1);
    let mut tinv = linalg::identity(r);
    tinv[i][i] = rat(1, 2);
    tinv[i][j] = rat(1, 2);
    tinv[j][i] = rat(-1, 2);
    tinv[j][j] = rat(1, 2);
    let f = &st.form;
    let alg = f[0][0].algebra().clone();
    let mut g = vec![vec![alg.zero(); r]; r];
    for a in 0..r {
        for b in 0..r {
            for s in 0..r {
                if t[s][a].is_zero() {
                    continue;
                }
                for u in 0..r {
                    let w = &t[s][a] * &t[u][b];
                    if !w.is_zero() {
                        g[a][b] += &f[s][u].scale(&w);
                    }
                }
            }
        }
    }
    st.form = g;
    st.s = linalg::mat_mul(&tinv, &st.s);
    st.extra.push(PairSubstitution { step: st.terms.len(), i, j });
}

fn complete_square(alg: &Arc<Algebra>, mut st: State, p: usize) -> Result<State> {
    let r = st.form.len();
    let pivot = st.form[p][p].clone();
    let pinv = pivot.inverse().map_err(|_| FormError::PivotConditionFailed { pivot: p, j: p })?;
    let two = int(2);
    let mut h = Vec::with_capacity(r);
    for j in 0..r {
        if j == p {
            h.push(pivot.clone());
            continue;
        }
        let b = (&pivot * &st.form[p][j]).scale(&two);
        match solve_axxa(&pivot, &b).witness() {
            Some(x) => h.push(x.clone()),
            None => return Err(FormError::PivotConditionFailed { pivot: p, j }),
        }
    }
    let m = st.s.first().map_or(0, Vec::len);
    let covector: Vec<Element> = (0..m)
        .map(|i| {
            let mut acc = alg.zero();
            for t in 0..r {
                if !st.s[t][i].is_zero() {
                    acc += &h[t].scale(&st.s[t][i]);
                }
            }
            acc
        })
        .collect();
    let half = rat(1, 2);
    let keep: Vec<usize> = (0..r).filter(|&j| j != p).collect();
    let form = keep
        .iter()
        .map(|&j| {
            keep.iter()
                .map(|&k| {
                    let sym = (&h[j] * &h[k] + &h[k] * &h[j]).scale(&half);
                    &st.form[j][k] - &(&pinv * &sym)
                })
                .collect()
        })
        .collect();
    st.terms.push(SquareTerm { pivot, coefficient: pinv, covector });
    st.form = form;
    st.s = keep.iter().map(|&j| st.s[j].clone()).collect();
    Ok(st)
}

/// Sign-flip involution a* = Σ s_i a^i e_i of a diagonal form with rational
/// diagonal, s_i = sign(f(e_i)).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hermitian {
    alg: Arc<Algebra>,
    diag: Vec<Rational>,
    signs: Vec<i8>,
}

pub fn hermitian_conjugation(f: &QuadraticMatrix) -> Result<Hermitian> {
    let m = f.var_count();
    let mut diag = Vec::with_capacity(m);
    for i in 0..m {
        for j in 0..m {
            if i != j && !f.entries[i][j].is_zero() {
                return Err(FormError::NotDiagonal(i, j));
            }
        }
        let d = f.entries[i][i].as_scalar().ok_or(FormError::NotRationalDiagonal(i))?;
        if d.is_zero() {
            return Err(FormError::ZeroDiagonalEntry(i));
        }
        diag.push(d);
    }
    let signs = diag.iter().map(sign).collect();
    Ok(Hermitian { alg: f.alg.clone(), diag, signs })
}

impl Hermitian {
    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn conjugate_coords(&self, a: &[Rational]) -> Result<Vec<Rational>> {
        check_len(self.signs.len(), a.len())?;
        Ok(a.iter().zip(&self.signs).map(|(x, &s)| if s < 0 { -x } else { x.clone() }).collect())
    }

    /// a* for an element, when the form variables are the algebra coordinates.
    pub fn conjugate(&self, a: &Element) -> Result<Element> {
        let c = self.conjugate_coords(a.coords())?;
        Ok(self.alg.element(c).expect("dimension checked"))
    }

    /// g*(a, b) = g(a, b*).
    pub fn g_star(&self, a: &[Rational], b: &[Rational]) -> Result<Element> {
        let bs = self.conjugate_coords(b)?;
        check_len(self.diag.len(), a.len())?;
        let q = a.iter().zip(&bs).zip(&self.diag).fold(Rational::zero(), |acc, ((x, y), d)| acc + x * y * d);
        Ok(self.alg.scalar(q))
    }

    /// f*(a) = g*(a, a).
    pub fn f_star(&self, a: &[Rational]) -> Result<Element> {
        self.g_star(a, a)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MetricClass {
    Euclidean,
    PseudoEuclidean,
    NotRealValued,
}

/// Euclidean when the diagonalized form has full rank and every coefficient
/// is a positive rational multiple of the unit.
pub fn classify_metric(f: &QuadraticMatrix) -> Result<MetricClass> {
    let d = diagonalize(f)?;
    let scalars: Option<Vec<Rational>> = d.terms.iter().map(|t| t.coefficient.as_scalar()).collect();
    Ok(match scalars {
        None => MetricClass::NotRealValued,
        Some(qs) if qs.len() == f.var_count() && qs.iter().all(|q| q.is_positive()) => MetricClass::Euclidean,
        Some(_) => MetricClass::PseudoEuclidean,
    })
}
