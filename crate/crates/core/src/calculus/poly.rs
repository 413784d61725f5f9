//! Noncommutative polynomials over a division ring.
//!
//! Every constant is expanded in the algebra basis, so a monomial is
//! `q · e_{b0} x_{v1} e_{b1} ... x_{vm} e_{bm}` with a rational coefficient q.
//! Adjacent constants are multiplied out through the structural constants,
//! which makes the stored form canonical.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::algebra::{Algebra, Element};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    /// Variable indices x_{v1} .. x_{vm}.
    pub vars: Vec<usize>,
    /// Basis indices b0 .. bm, one more than `vars`.
    pub basis: Vec<usize>,
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.vars
            .len()
            .cmp(&other.vars.len())
            .then_with(|| self.vars.cmp(&other.vars))
            .then_with(|| self.basis.cmp(&other.basis))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NCPoly {
    alg: Arc<Algebra>,
    nvars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl NCPoly {
    pub fn zero(alg: &Arc<Algebra>, nvars: usize) -> NCPoly {
        NCPoly { alg: alg.clone(), nvars, terms: BTreeMap::new() }
    }

    pub fn constant(c: &Element, nvars: usize) -> NCPoly {
        let mut p = NCPoly::zero(c.algebra(), nvars);
        for (b, q) in c.coords().iter().enumerate() {
            p.add_term(Monomial { vars: vec![], basis: vec![b] }, q.clone());
        }
        p
    }

    /// The variable x_i (0-based).
    pub fn var(alg: &Arc<Algebra>, nvars: usize, i: usize) -> NCPoly {
        assert!(i < nvars, "variable index out of range");
        let mut p = NCPoly::zero(alg, nvars);
        // x = 1 · x · 1, with the unit written in the basis
        let unit = alg.unit_coords().to_vec();
        for (a, qa) in unit.iter().enumerate() {
            for (b, qb) in unit.iter().enumerate() {
                if !qa.is_zero() && !qb.is_zero() {
                    p.add_term(Monomial { vars: vec![i], basis: vec![a, b] }, qa * qb);
                }
            }
        }
        p
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.alg
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(|m| m.vars.len()).max().unwrap_or(0)
    }

    /// Same polynomial viewed in a larger variable set.
    pub fn with_nvars(&self, nvars: usize) -> NCPoly {
        assert!(self.terms.keys().all(|m| m.vars.iter().all(|&v| v < nvars)));
        NCPoly { alg: self.alg.clone(), nvars, terms: self.terms.clone() }
    }

    pub fn add_term(&mut self, m: Monomial, q: Rational) {
        if q.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(q);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += q;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, q: &Rational) -> NCPoly {
        let mut out = NCPoly::zero(&self.alg, self.nvars);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c * q);
        }
        out
    }

    fn check_compatible(&self, other: &NCPoly) {
        assert!(*self.alg == *other.alg, "polynomials over different algebras");
        assert_eq!(self.nvars, other.nvars, "polynomials in different variable sets");
    }

    pub fn add(&self, other: &NCPoly) -> NCPoly {
        self.check_compatible(other);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &NCPoly) -> NCPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> NCPoly {
        self.scale(&-Rational::one())
    }

    pub fn mul(&self, other: &NCPoly) -> NCPoly {
        self.check_compatible(other);
        let mut out = NCPoly::zero(&self.alg, self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let p = *m1.basis.last().unwrap();
                let q = m2.basis[0];
                for k in 0..self.alg.dim() {
                    let c = self.alg.c(p, q, k);
                    if c.is_zero() {
                        continue;
                    }
                    let mut vars = m1.vars.clone();
                    vars.extend_from_slice(&m2.vars);
                    let mut basis = m1.basis[..m1.basis.len() - 1].to_vec();
                    basis.push(k);
                    basis.extend_from_slice(&m2.basis[1..]);
                    out.add_term(Monomial { vars, basis }, c * c1 * c2);
                }
            }
        }
        out
    }

    pub fn left_mul(&self, c: &Element) -> NCPoly {
        NCPoly::constant(c, self.nvars).mul(self)
    }

    pub fn right_mul(&self, c: &Element) -> NCPoly {
        self.mul(&NCPoly::constant(c, self.nvars))
    }

    /// Product for a monomial with position `p` (if any) replaced by `alt[p]`.
    fn eval_term(&self, m: &Monomial, q: &Rational, pick: impl Fn(usize, usize) -> Element) -> Element {
        let mut acc = self.alg.basis(m.basis[0]);
        for (pos, &v) in m.vars.iter().enumerate() {
            acc = &acc * &pick(pos, v);
            acc = &acc * &self.alg.basis(m.basis[pos + 1]);
        }
        acc.scale(q)
    }

    pub fn eval(&self, x: &[Element]) -> Element {
        assert_eq!(x.len(), self.nvars, "wrong number of arguments");
        let mut out = self.alg.zero();
        for (m, q) in &self.terms {
            out += &self.eval_term(m, q, |_, v| x[v].clone());
        }
        out
    }

    /// Gâteaux derivative at `x` in direction `a`: for each monomial, sum over
    /// the positions of one factor replaced by the direction component.
    pub fn gateaux(&self, x: &[Element], a: &[Element]) -> Element {
        assert_eq!(x.len(), self.nvars);
        assert_eq!(a.len(), self.nvars);
        let mut out = self.alg.zero();
        for (m, q) in &self.terms {
            for p in 0..m.vars.len() {
                out += &self.eval_term(m, q, |pos, v| if pos == p { a[v].clone() } else { x[v].clone() });
            }
        }
        out
    }

    /// Second derivative ∂²f(x)(v; a): ordered pairs of distinct positions,
    /// the first replaced by `v` and the second by `a`.
    pub fn gateaux2(&self, x: &[Element], v: &[Element], a: &[Element]) -> Element {
        assert_eq!(x.len(), self.nvars);
        let mut out = self.alg.zero();
        for (m, q) in &self.terms {
            let deg = m.vars.len();
            for p in 0..deg {
                for r in 0..deg {
                    if p == r {
                        continue;
                    }
                    out += &self.eval_term(m, q, |pos, w| {
                        if pos == p {
                            v[w].clone()
                        } else if pos == r {
                            a[w].clone()
                        } else {
                            x[w].clone()
                        }
                    });
                }
            }
        }
        out
    }

    /// Symbolic derivative in the direction h, as a polynomial in
    /// (x_0..x_{n-1}, h_0..h_{n-1}).
    pub fn directional(&self) -> NCPoly {
        let n = self.nvars;
        let mut out = NCPoly::zero(&self.alg, 2 * n);
        for (m, q) in &self.terms {
            for p in 0..m.vars.len() {
                let mut vars = m.vars.clone();
                vars[p] += n;
                out.add_term(Monomial { vars, basis: m.basis.clone() }, q.clone());
            }
        }
        out
    }

    /// Partial derivative in x_j as a polynomial in (x_0..x_{n-1}, h), the
    /// direction h being variable n.
    pub fn partial(&self, j: usize) -> NCPoly {
        let n = self.nvars;
        let mut out = NCPoly::zero(&self.alg, n + 1);
        for (m, q) in &self.terms {
            for p in 0..m.vars.len() {
                if m.vars[p] == j {
                    let mut vars = m.vars.clone();
                    vars[p] = n;
                    out.add_term(Monomial { vars, basis: m.basis.clone() }, q.clone());
                }
            }
        }
        out
    }

    /// Substitute `subs[i]` for x_i. The result lives in the variable set of
    /// the substitutes.
    pub fn compose(&self, subs: &[NCPoly]) -> NCPoly {
        assert_eq!(subs.len(), self.nvars, "one substitute per variable");
        let nv = subs.first().map_or(0, |s| s.nvars);
        let mut out = NCPoly::zero(&self.alg, nv);
        for (m, q) in &self.terms {
            let mut acc = NCPoly::constant(&self.alg.basis(m.basis[0]), nv);
            for (pos, &v) in m.vars.iter().enumerate() {
                acc = acc.mul(&subs[v]);
                acc = acc.mul(&NCPoly::constant(&self.alg.basis(m.basis[pos + 1]), nv));
            }
            out = out.add(&acc.scale(q));
        }
        out
    }

    pub fn fmt_with(&self, names: &[String]) -> String {
        crate::text::format_poly(self, names)
    }

    /// Names x1..xn.
    pub fn default_names(nvars: usize) -> Vec<String> {
        (1..=nvars).map(|i| format!("x{i}")).collect()
    }
}

impl fmt::Display for NCPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_with(&NCPoly::default_names(self.nvars)))
    }
}
