//! Independent oracles and seeded generators shared by the integration tests.
//!
//! Nothing here calls the library's arithmetic: products, ranks and closures
//! are recomputed from scratch so that a test compares two routes.

#![allow(dead_code, clippy::needless_range_loop)]

use std::collections::BTreeSet;
use std::sync::Arc;

use divring::algebra::{Algebra, Element};
use divring::omega::{Hand, Representation};
use divring::rational::{int, Rational};
use divring::tower::Tower;
use num_traits::{One, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// n/d with |n| ≤ 6 and 1 ≤ d ≤ 4.
pub fn rand_rat(r: &mut ChaCha8Rng) -> Rational {
    Rational::new(r.gen_range(-6i64..=6).into(), r.gen_range(1i64..=4).into())
}

pub fn rand_nonzero_rat(r: &mut ChaCha8Rng) -> Rational {
    loop {
        let q = rand_rat(r);
        if !q.is_zero() {
            return q;
        }
    }
}

pub fn rand_coords(r: &mut ChaCha8Rng, n: usize) -> Vec<Rational> {
    (0..n).map(|_| rand_rat(r)).collect()
}

pub fn quat(c: &[Rational]) -> Element {
    Algebra::quaternion().element(c.to_vec()).unwrap()
}

pub fn rand_quat(r: &mut ChaCha8Rng) -> Element {
    quat(&rand_coords(r, 4))
}

pub fn rand_nonzero_quat(r: &mut ChaCha8Rng) -> Element {
    loop {
        let q = rand_quat(r);
        if !q.is_zero() {
            return q;
        }
    }
}

/// Quaternion with a few coordinates forced to zero, so that special cases
/// (pure, real, sparse) come up often.
pub fn rand_sparse_quat(r: &mut ChaCha8Rng) -> Element {
    let c: Vec<Rational> = (0..4)
        .map(|_| if r.gen_bool(0.4) { Rational::zero() } else { rand_rat(r) })
        .collect();
    quat(&c)
}

pub fn rand_vector(r: &mut ChaCha8Rng, n: usize) -> Vec<Element> {
    (0..n).map(|_| rand_quat(r)).collect()
}

/// Rational n × n matrix, retried until the oracle rank is full.
pub fn rand_invertible(r: &mut ChaCha8Rng, n: usize) -> Vec<Vec<Rational>> {
    loop {
        let m: Vec<Vec<Rational>> = (0..n).map(|_| rand_coords(r, n)).collect();
        if rank_oracle(&m) == n {
            return m;
        }
    }
}

/// Hamilton product written out by hand, basis 1, i, j, k.
pub fn hamilton(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let (a0, a1, a2, a3) = (&a[0], &a[1], &a[2], &a[3]);
    let (b0, b1, b2, b3) = (&b[0], &b[1], &b[2], &b[3]);
    vec![
        a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
        a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
        a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
        a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
    ]
}

pub fn hq(a: &Element, b: &Element) -> Element {
    quat(&hamilton(a.coords(), b.coords()))
}

pub fn hsum(a: &Element, b: &Element) -> Element {
    quat(&a.coords().iter().zip(b.coords()).map(|(x, y)| x + y).collect::<Vec<_>>())
}

/// Conjugate over the norm.
pub fn hinv(a: &Element) -> Element {
    let c = a.coords();
    let n: Rational = c.iter().map(|x| x * x).sum();
    quat(&[&c[0] / &n, -&c[1] / &n, -&c[2] / &n, -&c[3] / &n])
}

/// Σ_l C(i,j,l) C(l,k,m) = Σ_l C(j,k,l) C(i,l,m) for all i, j, k, m, looping
/// over every index tuple without shortcuts.
pub fn associative_oracle(n: usize, c: impl Fn(usize, usize, usize) -> Rational) -> bool {
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for m in 0..n {
                    let lhs: Rational = (0..n).map(|l| c(i, j, l) * c(l, k, m)).sum();
                    let rhs: Rational = (0..n).map(|l| c(j, k, l) * c(i, l, m)).sum();
                    if lhs != rhs {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Plain Gaussian elimination over ℚ.
pub fn rank_oracle(m: &[Vec<Rational>]) -> usize {
    let mut a: Vec<Vec<Rational>> = m.to_vec();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = &a[i][c] / &a[r][c];
                for k in 0..cols {
                    let t = &f * &a[r][k];
                    a[i][k] -= t;
                }
            }
        }
        r += 1;
    }
    r
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveClass {
    Unique,
    Infinite,
    None,
}

/// Classify a x + x a = b from ranks of the 4 × 4 system built with the
/// Hamilton oracle.
pub fn axxa_oracle(a: &Element, b: &Element) -> SolveClass {
    let mut m = vec![vec![Rational::zero(); 4]; 4];
    for j in 0..4 {
        let mut e = vec![Rational::zero(); 4];
        e[j] = Rational::one();
        let col: Vec<Rational> = hamilton(a.coords(), &e)
            .iter()
            .zip(hamilton(&e, a.coords()))
            .map(|(x, y)| x + y)
            .collect();
        for i in 0..4 {
            m[i][j] = col[i].clone();
        }
    }
    let aug: Vec<Vec<Rational>> = m.iter().zip(b.coords()).map(|(row, x)| {
        let mut r = row.clone();
        r.push(x.clone());
        r
    }).collect();
    match (rank_oracle(&m), rank_oracle(&aug)) {
        (4, 4) => SolveClass::Unique,
        (r, s) if r == s => SolveClass::Infinite,
        _ => SolveClass::None,
    }
}

/// Apply every operation to every argument tuple and every transformation
/// to every member until nothing new appears.
pub fn naive_closure(rep: &Representation, gens: &[usize]) -> BTreeSet<usize> {
    saturate(rep, gens, &(0..rep.acting().size()).collect::<Vec<_>>())
}

fn saturate(rep: &Representation, gens: &[usize], actors: &[usize]) -> BTreeSet<usize> {
    let alg = rep.acted();
    let mut set: BTreeSet<usize> = gens.iter().copied().collect();
    loop {
        let before = set.len();
        let cur: Vec<usize> = set.iter().copied().collect();
        for (op, o) in alg.signature().ops().iter().enumerate() {
            for args in tuples(&cur, o.arity) {
                set.insert(alg.apply(op, &args));
            }
        }
        for &a in actors {
            for &m in &cur {
                set.insert(rep.act(a, m));
            }
        }
        if set.len() == before {
            return set;
        }
    }
}

fn tuples(items: &[usize], arity: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..arity {
        out = out
            .into_iter()
            .flat_map(|t| {
                items.iter().map(move |&x| {
                    let mut t = t.clone();
                    t.push(x);
                    t
                })
            })
            .collect();
    }
    out
}

/// Level 1 is everything; level i saturates under the members of level
/// i − 1 only.
pub fn layered_oracle(t: &Tower, gens: &[Vec<usize>]) -> Vec<BTreeSet<usize>> {
    let mut levels = vec![(0..t.algebra(1).size()).collect::<BTreeSet<usize>>()];
    for i in 2..=t.height() {
        let actors: Vec<usize> = levels[i - 2].iter().copied().collect();
        levels.push(saturate(t.rep(i - 1), &gens[i - 2], &actors));
    }
    levels
}

/// Span of v_1..v_k with coefficients on the given side, realified: the
/// ℚ-span of the vectors v_t e_m (right) or e_m v_t (left), flattened to 4n
/// rational coordinates.
fn realified(span: &[Vec<Element>], hand: Hand) -> Vec<Vec<Rational>> {
    let mut rows = Vec::new();
    for v in span {
        for m in 0..4 {
            let mut e = vec![Rational::zero(); 4];
            e[m] = Rational::one();
            let row: Vec<Rational> = v
                .iter()
                .flat_map(|x| match hand {
                    Hand::Right => hamilton(x.coords(), &e),
                    Hand::Left => hamilton(&e, x.coords()),
                })
                .collect();
            rows.push(row);
        }
    }
    rows
}

/// Membership in A + span through the realified ℚ-rank.
pub struct PlaneOracle {
    anchor: Vec<Element>,
    base: Vec<Vec<Rational>>,
    rank: usize,
}

impl PlaneOracle {
    pub fn new(anchor: &[Element], span: &[Vec<Element>], hand: Hand) -> PlaneOracle {
        let base = realified(span, hand);
        let rank = rank_oracle(&base);
        PlaneOracle { anchor: anchor.to_vec(), base, rank }
    }

    /// B − A adds nothing to the rank.
    pub fn contains(&self, b: &[Element]) -> bool {
        let mut with = self.base.clone();
        with.push(
            self.anchor
                .iter()
                .zip(b)
                .flat_map(|(a, x)| x.coords().iter().zip(a.coords()).map(|(p, q)| p - q).collect::<Vec<_>>())
                .collect(),
        );
        rank_oracle(&with) == self.rank
    }
}

pub fn plane_oracle(anchor: &[Element], span: &[Vec<Element>], b: &[Element], hand: Hand) -> bool {
    PlaneOracle::new(anchor, span, hand).contains(b)
}

/// Σ_k c_k e_k as an element, used to build linear combinations by hand.
pub fn combine(terms: &[(Element, Element)], hand: Hand) -> Element {
    let mut acc = quat(&[int(0), int(0), int(0), int(0)]);
    for (v, c) in terms {
        let p = match hand {
            Hand::Right => hq(v, c),
            Hand::Left => hq(c, v),
        };
        acc = hsum(&acc, &p);
    }
    acc
}

pub fn quaternion() -> Arc<Algebra> {
    Algebra::quaternion()
}
