use std::sync::Arc;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{check_dim, CalcError, Monomial, NCPoly};
use crate::algebra::{Algebra, Element};
use crate::linalg::{self, LinearSolution, Matrix};
use crate::rational::Rational;

/// Number of sample points used when an inverse cannot be confirmed symbolically.
const SAMPLES: usize = 24;
const SEED: u64 = 0x5eed;

/// How a chart inverse was confirmed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InverseCheck {
    /// Both composites reduce to the coordinate polynomials.
    Symbolic,
    /// Both composites agree with the identity at seeded random rational points.
    Sampled,
    /// Solved from the linear part.
    Solved,
}

/// Coordinate change x′ⁱ = gⁱ(x¹..xⁿ), with an optional polynomial inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chart {
    alg: Arc<Algebra>,
    forward: Vec<NCPoly>,
    inverse: Option<(Vec<NCPoly>, InverseCheck)>,
}

fn check_polys(alg: &Arc<Algebra>, polys: &[NCPoly]) -> Result<(), CalcError> {
    for p in polys {
        if p.algebra() != alg {
            return Err(CalcError::AlgebraMismatch);
        }
        if p.nvars() != polys.len() {
            return Err(CalcError::WrongVariableCount { expected: polys.len(), found: p.nvars() });
        }
    }
    Ok(())
}

fn coordinate_polys(alg: &Arc<Algebra>, n: usize) -> Vec<NCPoly> {
    (0..n).map(|i| NCPoly::var(alg, n, i)).collect()
}

fn random_point(alg: &Arc<Algebra>, n: usize, rng: &mut ChaCha8Rng) -> Vec<Element> {
    (0..n)
        .map(|_| {
            let coords = (0..alg.dim())
                .map(|_| Rational::new(rng.gen_range(-9i64..=9).into(), rng.gen_range(1i64..=4).into()))
                .collect();
            alg.element(coords).expect("dimension matches")
        })
        .collect()
}

fn eval_all(ps: &[NCPoly], x: &[Element]) -> Vec<Element> {
    ps.iter().map(|p| p.eval(x)).collect()
}

impl Chart {
    /// A chart without a known inverse; linear charts get one solved for them.
    pub fn new(forward: Vec<NCPoly>) -> Result<Chart, CalcError> {
        let alg = forward.first().ok_or(CalcError::DimensionMismatch { expected: 1, found: 0 })?.algebra().clone();
        check_polys(&alg, &forward)?;
        let mut chart = Chart { alg, forward, inverse: None };
        if chart.is_linear() {
            let inv = chart.solve_linear_inverse()?;
            chart.inverse = Some((inv, InverseCheck::Solved));
        }
        Ok(chart)
    }

    /// A chart with a supplied inverse, checked both ways.
    pub fn with_inverse(forward: Vec<NCPoly>, inverse: Vec<NCPoly>) -> Result<Chart, CalcError> {
        let alg = forward.first().ok_or(CalcError::DimensionMismatch { expected: 1, found: 0 })?.algebra().clone();
        check_dim(forward.len(), inverse.len())?;
        check_polys(&alg, &forward)?;
        check_polys(&alg, &inverse)?;
        let check = verify_inverse(&alg, &forward, &inverse)?;
        Ok(Chart { alg, forward, inverse: Some((inverse, check)) })
    }

    pub fn identity(alg: &Arc<Algebra>, n: usize) -> Chart {
        let id = coordinate_polys(alg, n);
        Chart { alg: alg.clone(), forward: id.clone(), inverse: Some((id, InverseCheck::Symbolic)) }
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.alg
    }

    pub fn dim(&self) -> usize {
        self.forward.len()
    }

    pub fn forward(&self) -> &[NCPoly] {
        &self.forward
    }

    pub fn inverse(&self) -> Option<&[NCPoly]> {
        self.inverse.as_ref().map(|(p, _)| p.as_slice())
    }

    pub fn inverse_check(&self) -> Option<InverseCheck> {
        self.inverse.as_ref().map(|(_, c)| *c)
    }

    pub fn is_linear(&self) -> bool {
        self.forward.iter().all(|p| p.degree() <= 1)
    }

    /// Forward map x ↦ x′.
    pub fn apply(&self, x: &[Element]) -> Result<Vec<Element>, CalcError> {
        check_dim(self.dim(), x.len())?;
        Ok(eval_all(&self.forward, x))
    }

    /// Inverse map x′ ↦ x.
    pub fn apply_inverse(&self, x: &[Element]) -> Result<Vec<Element>, CalcError> {
        check_dim(self.dim(), x.len())?;
        Ok(eval_all(self.inverse().ok_or(CalcError::NoInverseChart)?, x))
    }

    /// Inverts the rational matrix of the linear part, then writes each
    /// block of the inverse as Σ f^{kl} e_k x e_l.
    fn solve_linear_inverse(&self) -> Result<Vec<NCPoly>, CalcError> {
        let n = self.dim();
        let d = self.alg.dim();
        let zero_pt = vec![self.alg.zero(); n];
        let mut m: Matrix = linalg::zeros(n * d, n * d);
        for j in 0..n {
            for s in 0..d {
                let mut dir = zero_pt.clone();
                dir[j] = self.alg.basis(s);
                for (i, p) in self.forward.iter().enumerate() {
                    let img = p.gateaux(&zero_pt, &dir);
                    for (t, q) in img.coords().iter().enumerate() {
                        m[i * d + t][j * d + s] = q.clone();
                    }
                }
            }
        }
        let minv = linalg::inverse(&m).ok_or(CalcError::SingularChart)?;
        let constant: Vec<Rational> = eval_all(&self.forward, &zero_pt).iter().flat_map(|c| c.coords().to_vec()).collect();
        let neg_c: Vec<Rational> = constant.iter().map(|q| -q).collect();
        let shift = linalg::mat_vec(&minv, &neg_c);
        // sandwich[(t, s)][(k, l)] = coordinate t of e_k e_s e_l
        let mut sandwich: Matrix = linalg::zeros(d * d, d * d);
        for k in 0..d {
            for l in 0..d {
                for s in 0..d {
                    let v = &(&self.alg.basis(k) * &self.alg.basis(s)) * &self.alg.basis(l);
                    for (t, q) in v.coords().iter().enumerate() {
                        sandwich[t * d + s][k * d + l] = q.clone();
                    }
                }
            }
        }
        let mut out = Vec::with_capacity(n);
        for j in 0..n {
            let c = self.alg.element(shift[j * d..(j + 1) * d].to_vec()).expect("dimension matches");
            let mut poly = NCPoly::constant(&c, n);
            for i in 0..n {
                let rhs: Vec<Rational> =
                    (0..d).flat_map(|t| (0..d).map(move |s| (t, s))).map(|(t, s)| minv[j * d + t][i * d + s].clone()).collect();
                let f = match linalg::solve(&sandwich, &rhs) {
                    LinearSolution::Unique(f) | LinearSolution::Infinite(f, _) => f,
                    LinearSolution::Inconsistent => return Err(CalcError::NotRepresentable),
                };
                for k in 0..d {
                    for l in 0..d {
                        let q = &f[k * d + l];
                        if !q.is_zero() {
                            poly.add_term(Monomial { vars: vec![i], basis: vec![k, l] }, q.clone());
                        }
                    }
                }
            }
            out.push(poly);
        }
        Ok(out)
    }
}

fn verify_inverse(alg: &Arc<Algebra>, forward: &[NCPoly], inverse: &[NCPoly]) -> Result<InverseCheck, CalcError> {
    let n = forward.len();
    let id = coordinate_polys(alg, n);
    let fg: Vec<NCPoly> = forward.iter().map(|p| p.compose(inverse)).collect();
    let gf: Vec<NCPoly> = inverse.iter().map(|p| p.compose(forward)).collect();
    if fg == id && gf == id {
        return Ok(InverseCheck::Symbolic);
    }
    // distinct canonical forms can describe the same function
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for _ in 0..SAMPLES {
        let x = random_point(alg, n, &mut rng);
        if eval_all(&fg, &x) != x || eval_all(&gf, &x) != x {
            return Err(CalcError::InvalidInverse);
        }
    }
    Ok(InverseCheck::Sampled)
}

/// Components of a vector in the old coordinates from its components v′ at
/// the point x′: vʲ = ∂xʲ(x′)(v′).
pub fn pushforward_vector(g: &Chart, x_new: &[Element], v_new: &[Element]) -> Result<Vec<Element>, CalcError> {
    let inv = g.inverse().ok_or(CalcError::NoInverseChart)?;
    check_dim(g.dim(), x_new.len())?;
    check_dim(g.dim(), v_new.len())?;
    Ok(inv.iter().map(|p| p.gateaux(x_new, v_new)).collect())
}

/// dx′ⁱ = ∂x′ⁱ/∂xʲ(dxʲ): entry [i][j] is ∂gⁱ/∂xʲ as a polynomial in
/// (x¹..xⁿ, h), linear in the last variable h.
pub fn pushforward_oneform(g: &Chart) -> Vec<Vec<NCPoly>> {
    g.forward.iter().map(|p| (0..g.dim()).map(|j| p.partial(j)).collect()).collect()
}

/// Apply the one-forms at x to the increment h: Σ_j ∂x′ⁱ/∂xʲ(hʲ).
pub fn apply_oneform(forms: &[Vec<NCPoly>], x: &[Element], h: &[Element]) -> Result<Vec<Element>, CalcError> {
    forms
        .iter()
        .map(|row| {
            check_dim(row.len(), h.len())?;
            let mut acc: Option<Element> = None;
            for (j, p) in row.iter().enumerate() {
                check_dim(p.nvars(), x.len() + 1)?;
                let mut args = x.to_vec();
                args.push(h[j].clone());
                let v = p.eval(&args);
                acc = Some(match acc {
                    None => v,
                    Some(a) => &a + &v,
                });
            }
            acc.ok_or(CalcError::DimensionMismatch { expected: 1, found: 0 })
        })
        .collect()
}
