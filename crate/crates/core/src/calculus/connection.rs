use std::sync::Arc;

use super::{check_dim, CalcError, Chart, NCPoly};
use crate::algebra::{Algebra, Element};

/// Sign attached to Γ in the transport equations.
///
/// `Transfer` uses ∂v(a) + Γ(v)(a) = 0 for parallel fields and
/// ẍ + Γ(ẋ)(ẋ) = 0 for geodesics; `Covariant` uses ∂v(a) − Γ(v)(a) and
/// ẍ − Γ(ẋ)(ẋ). With the chart-induced Γ′ only the first makes transported
/// constant fields and straight lines satisfy the equations.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum SignConvention {
    #[default]
    Transfer,
    Covariant,
}

impl SignConvention {
    fn apply(self, gamma: &Element) -> Element {
        match self {
            SignConvention::Transfer => gamma.clone(),
            SignConvention::Covariant => -gamma,
        }
    }
}

/// Connection coefficients as bilinear maps Γᵏ(v)(a) depending on the point.
pub trait Connection {
    fn dim(&self) -> usize;
    fn algebra(&self) -> &Arc<Algebra>;
    fn gamma(&self, x: &[Element], v: &[Element], a: &[Element]) -> Vec<Element>;
}

/// Γ = 0.
#[derive(Clone, Debug)]
pub struct FlatConnection {
    alg: Arc<Algebra>,
    n: usize,
}

impl FlatConnection {
    pub fn new(alg: &Arc<Algebra>, n: usize) -> FlatConnection {
        FlatConnection { alg: alg.clone(), n }
    }
}

impl Connection for FlatConnection {
    fn dim(&self) -> usize {
        self.n
    }

    fn algebra(&self) -> &Arc<Algebra> {
        &self.alg
    }

    fn gamma(&self, _x: &[Element], _v: &[Element], _a: &[Element]) -> Vec<Element> {
        vec![self.alg.zero(); self.n]
    }
}

/// Γ′ᵖ(v′)(a′) = ∂x′ᵖ/∂xʳ(∂²xʳ/∂x′ʲ∂x′ⁱ(v′; a′)) for a chart of a flat space.
#[derive(Clone, Debug)]
pub struct ChartConnection {
    chart: Chart,
}

pub fn chart_connection(g: &Chart) -> Result<ChartConnection, CalcError> {
    g.inverse().ok_or(CalcError::NoInverseChart)?;
    Ok(ChartConnection { chart: g.clone() })
}

impl ChartConnection {
    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    /// Γ′ᵖ as polynomials in (x′, v′, a′), 3n variables.
    pub fn symbolic(&self) -> Vec<NCPoly> {
        let n = self.chart.dim();
        let inv = self.chart.inverse().expect("checked at construction");
        let alg = self.chart.algebra();
        let var = |k: usize| NCPoly::var(alg, 3 * n, k);
        // ∂²xʳ(v′; a′) as polynomials in (x′, v′, a′)
        let second: Vec<NCPoly> = inv.iter().map(|p| second_derivative(p, n)).collect();
        let base: Vec<NCPoly> = inv.iter().map(|p| p.compose(&(0..n).map(var).collect::<Vec<_>>())).collect();
        self.chart
            .forward()
            .iter()
            .map(|g| {
                let d = g.directional();
                let subs: Vec<NCPoly> = base.iter().cloned().chain(second.iter().cloned()).collect();
                d.compose(&subs)
            })
            .collect()
    }
}

/// ∂²p(x)(v; a) over (x, v, a): ordered pairs of distinct positions.
fn second_derivative(p: &NCPoly, n: usize) -> NCPoly {
    let alg = p.algebra();
    let first = p.directional(); // (x, v)
    let widen: Vec<NCPoly> = (0..2 * n).map(|k| NCPoly::var(alg, 3 * n, k)).collect();
    let first = first.compose(&widen);
    // differentiate in x only, direction a
    let d = first.directional(); // (x, v, a, dx, dv, da) with 6n variables
    let subs: Vec<NCPoly> = (0..6 * n)
        .map(|k| {
            if k < 3 * n {
                NCPoly::var(alg, 3 * n, k)
            } else if k < 4 * n {
                NCPoly::var(alg, 3 * n, k - 3 * n + 2 * n)
            } else {
                NCPoly::zero(alg, 3 * n)
            }
        })
        .collect();
    d.compose(&subs)
}

impl Connection for ChartConnection {
    fn dim(&self) -> usize {
        self.chart.dim()
    }

    fn algebra(&self) -> &Arc<Algebra> {
        self.chart.algebra()
    }

    fn gamma(&self, x: &[Element], v: &[Element], a: &[Element]) -> Vec<Element> {
        let inv = self.chart.inverse().expect("checked at construction");
        let old = inv.iter().map(|p| p.eval(x)).collect::<Vec<_>>();
        let second: Vec<Element> = inv.iter().map(|p| p.gateaux2(x, v, a)).collect();
        self.chart.forward().iter().map(|g| g.gateaux(&old, &second)).collect()
    }
}

/// User-supplied Γᵏ as polynomials in (x, v, a).
#[derive(Clone, Debug)]
pub struct PolyConnection {
    alg: Arc<Algebra>,
    polys: Vec<NCPoly>,
}

impl PolyConnection {
    pub fn new(polys: Vec<NCPoly>) -> Result<PolyConnection, CalcError> {
        let alg = polys.first().ok_or(CalcError::DimensionMismatch { expected: 1, found: 0 })?.algebra().clone();
        let n = polys.len();
        for p in &polys {
            if p.nvars() != 3 * n {
                return Err(CalcError::WrongVariableCount { expected: 3 * n, found: p.nvars() });
            }
            if p.algebra() != &alg {
                return Err(CalcError::AlgebraMismatch);
            }
        }
        Ok(PolyConnection { alg, polys })
    }

    pub fn polys(&self) -> &[NCPoly] {
        &self.polys
    }
}

impl Connection for PolyConnection {
    fn dim(&self) -> usize {
        self.polys.len()
    }

    fn algebra(&self) -> &Arc<Algebra> {
        &self.alg
    }

    fn gamma(&self, x: &[Element], v: &[Element], a: &[Element]) -> Vec<Element> {
        let args: Vec<Element> = x.iter().chain(v).chain(a).cloned().collect();
        self.polys.iter().map(|p| p.eval(&args)).collect()
    }
}

fn check_field(conn: &dyn Connection, field: &[NCPoly], x: &[Element], a: &[Element]) -> Result<(), CalcError> {
    let n = conn.dim();
    check_dim(n, field.len())?;
    check_dim(n, x.len())?;
    check_dim(n, a.len())?;
    for p in field {
        if p.nvars() != n {
            return Err(CalcError::WrongVariableCount { expected: n, found: p.nvars() });
        }
    }
    Ok(())
}

/// ∂vᵏ(x)(a) ± Γᵏ(v(x))(a); zero for parallel fields.
pub fn parallel_residual(
    conn: &dyn Connection,
    field: &[NCPoly],
    x: &[Element],
    a: &[Element],
    sign: SignConvention,
) -> Result<Vec<Element>, CalcError> {
    check_field(conn, field, x, a)?;
    let v: Vec<Element> = field.iter().map(|p| p.eval(x)).collect();
    let gamma = conn.gamma(x, &v, a);
    Ok(field.iter().zip(&gamma).map(|(p, g)| &p.gateaux(x, a) + &sign.apply(g)).collect())
}

/// Dv(a) = ∂v(a) − Γ(v)(a) under `Covariant`, ∂v(a) + Γ(v)(a) under `Transfer`.
pub fn covariant_derivative(
    conn: &dyn Connection,
    field: &[NCPoly],
    x: &[Element],
    a: &[Element],
    sign: SignConvention,
) -> Result<Vec<Element>, CalcError> {
    parallel_residual(conn, field, x, a, sign)
}

/// ∂²x(dt; dt) ± Γ(∂x(dt))(∂x(dt)) at t₀ for a path given by n polynomials
/// in one variable t.
pub fn geodesic_residual(
    conn: &dyn Connection,
    path: &[NCPoly],
    t0: &Element,
    dt: &Element,
    sign: SignConvention,
) -> Result<Vec<Element>, CalcError> {
    check_dim(conn.dim(), path.len())?;
    for p in path {
        if p.nvars() != 1 {
            return Err(CalcError::WrongVariableCount { expected: 1, found: p.nvars() });
        }
    }
    let t = [t0.clone()];
    let d = [dt.clone()];
    let x: Vec<Element> = path.iter().map(|p| p.eval(&t)).collect();
    let vel: Vec<Element> = path.iter().map(|p| p.gateaux(&t, &d)).collect();
    let gamma = conn.gamma(&x, &vel, &vel);
    Ok(path.iter().zip(&gamma).map(|(p, g)| &p.gateaux2(&t, &d, &d) + &sign.apply(g)).collect())
}
