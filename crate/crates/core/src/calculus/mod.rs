//! Exact calculus for noncommutative polynomial maps: Gâteaux derivatives,
//! coordinate changes, induced connections and the residuals of the
//! parallel transport and geodesic equations.

mod chart;
mod connection;
pub mod poly;

pub use chart::{pushforward_oneform, pushforward_vector, apply_oneform, Chart, InverseCheck};
pub use connection::{
    chart_connection, covariant_derivative, geodesic_residual, parallel_residual, ChartConnection, Connection,
    FlatConnection, PolyConnection, SignConvention,
};
pub use poly::{Monomial, NCPoly};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CalcError {
    #[error("chart has no inverse")]
    NoInverseChart,
    #[error("polynomials live over different algebras")]
    AlgebraMismatch,
    #[error("supplied inverse does not invert the chart")]
    InvalidInverse,
    #[error("linear chart is singular")]
    SingularChart,
    #[error("inverse block is not of the form Σ f e_k x e_l")]
    NotRepresentable,
    #[error("expected {expected} entries, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("polynomial has {found} variables, expected {expected}")]
    WrongVariableCount { expected: usize, found: usize },
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<(), CalcError> {
    if expected != found {
        return Err(CalcError::DimensionMismatch { expected, found });
    }
    Ok(())
}
