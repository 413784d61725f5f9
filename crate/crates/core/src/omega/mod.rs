//! Finite universal algebras and their representations.
//!
//! A representation lets one finite Ω-algebra act on another by
//! endomorphisms. Closure under operations and the action produces words
//! (derivation DAGs) which serve as coordinates relative to a generating set.

mod algebra;
pub mod builders;
mod closure;
mod morphism;
mod rep;
mod word;

pub use algebra::{FiniteOmegaAlgebra, Op, Signature, Tuples, DEFAULT_CARRIER_BOUND};
pub use closure::{
    closure, closure_core, endo_coordinates, enumerate_endomorphisms, eval_coordinates, extract_basis, identity_on, is_regular,
    superpose, ClosureResult, Coordinates,
};
pub use morphism::{check_morphism, decompose_morphism, Decomposition};
pub use rep::{Hand, RepClass, RepKind, Representation};
pub use word::{Actor, Evaluator, Level, Word};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OmegaError {
    #[error("invalid algebra: {0}")]
    Invalid(String),
    #[error("carrier of size {size} exceeds the bound {bound}")]
    CarrierTooLarge { size: usize, bound: usize },
    #[error("f({a}) is not an endomorphism: fails for operation {op} at {args:?}")]
    NotEndomorphism { a: usize, op: String, args: Vec<usize> },
    #[error("{law} fails: {witness}")]
    LawViolation { law: String, witness: String },
    #[error("no value assigned to generator {0}")]
    MissingGenerator(usize),
    #[error("set does not generate the carrier")]
    NotGenerating,
    #[error("map is not an endomorphism of the representation")]
    NotRepEndomorphism,
    #[error("word uses generator {0} which has no substitute")]
    GeneratorMismatch(usize),
    #[error("maps do not form a morphism of representations")]
    NotMorphism,
    #[error("representation is not single transitive")]
    NotSingleTransitive,
    #[error("unknown label {0:?}")]
    UnknownLabel(String),
}
