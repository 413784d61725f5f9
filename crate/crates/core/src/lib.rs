//! Exact geometry over finite-dimensional division rings.
//!
//! Scalars are arbitrary-precision rationals. A division ring is given by its
//! structural constants over ℚ, and everything built on top of it (forms,
//! affine maps, polynomial charts) stays exact.

#![allow(clippy::needless_range_loop)]

pub mod affine;
pub mod algebra;
pub mod calculus;
pub mod forms;
pub mod linalg;
pub mod omega;
pub mod par;
pub mod rational;
pub mod text;
pub mod tower;

pub use algebra::{Algebra, AlgebraError, BasisChange, Element};
pub use rational::Rational;
