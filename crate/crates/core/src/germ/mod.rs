//! Exact multivariate polynomial algebra over the rationals.
//!
//! Everything in here is exact: coefficients are arbitrary-precision
//! rationals, so identities such as the chain rule or the alternating
//! property of minors can be checked as structural equalities.

mod map;
mod matrix;
mod poly;

pub use map::MapGerm;
pub use matrix::PolyMat;
pub use poly::{Mono, Poly, Rat, MAX_TERMS};
pub(crate) use poly::rat_to_f64;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("ambient dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("variable index {index} out of range for {dim} variables")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("result would exceed {limit} terms")]
    TermLimit { limit: usize },
    #[error("matrix shape mismatch: {0}")]
    Shape(String),
    #[error("germ must map origin to origin (component {component} has a nonzero constant term)")]
    NonzeroConstantTerm { component: usize },
    #[error("target dimension {target} exceeds source dimension {source_dim}")]
    TargetExceedsSource { source_dim: usize, target: usize },
    #[error("duplicate variable name `{0}`")]
    DuplicateVariable(String),
    #[error("a germ needs at least one component")]
    NoComponents,
}
