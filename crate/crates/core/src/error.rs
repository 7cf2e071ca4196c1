use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("shape error: {0}")]
    Shape(String),
    #[error("singular matrix: {0}")]
    Singular(String),
    #[error("index out of range: {0}")]
    Index(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// The input lies outside the dense orbit stratum the construction needs.
    #[error("matrix is not generic: {0}")]
    NotGeneric(String),
    /// `exact` is true when non-conjugacy was certified, false when only the
    /// randomized search budget ran out.
    #[error("matrices are not conjugate ({})", if *exact { "certified" } else { "search budget exhausted" })]
    NotConjugate { exact: bool },
    #[error("invariant is not toric: {0}")]
    NotToric(String),
    #[error("permutation is not acceptable: {0}")]
    NotAcceptable(String),
    #[error("unstable point: every defining semi-invariant vanishes")]
    Unstable,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("problem too large for exhaustive search: {0}")]
    Scale(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
