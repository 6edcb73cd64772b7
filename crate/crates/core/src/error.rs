use thiserror::Error;

use crate::spin::Spin;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QError {
    #[error("q must be a positive real different from 1, got {0}")]
    InvalidQ(f64),
    #[error("cannot mix exact and numeric values")]
    MixedModes,
    #[error("numeric values evaluated at different points q = {0} and q = {1}")]
    MixedEvaluationPoints(f64, f64),
    #[error("operation requires exact mode")]
    NotExact,
    #[error("q-binomial needs 0 <= n <= m, got m = {m}, n = {n}")]
    BinomialRange { m: i64, n: i64 },
    #[error("pole at q = 1")]
    PoleAtOne,
    #[error("the q = 1 limit is irrational ({0})")]
    IrrationalLimit(f64),
    #[error("invalid spin {0}: must be a nonnegative half-integer")]
    InvalidSpin(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("module is not self-dual")]
    NotSelfDual,
    #[error("intertwiner space between irreducibles has dimension {0}, Schur's lemma allows at most 1")]
    SchurViolation(usize),
    #[error("decomposition did not exhaust the space: {found} of {total} dimensions")]
    IncompleteDecomposition { found: usize, total: usize },
    #[error("braiding eigenvalue {0} is zero within tolerance")]
    ZeroEigenvalue(f64),
    #[error("eigenvalue split failed: {0}")]
    Spectral(String),
    #[error("rewrite system is not confluent: {0}")]
    NotConfluent(String),
    #[error("no spin representation: {0}")]
    SpinRepresentation(String),
    #[error("covariance check failed: {0}")]
    Covariance(String),
    #[error("no adjoint component in the negative braiding eigenspace")]
    ThetaNotFound,
    #[error("spin {0} out of range for this operation")]
    SpinOutOfRange(Spin),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, QError>;
