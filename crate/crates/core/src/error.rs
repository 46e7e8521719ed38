use thiserror::Error;

/// Errors raised by spline construction, matching and verification.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid piecewise polynomial: {0}")]
    InvalidPiecewise(String),
    #[error("polynomial degree {0} exceeds the cap of {max}", max = crate::poly::MAX_DEGREE)]
    DegreeTooHigh(usize),
    #[error("input has non-zero mean {mean:e} (tolerance {tol:e}); its antiderivative is not periodic")]
    NonZeroMeanInput { mean: f64, tol: f64 },
    #[error("function vanishes identically on the window")]
    IdenticallyZero,
    #[error("level {y} lies outside the branch range [{lo}, {hi}]")]
    LevelOutOfRange { y: f64, lo: f64, hi: f64 },
    #[error("parameter {name} = {value} must be non-negative")]
    NegativeParameter { name: &'static str, value: f64 },
    #[error("lambda = {0} must be positive")]
    NonPositiveLambda(f64),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("derivative order {k} outside 0..={r}")]
    KOutOfRange { k: usize, r: usize },
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("infeasible targets: {0}")]
    Infeasible(String),
    #[error("bracket expansion exhausted after {doublings} doublings")]
    NoBracket { doublings: usize },
    #[error("objective is not monotone along the bracket: {0}")]
    NonMonotone(String),
    #[error("input takes negative value {min:e}")]
    NegativeInput { min: f64 },
    #[error("t = {t} outside [0, {len}]")]
    TOutOfRange { t: f64, len: f64 },
    #[error("derivative of order {k} unavailable (max {max})")]
    DerivativeUnavailable { k: usize, max: usize },
    #[error("hypothesis failed: {0}")]
    HypothesisFailed(String),
    #[error("equality precondition failed: {lhs} vs {rhs}")]
    EqualityPreconditionFailed { lhs: f64, rhs: f64 },
    #[error("exponents must satisfy 0 < p < q, got p = {p}, q = {q}")]
    BadExponents { p: f64, q: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
