use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid sequence: {0}")]
    InvalidSequence(String),

    #[error("tail law disagrees with the stored value at p = {index} (deviation {deviation:e})")]
    TailMismatch { index: usize, deviation: f64 },

    #[error("sequence is not normalized (need log M_0 = 0 and log M_p >= 0)")]
    NotNormalized,

    #[error("sequence is not log-convex (second difference negative at p = {0})")]
    NotLogConvex(usize),

    #[error("piecewise-linear function is not convex (slope drops at breakpoint {0})")]
    NotConvex(usize),

    #[error("invalid piecewise-linear function: {0}")]
    InvalidPiecewise(String),

    #[error("conjugate requested at {requested} but it is only finite up to {limit}")]
    DomainExceeded { requested: f64, limit: f64 },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("non-quasianalyticity routes disagree: hull route {hull_route}, root route {root_route}")]
    RoutesDisagree { hull_route: String, root_route: String },

    #[error("minorant recursion exhausted its search horizon at q = {q}")]
    TruncationExhausted { q: usize },

    #[error("row {0} has no tail law, its infinite sums cannot be certified")]
    TailNotCertified(String),

    #[error("interpolant failed verification: {0}")]
    InterpolantUnverified(String),

    #[error("spectral derivative of order {order} is below the noise floor")]
    DerivativeOrderUnreliable { order: usize },

    #[error("Fourier norm tail dominates: bracket [{low:e}, {high:e}]")]
    TailDominates { low: f64, high: f64 },

    #[error("box kernel widths sum to {needed}, only {available} available")]
    WidthBudgetExceeded { needed: f64, available: f64 },

    #[error("no witness found on the parameter grid")]
    NoWitnessOnGrid,

    #[error("hypothesis not certified: {0}")]
    HypothesisNotCertified(String),

    #[error("class membership failed: {0}")]
    ClassMembershipFailed(String),

    #[error("internal consistency violated: {0}")]
    Consistency(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
