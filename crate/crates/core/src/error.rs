use alloc::string::String;

/// Errors raised by the core library.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("no edges")]
    NoEdges,
    #[error("pattern too large for quotient enumeration (n = {0}, max 8)")]
    PatternTooLargeForQuotients(usize),
    #[error("pattern too large: {what} (got {got}, max {max})")]
    TooLarge {
        what: &'static str,
        got: usize,
        max: usize,
    },
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("edge ({0}, {1}) not in pattern")]
    EdgeNotInPattern(usize, usize),
    #[error("unknown pattern name `{0}`")]
    UnknownPattern(String),
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("not a norm: alpha = {0} < 1")]
    NotANorm(f64),
    #[error("index out of range: {what} = {got} not in [{lo}, {hi}]")]
    OutOfRange {
        what: &'static str,
        got: usize,
        lo: usize,
        hi: usize,
    },
    #[error("argument out of range: {0}")]
    Domain(String),
    #[error("root finder did not converge: bracket [{lo}, {hi}], residual {residual:e}")]
    NoConvergence { lo: f64, hi: f64, residual: f64 },
    #[error("infeasible within budget")]
    Infeasible,
    #[error("no convexity certificate: {0}")]
    NoConvexityCertificate(String),
    #[error("zero effective sample size")]
    ZeroEffectiveSampleSize,
    #[error("frame not orthonormal: Gram deviation {0:e}")]
    NotOrthonormal(f64),
    #[error("subspace condition violated: |YZ|_HS = {0:e}")]
    SubspaceViolation(f64),
    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = core::result::Result<T, Error>;
