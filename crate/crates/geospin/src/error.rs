//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at offset {offset}: expected {expected}, found {found}")]
    Syntax {
        offset: usize,
        expected: String,
        found: String,
    },

    #[error("unknown identifier `{name}` at offset {offset}")]
    UnknownIdentifier { name: String, offset: usize },

    #[error("function `{function}` takes exactly one argument (at offset {offset})")]
    ArityMismatch { function: String, offset: usize },

    #[error("domain error: {detail} in `{context}`{}", span_suffix(.span))]
    EvalDomain {
        detail: String,
        context: String,
        span: Option<(usize, usize)>,
    },

    #[error("point {point:?} violates chart-domain constraint `{constraint}`")]
    OutOfDomain { point: Vec<f64>, constraint: String },

    #[error(
        "metric is not positive definite at {point:?}: leading {order}x{order} minor = {minor}"
    )]
    NotPositiveDefinite {
        point: Vec<f64>,
        order: usize,
        minor: f64,
    },

    #[error("metric is degenerate (determinant {det}) at {point:?}")]
    DegenerateMetric { point: Vec<f64>, det: f64 },

    #[error("matrix is singular (determinant {det})")]
    SingularMatrix { det: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("expected a vector with {expected} index components")]
    IndexPosition { expected: &'static str },

    #[error("unknown manifold `{name}` (try `list-manifolds`)")]
    UnknownManifold { name: String },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: String, reason: String },

    #[error("metric manifest is not symmetric: entry ({i},{j}) differs from ({j},{i})")]
    AsymmetricMetric { i: usize, j: usize },

    #[error("bad manifold manifest: {0}")]
    Manifest(String),

    #[error("geodesic left the chart domain at t = {t}: {reason} (last valid state x = {x:?}, v = {v:?})")]
    DomainExit {
        t: f64,
        x: Vec<f64>,
        v: Vec<f64>,
        reason: String,
    },

    #[error("non-finite state at t = {t}")]
    NonFiniteState { t: f64 },

    #[error("trajectory has {got} samples, need at least {need}")]
    TooFewSamples { need: usize, got: usize },

    #[error("mode samples misaligned: need an odd number of half-step values >= 3, got {len}")]
    GridMisalignment { len: usize },

    #[error("eigenvalue iteration did not converge: {converged}/{n} eigenvalues after {sweeps} sweeps")]
    NonConvergence {
        converged: usize,
        n: usize,
        sweeps: usize,
    },

    #[error("hbar must be positive, got {0}")]
    NonPositiveHbar(f64),

    #[error("metric is not Einstein at the base point (|Ric - (R/n) g| = {deviation:.3e}); Ricci flow supports Einstein/homothetic families only")]
    NotEinstein { deviation: f64 },

    #[error("internal consistency check failed: {0}")]
    Internal(String),

    #[error("integration setup: {0}")]
    BadIntegration(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

fn span_suffix(span: &Option<(usize, usize)>) -> String {
    match span {
        Some((start, end)) => format!(" at offsets {start}..{end}"),
        None => String::new(),
    }
}

impl Error {
    /// Exit-code class for the CLI: 1 = computational failure, 2 = usage error.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidParameter { .. } => 2,
            _ => 1,
        }
    }
}
