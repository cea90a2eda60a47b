use thiserror::Error;

pub type Result<T> = std::result::Result<T, FracError>;

#[derive(Debug, Error)]
pub enum FracError {
    /// A parameter lies outside the domain where the operator is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// Invalid grid, solver or problem configuration.
    #[error("configuration error: {0}")]
    Config(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("grid function is not Dirichlet: endpoint values {first} and {last}")]
    NonDirichlet { first: f64, last: f64 },

    #[error("linear solver did not converge after {iterations} iterations (relative residual {residual:e})")]
    Solver { iterations: usize, residual: f64 },

    /// No admissible mountain-pass radius exists for the given constants.
    #[error("mountain-pass geometry: no positive radius found (bracket at smallest radius {bracket_at_min:e})")]
    Geometry { bracket_at_min: f64 },

    /// A structural hypothesis on the potential or nonlinearity failed.
    #[error("hypothesis `{name}` violated: {witness}")]
    Hypothesis { name: String, witness: String },

    /// A sampled inequality failed; `sample` is the JSON replay payload.
    #[error("inequality `{name}` violated by sample {sample_id} (ratio {ratio})")]
    InequalityViolated {
        name: String,
        sample_id: usize,
        ratio: f64,
        sample: String,
    },

    #[error("inconsistent solver state: {0}")]
    Inconsistency(String),

    /// A per-sweep monotonicity assertion failed; both records are JSON.
    #[error("{quantity} did not decrease between λ records: {first} then {second}")]
    Monotonicity {
        quantity: String,
        first: String,
        second: String,
    },

    #[error("every solve in the sweep failed to converge")]
    SweepFailed,

    #[error("undefined quantity: {0}")]
    Undefined(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error("config parse error: {0}")]
    ConfigParse(#[from] toml::de::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
