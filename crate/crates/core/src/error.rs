use thiserror::Error;

/// Errors surfaced by the numerical substrate and the manifold loader.
#[derive(Debug, Error)]
pub enum CoreError {
    #[error("coordinate index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("division by near-zero value {value:e} (guard {guard:e}); singular metric or expression")]
    DivisionNearZero { value: f64, guard: f64 },

    #[error("domain violation: {func}({value}) is outside the real domain")]
    DomainViolation { func: &'static str, value: f64 },

    #[error("degenerate metric at point {point:?}: {detail}")]
    DegenerateMetric { point: Vec<f64>, detail: String },

    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("unknown identifier `{name}` at byte {offset}")]
    UnknownIdentifier { name: String, offset: usize },

    #[error("unknown function `{name}` at byte {offset}")]
    UnknownFunction { name: String, offset: usize },

    #[error("exponent at byte {offset} does not fold to a constant")]
    NonConstantExponent { offset: usize },

    #[error("manifold file error: {0}")]
    ManifoldFile(String),

    #[error("invariant violation: {0}")]
    Invariant(String),

    #[error("missing field: {0}")]
    MissingField(String),

    #[error("unknown theorem id `{0}`")]
    UnknownTheorem(String),

    #[error("unknown zoo entry `{0}`")]
    UnknownZooEntry(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, CoreError>;
