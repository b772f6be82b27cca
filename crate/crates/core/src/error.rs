use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(String, String),
    #[error("duplicate basis name '{0}'")]
    DuplicateBasis(String),
    #[error("unknown basis element '{0}'")]
    UnknownBasis(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("degree mismatch: {0}")]
    Degree(String),
    #[error("not a chain complex: d∘d ≠ 0")]
    NotComplex,
    #[error("missing composition map ∘_{i} on arities ({p}, {q})")]
    MissingComposition { p: usize, i: usize, q: usize },
    #[error("arity {0} exceeds the stored bound {1}")]
    ArityBound(usize, usize),
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("enumeration budget exceeded: {needed} candidates > budget {budget}")]
    Budget { needed: u128, budget: u128 },
    #[error("unsupported in characteristic {0}: {1}")]
    Characteristic(u64, String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
