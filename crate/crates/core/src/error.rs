use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid modulus {0}: must be even and at least 4")]
    InvalidModulus(u64),

    #[error("resource limit: {0}")]
    Resource(String),

    #[error("{count} alternatives exceed the cap of {cap}")]
    TooManyAlternatives { count: String, cap: u64 },

    #[error("invalid sign assignment: {0}")]
    InvalidAssignment(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("partial sum overflow after term {index}")]
    Overflow { index: u64 },

    #[error("invariant violated at term {index}: {what}")]
    Invariant { index: u64, what: String },

    #[error("index {index} outside scanned range 2..={scanned}")]
    OutOfRange { index: u64, scanned: u64 },

    #[error("checkpoint rejected: {0}")]
    Checkpoint(String),

    #[error("unsupported format version {found} (expected {expected})")]
    Version { found: u64, expected: u64 },

    #[error("engine version mismatch: file has {found}, running {running}")]
    EngineVersion { found: String, running: String },

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
