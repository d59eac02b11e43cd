use alloc::string::String;

/// Errors shared by the numeric and feedback layers.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CoreError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("empty batch")]
    EmptyBatch,
    #[error("empty dataset")]
    EmptyDataset,
    #[error("length mismatch: {left} predictions vs {right} truths")]
    LengthMismatch { left: usize, right: usize },
    #[error("too few examples: {available} cannot fill splits of sizes {train}/{dev}/{test}")]
    TooFewExamples {
        available: usize,
        train: usize,
        dev: usize,
        test: usize,
    },
    #[error("no program scored above the good-profile threshold")]
    NoGoodPrograms,
    #[error("feature schema mismatch: expected {expected}, got {got}")]
    SchemaMismatch { expected: String, got: String },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}
