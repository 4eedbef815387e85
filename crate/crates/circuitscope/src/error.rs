//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid config: {0}")]
    InvalidConfig(String),
    #[error("token {token} out of range for vocab size {vocab_size}")]
    TokenOutOfRange { token: u32, vocab_size: u32 },
    #[error("sequence length {len} exceeds max_seq_len {max}")]
    SequenceTooLong { len: usize, max: usize },
    #[error("sequence too short: need at least {need} tokens, got {got}")]
    SequenceTooShort { need: usize, got: usize },
    #[error("unknown edge: {0}")]
    UnknownEdge(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("blend coefficient {0} outside [0, 1]")]
    InvalidBlend(f64),
    #[error("integrated-gradient step count must be >= 1, got {0}")]
    InvalidSteps(usize),
    #[error("circuit size {k} out of range [1, {max}]")]
    SizeOutOfRange { k: usize, max: usize },
    #[error("degenerate baseline: |clean - corrupt| = {0:e} below 1e-8")]
    DegenerateBaseline(f64),
    #[error("faithfulness threshold {threshold} unreachable: full graph scores {full}")]
    UnreachableThreshold { threshold: f64, full: f64 },
    #[error("empty dataset")]
    EmptyDataset,
    #[error("empty input series")]
    EmptyInput,
    #[error("malformed corpus: {0}")]
    MalformedCorpus(String),
    #[error("misaligned datasets: {0}")]
    MisalignedDatasets(String),
    #[error("invalid receiver: {0}")]
    InvalidReceiver(String),
    #[error("no name-mover heads identified; run classification first")]
    MissingNmh,
    #[error("no classified heads at this checkpoint (circuit not yet formed)")]
    NoClassifiedHeads,
    #[error("zero variance in correlation input")]
    ZeroVariance,
    #[error("insufficient vocabulary: {0}")]
    InsufficientVocabulary(String),
    #[error("vocabulary mismatch: dataset token {token} >= model vocab {vocab_size}")]
    VocabularyMismatch { token: u32, vocab_size: u32 },
    #[error("training diverged at step {step}: loss = {loss}")]
    Divergence { step: u64, loss: f64 },
    #[error("bad checkpoint file: {0}")]
    BadCheckpoint(String),
    #[error("unsupported format version {found} (supported: {supported})")]
    VersionMismatch { found: u32, supported: u32 },
    #[error("missing file: {0}")]
    MissingFile(String),
    #[error("schema violation: {0}")]
    SchemaViolation(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
