use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("empty dataset")]
    EmptyDataset,

    #[error("line {line}: {reason}")]
    Malformed { line: usize, reason: String },

    #[error("block {block}: {reason}")]
    MalformedBlock { block: String, reason: String },

    #[error("block {block}, matrix row {row}: expected {expected} weights, found {found}")]
    BlockRowWidth {
        block: String,
        row: usize,
        expected: usize,
        found: usize,
    },

    #[error("record {id}: {reason}")]
    Dimension { id: String, reason: String },

    #[error("invalid attention matrix: {0}")]
    InvalidMatrix(String),

    #[error("invalid record {id}: {reason}")]
    InvalidRecord { id: String, reason: String },

    #[error("duplicate record id {0:?}")]
    DuplicateId(String),

    #[error("record {id}: {source}")]
    Scoring {
        id: String,
        #[source]
        source: Box<Error>,
    },

    #[error("{scores} score sets for {records} records")]
    ScoreCount { records: usize, scores: usize },

    #[error("BLEU needs non-empty hypothesis and reference")]
    EmptyBleuInput,

    #[error("sorting by BLEU requires a reference for every record")]
    BleuUnavailable,

    #[error("datasets differ in length: {a} vs {b} records")]
    PairLength { a: usize, b: usize },

    #[error("source mismatch at position {position}: {source_a:?} vs {source_b:?}")]
    SourceMismatch {
        position: usize,
        source_a: String,
        source_b: String,
    },

    #[error("unsupported index format version {found:?} (expected {expected})")]
    IndexVersion { found: String, expected: u32 },

    #[error("corrupt index at byte {offset}: {reason}")]
    IndexCorrupt { offset: usize, reason: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn malformed(line: usize, reason: impl Into<String>) -> Self {
        Error::Malformed {
            line,
            reason: reason.into(),
        }
    }

    pub(crate) fn corrupt(offset: usize, reason: impl Into<String>) -> Self {
        Error::IndexCorrupt {
            offset,
            reason: reason.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
