use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),

    #[error("invalid query: {0}")]
    InvalidQuery(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("invalid DAG: {0}")]
    InvalidDag(String),

    #[error("invalid MAG: {0}")]
    InvalidMag(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid format: {0}")]
    InvalidFormat(String),

    #[error("brute-force oracle limited to {limit} vertices, graph has {vertices}")]
    OracleSizeExceeded { vertices: usize, limit: usize },

    #[error("undirected part of the MAG is not chordal")]
    ChordalityViolated,

    #[error("internal invariant broken: {0}")]
    InternalInvariantBroken(String),

    #[error("{samples} samples are too few for a conditioning set of size {cond_size}")]
    InsufficientSamples { samples: usize, cond_size: usize },

    #[error("constraint unsatisfiable: {0}")]
    ConstraintUnsatisfiable(String),

    #[error("selection too restrictive: {accepted} of {attempts} draws accepted")]
    SelectionTooRestrictive { attempts: u64, accepted: u64 },

    #[error("invalid comparison: {0}")]
    InvalidComparison(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for errors that signal a bug rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::InternalInvariantBroken(_))
    }
}
