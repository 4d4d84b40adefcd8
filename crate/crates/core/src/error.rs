use thiserror::Error;

/// Errors raised while building, validating or processing a cell multicomplex.
#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed complex description: {0}")]
    Parse(#[from] serde_json::Error),

    #[error("malformed signal file: {0}")]
    Csv(#[from] csv::Error),

    #[error("malformed signal file: {0}")]
    SignalFormat(String),

    #[error("invalid cell id `{0}`")]
    InvalidCellId(String),

    #[error("{cell}: face `{face}` does not exist")]
    DanglingFace { cell: String, face: String },

    #[error("duplicate cell `{cell}`")]
    DuplicateCell { cell: String },

    #[error("{cell}: face `{face}` is listed more than once")]
    RepeatedFace { cell: String, face: String },

    #[error("{cell}: self-loop on node {node}")]
    SelfLoop { cell: String, node: u64 },

    #[error("cross pair {lower}-{upper}: cross-edge endpoints on the same layer")]
    SameLayer { lower: u32, upper: u32 },

    #[error("cross pair {lower}-{upper} is not in ascending layer order")]
    NonCanonicalPair { lower: u32, upper: u32 },

    #[error("unknown layer {0}")]
    UnknownLayer(u32),

    #[error("{cell}: declared class ({declared}) is inconsistent with its faces ({derived})")]
    ClassMismatch {
        cell: String,
        declared: String,
        derived: String,
    },

    #[error("chain property violated at {at}")]
    ChainViolation { at: String },

    #[error("unknown layer pair {lower}-{upper}")]
    UnknownPair { lower: u32, upper: u32 },

    #[error("class ({k},{n}) is not supported by the second-order pipeline")]
    UnsupportedClass { k: i8, n: i8 },

    #[error("signal indexing does not match the operator domain: {0}")]
    IndexMismatch(String),

    #[error("reference signal has zero norm")]
    ZeroNorm,

    #[error("signal has zero variance; the noise level is undefined")]
    DegenerateSignal,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("eigensolver failure: {0}")]
    Eigen(String),
}

impl Error {
    /// Short machine-readable kind, used in validation reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parse(_) => "parse",
            Error::Csv(_) | Error::SignalFormat(_) => "signal_format",
            Error::InvalidCellId(_) => "invalid_cell_id",
            Error::DanglingFace { .. } => "dangling_face",
            Error::DuplicateCell { .. } => "duplicate_cell",
            Error::RepeatedFace { .. } => "repeated_face",
            Error::SelfLoop { .. } => "self_loop",
            Error::SameLayer { .. } => "same_layer_cross_edge",
            Error::NonCanonicalPair { .. } => "non_canonical_pair",
            Error::UnknownLayer(_) => "unknown_layer",
            Error::ClassMismatch { .. } => "class_mismatch",
            Error::ChainViolation { .. } => "chain_violation",
            Error::UnknownPair { .. } => "unknown_pair",
            Error::UnsupportedClass { .. } => "unsupported_class",
            Error::IndexMismatch(_) => "index_mismatch",
            Error::ZeroNorm => "zero_norm",
            Error::DegenerateSignal => "degenerate_signal",
            Error::InvalidConfig(_) => "invalid_config",
            Error::Eigen(_) => "eigen",
        }
    }

    /// The offending cell id, when the error is attached to one.
    pub fn cell_id(&self) -> Option<&str> {
        match self {
            Error::DanglingFace { cell, .. }
            | Error::DuplicateCell { cell }
            | Error::SelfLoop { cell, .. }
            | Error::RepeatedFace { cell, .. }
            | Error::ClassMismatch { cell, .. } => Some(cell),
            Error::ChainViolation { at } => Some(at),
            Error::InvalidCellId(id) => Some(id),
            _ => None,
        }
    }

    /// Whether the error is a structural validation failure of a parsed description.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::InvalidCellId(_)
                | Error::DanglingFace { .. }
                | Error::DuplicateCell { .. }
                | Error::SelfLoop { .. }
                | Error::RepeatedFace { .. }
                | Error::SameLayer { .. }
                | Error::NonCanonicalPair { .. }
                | Error::UnknownLayer(_)
                | Error::ClassMismatch { .. }
                | Error::ChainViolation { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
