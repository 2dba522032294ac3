use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("n must be at least 1")]
    EmptySize,

    #[error("invalid partition {parts:?}: {reason}")]
    InvalidPartition { parts: Vec<usize>, reason: &'static str },

    #[error("invalid composition {parts:?}: parts must be positive")]
    InvalidComposition { parts: Vec<usize> },

    #[error("partitions of different sizes: {left} and {right}")]
    SizeMismatch { left: usize, right: usize },

    #[error("subset index {index} outside 1..={max}")]
    SubsetOutOfRange { index: usize, max: usize },

    #[error("subset indices must be strictly increasing")]
    SubsetNotIncreasing,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unsupported subgroup: {0}")]
    UnsupportedSubgroup(String),

    #[error("missing base count for partition {0}")]
    MissingBaseCount(String),

    #[error("coefficient map is zero")]
    ZeroMap,

    #[error("multiplicity matrix is not unitriangular for dominance: {0}")]
    NotUnitriangular(String),

    #[error("minimal support value must be positive: c({partition}) = {value}")]
    MinimalNotPositive { partition: String, value: String },

    #[error("matrix is not nilpotent")]
    NotNilpotent,

    #[error("enumeration of {size} elements exceeds the oracle cap of {cap}")]
    OracleBound { size: u128, cap: u128 },

    #[error("oracle counts disagree: {0}")]
    OracleMismatch(String),

    #[error("exact division failed: {0}")]
    InexactDivision(String),

    #[error("coefficient b is not determined for {0}; supply an explicit split")]
    SymbolicCoefficient(String),

    #[error("negative dimension {value} at j = {j}: below the validity threshold")]
    BelowValidity { value: String, j: u32 },

    #[error("{0}")]
    Io(String),

    #[error("malformed input: {0}")]
    Parse(String),
}

impl Error {
    /// True for failures of a mathematical invariant, as opposed to bad input.
    pub fn is_invariant_violation(&self) -> bool {
        matches!(
            self,
            Error::MinimalNotPositive { .. }
                | Error::InexactDivision(_)
                | Error::OracleMismatch(_)
                | Error::NotUnitriangular(_)
                | Error::BelowValidity { .. }
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
