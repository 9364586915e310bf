use thiserror::Error;

/// Errors raised anywhere in the pipeline.
///
/// The variants are grouped by the CLI exit code they map to: invalid input
/// (2), group too large (3) and internal-consistency failures (4), which mean
/// a property that must hold for every valid input did not.
#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("group closure exceeded the cap of {cap} elements")]
    CapExceeded { cap: usize },
    #[error("generator {index} is not invertible")]
    NonInvertibleGenerator { index: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("generators do not span a discrete subgroup (real rank {real_rank} < rank {rank})")]
    NotDiscrete { rank: usize, real_rank: usize },
    #[error("lattice is not contained in the other lattice")]
    NotContained,
    #[error("group is reducible: character norm {norm}")]
    Reducible { norm: String },
    #[error("witness is not a rational form: {0}")]
    NotAForm(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("outside supported scope: {0}")]
    OutOfScope(String),
    #[error("no witness found: {0}")]
    NoWitness(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("internal consistency failure: {0}")]
    Consistency(String),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::CapExceeded { .. } => 3,
            Error::Consistency(_) => 4,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
