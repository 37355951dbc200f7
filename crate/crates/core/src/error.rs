use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("invalid sequence: {0}")]
    InvalidSequence(String),
    #[error("invalid block: {0}")]
    InvalidBlock(String),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("invalid entangling: {0}")]
    InvalidEntangling(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("{what} is capped at k <= {cap}, got k = {k}")]
    CapExceeded { what: &'static str, cap: usize, k: usize },
    #[error("search budget of {0} nodes exceeded")]
    BudgetExceeded(u64),
    #[error("invalid instance parameters: {0}")]
    InvalidSpec(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid config: {0}")]
    Config(String),
    #[error(transparent)]
    Oracle(#[from] crate::oracle::OracleError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
