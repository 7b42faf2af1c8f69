use thiserror::Error as ThisError;

/// Library-wide error type.
#[derive(Debug, ThisError)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("size limit exceeded: {0}")]
    SizeLimit(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("not decomposable as Q x H: {0}")]
    NotDecomposable(String),
    #[error("out of scope: {0}")]
    OutOfScope(String),
    #[error("generating set does not generate the group")]
    NotConnected,
    #[error("search budget exceeded")]
    BudgetExceeded,
    #[error("cross-edge completion failed: {0}")]
    CompletionFailed(String),
    #[error("parse error at offset {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("schema error: {0}")]
    Schema(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("internal error: {0}")]
    Internal(String),
}
