use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("argument error: {0}")]
    Argument(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid cover: {0}")]
    InvalidCover(String),
    #[error("resource bound exceeded: {what} (limit {limit}, reached {reached})")]
    Resource {
        what: String,
        limit: usize,
        reached: usize,
    },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invariance error: {0}")]
    Invariance(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("schema error: expected version {expected}, found {found}")]
    SchemaVersion { expected: u32, found: String },
    #[error("schema error: {0}")]
    Schema(String),
    #[error("oracle failure: {0}")]
    Oracle(String),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn arg<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Argument(msg.into()))
}
