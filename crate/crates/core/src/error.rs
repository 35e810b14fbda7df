use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A configured size bound would be exceeded.
    #[error("size guard exceeded: {what} is {actual}, limit {limit}")]
    Guard {
        what: &'static str,
        actual: u128,
        limit: u128,
    },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("illegal demand: {0}")]
    IllegalDemand(String),
    #[error("node {0} is not a node of the network")]
    MissingNode(u8),
    #[error("operator {0} is not additive")]
    NonAdditive(String),
    #[error("not a basis: {0}")]
    NotABasis(String),
    #[error("certificate rejected: {0}")]
    Certificate(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    pub(crate) fn guard(what: &'static str, actual: impl Into<u128>, limit: impl Into<u128>) -> Self {
        Error::Guard {
            what,
            actual: actual.into(),
            limit: limit.into(),
        }
    }
}
