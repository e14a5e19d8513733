use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid triangle: {identity}")]
    InvalidTriangle { identity: String },
    #[error("point not in the image of the correspondence: {0}")]
    NotInImage(String),
    #[error("degenerate sum: {0}")]
    DegenerateSum(String),
    #[error("triangle outside the four-type classification")]
    OutsideClassification,
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
