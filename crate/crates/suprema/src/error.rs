use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter for {family}: {message}")]
    InvalidParameter {
        family: &'static str,
        message: String,
    },
    #[error("domain error in {what}: {message}")]
    Domain { what: &'static str, message: String },
    #[error("not a moderate function: {0}")]
    NotModerate(String),
    #[error("estimation failure: {0}")]
    Estimation(String),
    #[error("root finding failed: {0}")]
    RootFind(String),
    #[error("sample size mismatch: {0} vs {1}")]
    SampleSizeMismatch(usize, usize),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn domain(what: &'static str, message: impl Into<String>) -> Self {
        Error::Domain {
            what,
            message: message.into(),
        }
    }

    pub fn param(family: &'static str, message: impl Into<String>) -> Self {
        Error::InvalidParameter {
            family,
            message: message.into(),
        }
    }
}
