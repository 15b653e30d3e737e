use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("space too large: dimension {dim} x depth {depth} exceeds the cap of {cap} total bits")]
    Size { dim: u32, depth: u32, cap: u32 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("construction error: {0}")]
    Construction(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("collection is not laminar: sets #{first} and #{second} overlap in {overlap} cells without nesting")]
    NotLaminar {
        first: usize,
        second: usize,
        overlap: usize,
    },

    #[error("duplicate sets #{first} and #{second}")]
    Duplicate { first: usize, second: usize },

    #[error("serialization: {0}")]
    Serialization(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn construction(msg: impl Into<String>) -> Self {
        Error::Construction(msg.into())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Serialization(e.to_string())
    }
}
