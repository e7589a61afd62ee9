use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected length {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("minimum distance is undefined for a code with {0} word(s)")]
    UndefinedDistance(usize),

    #[error("capacity exceeded: M = {requested} needs M * d_L * d_R < #X0, but d_L * d_R = {conflict_degree} and #X0 = {inputs}")]
    Capacity {
        requested: usize,
        conflict_degree: usize,
        inputs: usize,
    },

    #[error("resource cap exceeded: {0}")]
    Resource(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl Error {
    pub(crate) fn domain(message: impl Into<String>) -> Self {
        Error::Domain(message.into())
    }

    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    pub fn check_len(expected: usize, found: usize) -> Result<()> {
        if expected == found {
            Ok(())
        } else {
            Err(Error::Dimension { expected, found })
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
