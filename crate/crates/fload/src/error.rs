use thiserror::Error;

/// Crate-wide error type.
///
/// `Parse` and `Invalid` are input errors (CLI exit code 1); `Degenerate`
/// marks computation-domain failures such as a zero-entropy corpus (exit
/// code 2).
#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{0}")]
    Invalid(String),
    #[error("{0}")]
    Degenerate(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn parse(line: usize, msg: impl Into<String>) -> Error {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }

    pub fn invalid(msg: impl Into<String>) -> Error {
        Error::Invalid(msg.into())
    }

    pub fn degenerate(msg: impl Into<String>) -> Error {
        Error::Degenerate(msg.into())
    }

    /// Stable process exit code for this error class.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Degenerate(_) => 2,
            _ => 1,
        }
    }
}
