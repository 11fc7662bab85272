use thiserror::Error;

/// Errors raised by the hat-game laboratory.
///
/// The variants line up with the failure classes the CLI reports: bad
/// values, protocol mismatches, illegal strategies, size guards and
/// malformed files.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HatError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("protocol error: {0}")]
    Protocol(String),
    #[error("strategy error: {0}")]
    Strategy(String),
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    #[error("malformed input: {0}")]
    Format(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, HatError>;

macro_rules! bail {
    ($kind:ident, $($arg:tt)*) => {
        return Err($crate::error::HatError::$kind(format!($($arg)*)))
    };
}
pub(crate) use bail;

impl HatError {
    /// The message without the class prefix.
    pub fn message(&self) -> &str {
        match self {
            HatError::Domain(m)
            | HatError::Protocol(m)
            | HatError::Strategy(m)
            | HatError::Capacity(m)
            | HatError::Format(m)
            | HatError::Unsupported(m)
            | HatError::Precondition(m) => m,
        }
    }
}
