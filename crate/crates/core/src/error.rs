use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter for {family}: {name}={value} ({reason})")]
    InvalidParameter {
        family: &'static str,
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("domain error: {0}")]
    Domain(String),

    /// `psi_inv(0)`: the inverse of a Laplace transform is `+inf` at zero.
    #[error("generator inverse is +infinity at u = 0")]
    InfiniteInverse,

    #[error("unsupported capability: {0}")]
    Capability(String),

    #[error("degenerate hazard scale at t = {t}: derivative vanished")]
    DegenerateHazard { t: f64 },

    #[error("sampling is not supported for family {0}")]
    UnsupportedSampling(String),

    #[error("cannot parse `{token}`: {message}")]
    Parse { token: String, message: String },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("root finding failed: {0}")]
    RootFinding(String),

    #[error("i/o error: {0}")]
    Io(String),

    #[error("malformed batch file: {0}")]
    Format(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn parse(token: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            token: token.into(),
            message: message.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
