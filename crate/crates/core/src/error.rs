use thiserror::Error;

/// Errors produced by circuit construction, simulation, encoding and IO.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid gate: {0}")]
    InvalidGate(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("lookup table slot {0} is not bound")]
    UnboundTable(usize),

    #[error("invalid video: {}", join_violations(.0))]
    InvalidVideo(Vec<crate::encoding::Violation>),

    #[error("corrupt state: {0}")]
    CorruptState(String),

    #[error("incomplete sampling: {} cell(s) never observed, first {:?}", .0.len(), .0.first())]
    IncompleteSampling(Vec<(usize, usize)>),

    #[error("malformed file {path}: {reason}")]
    Format { path: String, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

fn join_violations(v: &[crate::encoding::Violation]) -> String {
    v.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; ")
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid_arg<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
