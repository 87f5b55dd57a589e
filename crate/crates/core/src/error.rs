use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("no uplink granted: transmission delay is undefined for a zero-capacity channel")]
    NoUplink,

    #[error("no computation units granted: MEC processing time is undefined at zero frequency")]
    NoComputeUnits,

    #[error("slice/deadline mismatch: {0}")]
    SliceMismatch(String),

    #[error("infeasible decision ({k_comm} comm, {k_comp} comp) with ({comm_remaining}, {comp_remaining}) remaining")]
    Infeasible {
        k_comm: u32,
        k_comp: u32,
        comm_remaining: u32,
        comp_remaining: u32,
    },

    #[error("every action is masked")]
    AllMasked,

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    Dimension { expected: usize, actual: usize },

    #[error("cannot aggregate metrics: {0}")]
    EmptyMetrics(String),

    #[error("non-finite loss during {phase}: {detail}")]
    NonFiniteLoss { phase: &'static str, detail: String },

    #[error("replay buffer holds {len} transitions, need at least {needed}")]
    UnderfilledReplay { len: usize, needed: usize },

    #[error("length mismatch: {0}")]
    LengthMismatch(String),

    #[error("config error at `{path}`: {message}")]
    Config { path: String, message: String },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("malformed input: {0}")]
    Malformed(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
