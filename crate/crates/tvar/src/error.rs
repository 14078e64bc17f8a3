use std::io;
use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Rejected configuration or input; maps to exit code 2.
    #[error("{0}")]
    Invalid(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error(transparent)]
    Core(#[from] tvar_core::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn invalid(msg: impl std::fmt::Display) -> Self {
        Error::Invalid(msg.to_string())
    }

    pub(crate) fn io(path: impl Into<PathBuf>) -> impl FnOnce(io::Error) -> Self {
        let path = path.into();
        move |source| Error::Io { path, source }
    }

    /// Process exit code: 2 for rejected configuration or input, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        use tvar_core::Error as Core;
        match self {
            Error::Invalid(_) => 2,
            Error::Core(
                Core::Parameter { .. }
                | Core::UnknownId { .. }
                | Core::KernelRejected { .. }
                | Core::AmplitudeTooLarge { .. }
                | Core::InsufficientPoints { .. },
            ) => 2,
            _ => 1,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
