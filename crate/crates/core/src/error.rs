use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A parameter failed validation. `name` is the offending key.
    #[error("{name}: {message}")]
    Parameter { name: &'static str, message: String },

    #[error("kernel rejected: moment0 = {moment0:e} (must be > 0), moment1 = {moment1:e} (must satisfy |moment1| <= 1e-10)")]
    KernelRejected { moment0: f64, moment1: f64 },

    #[error("bump amplitude |u| = {u} exceeds u* = {u_star} (K / max|V''|)")]
    AmplitudeTooLarge { u: f64, u_star: f64 },

    #[error("unknown {kind} id `{id}`")]
    UnknownId { kind: &'static str, id: String },

    #[error("trajectory carries no residuals")]
    MissingResiduals,

    #[error("schedule is for n = {schedule} but the trajectory has n = {trajectory}")]
    ScheduleMismatch { schedule: u64, trajectory: u64 },

    #[error("{0}")]
    NotNullModel(String),

    #[error("need at least {needed} distinct sample sizes, got {got}")]
    InsufficientPoints { needed: usize, got: usize },

    #[error("statistic is degenerate: {0}")]
    Degenerate(String),
}

impl Error {
    pub(crate) fn param(name: &'static str, message: impl Into<String>) -> Self {
        Error::Parameter {
            name,
            message: message.into(),
        }
    }
}
