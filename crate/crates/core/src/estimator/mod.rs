//! The truncated kernel estimator of `S(z0)`, its parameter schedule, the
//! exact error decomposition, and the likelihood-ratio statistics of the bump
//! family.

mod estimate;
mod kernel;
mod lan;
mod schedule;

pub(crate) use estimate::Accumulator;
pub use estimate::{decompose, estimate, EstimateResult};
pub use kernel::{validate_kernel, KernelShape, KernelSpec, KERNEL_IDS, MOMENT1_TOL};
pub(crate) use lan::LanAccumulator;
pub use lan::{lan_statistics, LanStatistics};
pub use schedule::{make_schedule, rate_exponent, Schedule, DEFAULT_GAMMA};
