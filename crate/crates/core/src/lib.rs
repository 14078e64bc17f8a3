//! Kernel estimation of the coefficient function of a time-varying first-order
//! autoregression
//!
//! ```text
//! y_k = S(x_k) y_{k-1} + xi_k,   x_k = k/n,   1 <= k <= n
//! ```
//!
//! at a fixed interior point `z0`, together with the smoothness classes the
//! estimator is calibrated against and a Monte Carlo harness that measures its
//! risk, convergence rate and efficiency constant.
//!
//! The crate is `no_std` (it needs `alloc`). All transcendental functions come
//! from [`libm`], so every number produced here is bitwise reproducible across
//! platforms and thread counts. Parallelism is injected through
//! [`mc::Executor`]; the `tvar` companion crate supplies a rayon-backed one
//! along with file formats and the command line.

#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod classes;
mod error;
pub mod estimator;
pub mod mc;
pub mod model;
pub mod quad;
pub mod rng;
pub mod sum;

pub use crate::error::{Error, Result};
pub use crate::estimator::{
    decompose, estimate, lan_statistics, make_schedule, validate_kernel, EstimateResult,
    KernelSpec, LanStatistics, Schedule,
};
pub use crate::model::{
    fourth_moment_bound, noise_panel, simulate, CoefFunction, NoiseDensity, Trajectory,
};
