//! Coefficient functions, admissible noise densities, and reproducible
//! simulation of `y_k = S(x_k) y_{k-1} + xi_k`.

mod coef;
mod noise;
mod trajectory;

pub use coef::{CoefFunction, CoefKind, FixtureContext};
pub use noise::{noise_panel, NoiseDensity, NoiseFamily, DEFAULT_SIGMA_STAR, PANEL_IDS};
pub use trajectory::{
    design_point, fourth_moment_bound, simulate, simulate_with_residuals, Trajectory,
};

/// One step of the recursion. Every simulation path in the crate goes through
/// this function so that independently produced trajectories agree bitwise.
#[inline(always)]
pub fn ar_step(coef_at_x: f64, y_prev: f64, xi: f64) -> f64 {
    coef_at_x * y_prev + xi
}
