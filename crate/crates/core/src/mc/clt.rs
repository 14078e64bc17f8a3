use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::risk::for_each_cell;
use super::stats::{ks_normal, mean, std_error, variance};
use super::{Executor, ExperimentConfig};
use crate::classes::tau;
use crate::error::Result;

/// Sample moments of `sqrt(tau / 2) zeta_n`, which is asymptotically standard
/// normal for the indicator kernel.
#[derive(Clone, Debug, PartialEq)]
pub struct CltRow {
    pub coef_id: String,
    pub noise_id: String,
    pub n: u64,
    pub mean: f64,
    pub variance: f64,
    pub std_error: f64,
    /// Kolmogorov–Smirnov distance to the standard normal.
    pub ks: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CltReport {
    pub config: ExperimentConfig,
    pub rows: Vec<CltRow>,
}

pub fn clt_diagnostic<E: Executor>(config: &ExperimentConfig, exec: &E) -> Result<CltReport> {
    let mut rows = Vec::new();
    for_each_cell(config, exec, |cell, reps| {
        let scale = libm::sqrt(tau(cell.coef, cell.sched.z0) / 2.0);
        let z: Vec<f64> = reps
            .iter()
            .map(|r| scale * r.zeta.unwrap_or(f64::NAN))
            .collect();
        rows.push(CltRow {
            coef_id: cell.coef.id().to_string(),
            noise_id: cell.noise.id.clone(),
            n: cell.sched.n,
            mean: mean(&z),
            variance: variance(&z),
            std_error: std_error(&z),
            ks: ks_normal(&z),
        });
        Ok(())
    })?;
    Ok(CltReport {
        config: config.clone(),
        rows,
    })
}
