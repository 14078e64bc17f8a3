use alloc::vec::Vec;

use super::cell::cell_hash;
use super::stats::{mean, variance};
use super::{Executor, ExperimentConfig};
use crate::error::Result;
use crate::estimator::LanAccumulator;
use crate::estimator::LanStatistics;
use crate::model::NoiseDensity;
use crate::quad::DEFAULT_QUAD_NODES;
use crate::rng::replication_seed;

/// LAN statistics under `S = 0` with Gaussian noise for one `n`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LanRow {
    pub n: u64,
    /// `varsigma_n^2` of replication 0.
    pub varsigma_sq_first: f64,
    pub varsigma_sq_mean: f64,
    /// `integral V^2`, the limit of `varsigma_n^2`.
    pub varsigma_sq_target: f64,
    pub eta_mean: f64,
    pub eta_variance: f64,
    /// Sample mean of `log rho_n(u)` at `u = lan_u`.
    pub log_rho_mean: f64,
    /// `-u^2 integral V^2 / 2`.
    pub log_rho_target: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LanReport {
    pub config: ExperimentConfig,
    pub rows: Vec<LanRow>,
}

/// Runs the LAN diagnostic on every `n` of the grid.
///
/// The coefficient and noise lists of `config` are ignored: the statistics are
/// defined under the null `S = 0` with standard Gaussian noise, where
/// `y_k = xi_k`. Replication `r` uses the seed of the `("zero", "gaussian", n)`
/// cell, so its values agree with a full simulation of that cell.
pub fn lan_diagnostic<E: Executor>(config: &ExperimentConfig, exec: &E) -> Result<LanReport> {
    config.validate()?;
    let profile = config.lan_profile()?;
    let target = profile.l2_norm_sq(DEFAULT_QUAD_NODES)?;
    let noise = NoiseDensity::gaussian();
    let u = config.lan_u;
    let mut rows = Vec::new();
    for &n in &config.n_grid {
        let sched = config.schedule(n)?;
        let scan = sched.scan_range();
        let v_at: Vec<f64> = scan.clone().map(|k| profile.value(sched.u(k))).collect();
        let key = cell_hash("zero", &noise.id, n);
        let stats = exec.map_indexed(config.replications as usize, |r| {
            let seed = replication_seed(config.root_seed, key, r as u64);
            let start = *scan.start();
            let mut prev = if start == 1 {
                config.y0
            } else {
                noise.draw(seed, start - 1)
            };
            let mut acc = LanAccumulator::default();
            for (i, &v) in v_at.iter().enumerate() {
                let xi = noise.draw(seed, start + i as u64);
                acc.push(v, prev, xi);
                prev = xi;
            }
            acc.finish(&sched, u)
        });
        let stats: Vec<LanStatistics> = stats.into_iter().collect::<Result<_>>()?;
        let vs: Vec<f64> = stats.iter().map(|s| s.varsigma_sq).collect();
        let eta: Vec<f64> = stats.iter().map(|s| s.eta).collect();
        let lr: Vec<f64> = stats.iter().map(|s| s.log_rho).collect();
        rows.push(LanRow {
            n,
            varsigma_sq_first: vs[0],
            varsigma_sq_mean: mean(&vs),
            varsigma_sq_target: target,
            eta_mean: mean(&eta),
            eta_variance: variance(&eta),
            log_rho_mean: mean(&lr),
            log_rho_target: -u * u * target / 2.0,
        });
    }
    Ok(LanReport {
        config: config.clone(),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classes::BumpProfile;
    use crate::estimator::lan_statistics;
    use crate::mc::Sequential;
    use crate::model::{simulate, CoefFunction};
    use alloc::vec;

    fn cfg() -> ExperimentConfig {
        ExperimentConfig {
            n_grid: vec![5_000],
            replications: 300,
            y0: 0.3,
            ..ExperimentConfig::default()
        }
    }

    #[test]
    fn window_only_path_matches_full_simulation() {
        let c = cfg();
        let sched = c.schedule(5_000).unwrap();
        let noise = NoiseDensity::gaussian();
        let seed = replication_seed(c.root_seed, cell_hash("zero", "gaussian", 5_000), 0);
        let t = simulate(&CoefFunction::zero(), &noise, 5_000, c.y0, seed).unwrap();
        let full =
            lan_statistics(&t, |z| BumpProfile::Triweight.value(z), &sched, c.lan_u).unwrap();
        let report = lan_diagnostic(&c, &Sequential).unwrap();
        assert_eq!(
            report.rows[0].varsigma_sq_first.to_bits(),
            full.varsigma_sq.to_bits()
        );
    }

    #[test]
    fn moments_are_near_their_limits() {
        let r = lan_diagnostic(&cfg(), &Sequential).unwrap().rows[0];
        assert!(
            (r.varsigma_sq_target - 2048.0 / 3003.0).abs() < 1e-9,
            "{r:?}"
        );
        assert!(
            (r.varsigma_sq_mean / r.varsigma_sq_target - 1.0).abs() < 0.05,
            "{r:?}"
        );
        assert!(r.eta_mean.abs() < 0.25, "{r:?}");
        assert!((r.eta_variance - 1.0).abs() < 0.25, "{r:?}");
    }
}
