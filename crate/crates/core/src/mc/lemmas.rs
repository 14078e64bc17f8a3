use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use super::stats::mean;
use super::{Cell, Executor, ExperimentConfig};
use crate::classes::{tau, BumpProfile};
use crate::error::Result;
use crate::estimator::Accumulator;
use crate::model::fourth_moment_bound;
use crate::sum::NeumaierSum;

/// Replications per chunk of the per-step fourth-moment reduction. Fixed so
/// that the summation order does not depend on the executor.
const CHUNK: usize = 256;

/// `integral (1 - z^2)^3 dz` over `[-1, 1]`.
const TRIWEIGHT_MASS: f64 = 32.0 / 35.0;

/// Empirical checks of the moment, concentration and threshold bounds for
/// one `(coef, noise, n)` cell.
#[derive(Clone, Debug, PartialEq)]
pub struct LemmaRow {
    pub coef_id: String,
    pub noise_id: String,
    pub n: u64,
    /// `max_k` of the sample mean of `y_k^4` over replications.
    pub max_fourth: f64,
    /// `8 y0^4 + 8 sigma* / eps^4`.
    pub fourth_bound: f64,
    /// Sample mean of `rho_n(f, S)^2 / (R h)^2` with `f` the triweight and
    /// `R = sup|f| + sup|f'|`, where
    /// `rho_n(f, S) = phi^-2 sum f(u_k) y_{k-1}^2 - integral f / tau(S)`.
    pub rho_scaled: f64,
    /// Share of replications with `A_n < d`, divided by `h^2`.
    pub threshold_scaled: f64,
    /// Sample mean of `A_hat^4`.
    pub a_hat_fourth: f64,
    pub kept_fraction: f64,
    pub h: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LemmaReport {
    pub config: ExperimentConfig,
    pub rows: Vec<LemmaRow>,
}

struct Chunk {
    fourth: Vec<f64>,
    rho_sq: Vec<f64>,
    kept: Vec<bool>,
    a_hat_fourth: Vec<f64>,
}

/// Runs the full-length simulations of every cell of `config`.
pub fn lemma_checks<E: Executor>(config: &ExperimentConfig, exec: &E) -> Result<LemmaReport> {
    config.validate()?;
    let kernel = config.kernel()?;
    let noises = config.noises()?;
    let bound = fourth_moment_bound(config.eps, config.sigma_star, config.y0)?;
    let f = BumpProfile::Triweight;
    let r = f.sup() + f.deriv_sup();
    let reps = config.replications as usize;
    let chunks = reps.div_ceil(CHUNK);

    let mut rows = Vec::new();
    for ci in 0..config.coef_ids.len() {
        for noise in &noises {
            for &n in &config.n_grid {
                let sched = config.schedule(n)?;
                let coefs = config.coefs(n)?;
                let coef = &coefs[ci];
                let cell =
                    Cell::with_horizon(coef, noise, &kernel, sched, config.y0, config.root_seed, n);
                let limit = TRIWEIGHT_MASS / tau(coef, sched.z0);
                let phi_sq = sched.phi * sched.phi;
                let f_at: Vec<f64> = sched.scan_range().map(|k| f.value(sched.u(k))).collect();
                let start = *sched.scan_range().start();

                let parts = exec.map_indexed(chunks, |c| {
                    let mut out = Chunk {
                        fourth: vec![0.0; n as usize],
                        rho_sq: Vec::new(),
                        kept: Vec::new(),
                        a_hat_fourth: Vec::new(),
                    };
                    for rep in (c * CHUNK)..((c + 1) * CHUNK).min(reps) {
                        let mut acc = Accumulator::default();
                        let mut energy = NeumaierSum::new();
                        cell.walk(rep as u64, |k, prev, y, _, _| {
                            let y2 = y * y;
                            out.fourth[k as usize - 1] += y2 * y2;
                            if k >= start {
                                acc.push(cell.weight(k), prev, y);
                                if let Some(&w) = f_at.get((k - start) as usize) {
                                    energy += w * prev * prev;
                                }
                            }
                        });
                        let est = acc.finish(&sched, false);
                        let rho = energy.value() / phi_sq - limit;
                        out.rho_sq.push(rho * rho / (r * r * sched.h * sched.h));
                        out.kept.push(est.indicator);
                        let a2 = est.a_hat * est.a_hat;
                        out.a_hat_fourth.push(a2 * a2);
                    }
                    out
                });

                let mut fourth = vec![0.0; n as usize];
                let (mut rho_sq, mut kept, mut a4) = (Vec::new(), Vec::new(), Vec::new());
                for p in parts {
                    for (acc, v) in fourth.iter_mut().zip(&p.fourth) {
                        *acc += v;
                    }
                    rho_sq.extend(p.rho_sq);
                    kept.extend(p.kept);
                    a4.extend(p.a_hat_fourth);
                }
                let max_fourth = fourth.iter().map(|s| s / reps as f64).fold(0.0, f64::max);
                let kept_fraction = kept.iter().filter(|&&b| b).count() as f64 / reps as f64;
                rows.push(LemmaRow {
                    coef_id: coef.id().to_string(),
                    noise_id: noise.id.clone(),
                    n,
                    max_fourth,
                    fourth_bound: bound,
                    rho_scaled: mean(&rho_sq),
                    threshold_scaled: (1.0 - kept_fraction) / (sched.h * sched.h),
                    a_hat_fourth: mean(&a4),
                    kept_fraction,
                    h: sched.h,
                });
            }
        }
    }
    Ok(LemmaReport {
        config: config.clone(),
        rows,
    })
}
