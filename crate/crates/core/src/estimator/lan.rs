use alloc::format;

use super::Schedule;
use crate::error::{Error, Result};
use crate::model::Trajectory;
use crate::sum::NeumaierSum;

/// Log-likelihood-ratio statistics of the bump alternative
/// `S_u = (u / phi) V((x - z0) / h)` against the null `S = 0`, Gaussian noise.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LanStatistics {
    /// `phi^-2 sum V(u_k)^2 xi_{k-1}^2`.
    pub varsigma_sq: f64,
    /// `(varsigma phi)^-1 sum V(u_k) xi_{k-1} xi_k`.
    pub eta: f64,
    /// `u varsigma eta - u^2 varsigma^2 / 2`.
    pub log_rho: f64,
}

/// Computes [`LanStatistics`] on a trajectory simulated under `S = 0`.
///
/// Under the null `y_k = xi_k` for `k >= 1`, so the trajectory's own values
/// serve as the lagged noise, with `y_0` in the role of `xi_0`. A trajectory
/// whose values differ from its residuals was not produced by the null model
/// and is rejected, as is one labelled with a non-Gaussian panel density.
pub fn lan_statistics<V: Fn(f64) -> f64>(
    traj: &Trajectory,
    profile: V,
    sched: &Schedule,
    u: f64,
) -> Result<LanStatistics> {
    if traj.n() != sched.n {
        return Err(Error::ScheduleMismatch {
            schedule: sched.n,
            trajectory: traj.n(),
        });
    }
    let xi = traj.residuals().ok_or(Error::MissingResiduals)?;
    let y = traj.y();
    if let Some(k) = (1..y.len()).find(|&k| y[k] != xi[k - 1]) {
        return Err(Error::NotNullModel(format!(
            "trajectory `{}` has y_{k} != xi_{k}; the statistics need S = 0",
            traj.coef_id()
        )));
    }
    if matches!(traj.noise_id(), "uniform" | "laplace" | "mixture") {
        return Err(Error::NotNullModel(format!(
            "noise `{}` is not Gaussian",
            traj.noise_id()
        )));
    }
    let mut acc = LanAccumulator::default();
    for k in sched.scan_range() {
        let i = k as usize;
        acc.push(profile(sched.u(k)), y[i - 1], y[i]);
    }
    acc.finish(sched, u)
}

#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct LanAccumulator {
    energy: NeumaierSum,
    score: NeumaierSum,
}

impl LanAccumulator {
    #[inline]
    pub(crate) fn push(&mut self, v: f64, xi_prev: f64, xi: f64) {
        if v == 0.0 {
            return;
        }
        self.energy += v * v * xi_prev * xi_prev;
        self.score += v * xi_prev * xi;
    }

    pub(crate) fn finish(&self, sched: &Schedule, u: f64) -> Result<LanStatistics> {
        let varsigma_sq = self.energy.value() / (sched.phi * sched.phi);
        if !(varsigma_sq > 0.0) {
            return Err(Error::Degenerate(format!(
                "varsigma^2 = {varsigma_sq}; eta is undefined"
            )));
        }
        let varsigma = libm::sqrt(varsigma_sq);
        let eta = self.score.value() / (varsigma * sched.phi);
        Ok(LanStatistics {
            varsigma_sq,
            eta,
            log_rho: u * varsigma * eta - u * u * varsigma_sq / 2.0,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classes::BumpProfile;
    use crate::estimator::make_schedule;
    use crate::model::{simulate, CoefFunction, NoiseDensity, NoiseFamily};

    #[test]
    fn null_amplitude_gives_unit_ratio() {
        let t = simulate(
            &CoefFunction::zero(),
            &NoiseDensity::gaussian(),
            5000,
            0.0,
            1,
        )
        .unwrap();
        let s = make_schedule(5000, 1.0, 0.5, 0.25).unwrap();
        let v = BumpProfile::Triweight;
        let r = lan_statistics(&t, |z| v.value(z), &s, 0.0).unwrap();
        assert_eq!(r.log_rho, 0.0);
        assert!(r.varsigma_sq > 0.0);
        let r1 = lan_statistics(&t, |z| v.value(z), &s, 1.5).unwrap();
        let expected = 1.5 * r1.varsigma_sq.sqrt() * r1.eta - 1.125 * r1.varsigma_sq;
        assert!((r1.log_rho - expected).abs() < 1e-14);
    }

    #[test]
    fn log_rho_is_the_gaussian_log_likelihood_ratio() {
        // Direct route: sum over k of log p0(y_k - S_u(x_k) y_{k-1}) - log p0(y_k).
        let n = 4000;
        let t = simulate(&CoefFunction::zero(), &NoiseDensity::gaussian(), n, 0.0, 17).unwrap();
        let s = make_schedule(n, 1.5, 0.4, 0.25).unwrap();
        let v = BumpProfile::Triweight;
        let u = 0.8;
        let r = lan_statistics(&t, |z| v.value(z), &s, u).unwrap();
        let y = t.y();
        let mut llr = 0.0;
        for k in 1..=n as usize {
            let su = u / s.phi * v.value(s.u(k as u64));
            let e = y[k] - su * y[k - 1];
            llr += -0.5 * e * e + 0.5 * y[k] * y[k];
        }
        assert!((r.log_rho - llr).abs() < 1e-10, "{} vs {llr}", r.log_rho);
    }

    #[test]
    fn rejects_non_null_input() {
        let s = make_schedule(1000, 1.0, 0.5, 0.25).unwrap();
        let v = |z: f64| BumpProfile::Triweight.value(z);
        let t = simulate(
            &CoefFunction::constant(0.2),
            &NoiseDensity::gaussian(),
            1000,
            0.0,
            1,
        )
        .unwrap();
        assert!(matches!(
            lan_statistics(&t, v, &s, 1.0),
            Err(Error::NotNullModel(_))
        ));
        let lap = NoiseDensity::new("laplace", NoiseFamily::Laplace, 9.0);
        let t = simulate(&CoefFunction::zero(), &lap, 1000, 0.0, 1).unwrap();
        assert!(matches!(
            lan_statistics(&t, v, &s, 1.0),
            Err(Error::NotNullModel(_))
        ));
        let t = simulate(
            &CoefFunction::zero(),
            &NoiseDensity::gaussian(),
            1000,
            0.0,
            1,
        )
        .unwrap();
        assert!(matches!(
            lan_statistics(&t, |_| 0.0, &s, 1.0),
            Err(Error::Degenerate(_))
        ));
    }
}
