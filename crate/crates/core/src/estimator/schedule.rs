use alloc::format;
use core::ops::RangeInclusive;

use crate::classes::{bandwidth, check_beta, check_z0, rate};
use crate::error::{Error, Result};
use crate::model::design_point;

/// Default exponent in `kappa_n = h^gamma`.
pub const DEFAULT_GAMMA: f64 = 0.25;

/// `beta / (2 beta + 1)`: the exponent of the minimax rate `phi_n`.
pub fn rate_exponent(beta: f64) -> f64 {
    beta / (2.0 * beta + 1.0)
}

/// Bandwidth, rate and truncation threshold for one `(n, beta, z0)`.
///
/// * `h = n^(-1/(2 beta + 1))`, `phi = n^(beta/(2 beta + 1))`, so `phi^2 = n h`;
/// * `kappa = h^gamma` with `0 < gamma < 1/2`, so that `kappa -> 0` and
///   `h / kappa^2 = h^(1 - 2 gamma) -> 0`;
/// * `d = kappa n h` is the threshold on `A_n`;
/// * `k_lo = floor(n z0 - n h) + 1`, `k_hi = floor(n z0 + n h)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Schedule {
    pub n: u64,
    pub beta: f64,
    pub z0: f64,
    pub gamma: f64,
    pub h: f64,
    pub phi: f64,
    pub kappa: f64,
    pub d: f64,
    pub k_lo: u64,
    pub k_hi: u64,
}

/// Schedule with the rate-optimal bandwidth for smoothness `beta`.
pub fn make_schedule(n: u64, beta: f64, z0: f64, gamma: f64) -> Result<Schedule> {
    if n == 0 {
        return Err(Error::param("n", "must be >= 1 (got 0)"));
    }
    check_beta(beta)?;
    check_z0(z0)?;
    if !(gamma > 0.0 && gamma < 0.5) {
        return Err(Error::param(
            "gamma",
            format!("must lie in (0, 0.5) so that kappa -> 0 and h / kappa^2 -> 0 (got {gamma})"),
        ));
    }
    let h = bandwidth(n, beta);
    if !(z0 - h > 0.0 && z0 + h < 1.0) {
        return Err(Error::param(
            "z0",
            format!(
                "estimation window [{}, {}] must lie inside (0, 1) for n = {n}",
                z0 - h,
                z0 + h
            ),
        ));
    }
    let phi = rate(n, beta);
    let kappa = libm::pow(h, gamma);
    Ok(Schedule::assemble(n, beta, z0, gamma, h, phi, kappa))
}

impl Schedule {
    /// Schedule with an explicit bandwidth: `phi = sqrt(n h)`, `d = kappa n h`.
    /// `beta` and `gamma` are recorded as NaN.
    pub fn from_bandwidth(n: u64, z0: f64, h: f64, kappa: f64) -> Result<Schedule> {
        if n == 0 {
            return Err(Error::param("n", "must be >= 1 (got 0)"));
        }
        if !(h > 0.0) {
            return Err(Error::param("h", format!("must be > 0 (got {h})")));
        }
        if !(kappa > 0.0) {
            return Err(Error::param("kappa", format!("must be > 0 (got {kappa})")));
        }
        let phi = libm::sqrt(n as f64 * h);
        Ok(Schedule::assemble(n, f64::NAN, z0, f64::NAN, h, phi, kappa))
    }

    fn assemble(n: u64, beta: f64, z0: f64, gamma: f64, h: f64, phi: f64, kappa: f64) -> Schedule {
        let nf = n as f64;
        let lo = libm::floor(nf * z0 - nf * h);
        let hi = libm::floor(nf * z0 + nf * h);
        Schedule {
            n,
            beta,
            z0,
            gamma,
            h,
            phi,
            kappa,
            d: kappa * nf * h,
            k_lo: (lo + 1.0).max(0.0) as u64,
            k_hi: hi.max(0.0) as u64,
        }
    }

    /// Scaled distance `u_k = (x_k - z0) / h`.
    #[inline]
    pub fn u(&self, k: u64) -> f64 {
        (design_point(k, self.n) - self.z0) / self.h
    }

    /// Steps `k` (clamped to `1..=n`) whose `u_k` can fall in `[-1, 1]`. This is
    /// `k_lo..=k_hi` widened by one on each side so that a design point lying
    /// exactly on the window edge is never dropped; terms outside `[-1, 1]`
    /// have zero kernel weight, so summing over this range equals summing over
    /// `1..=n`.
    pub fn scan_range(&self) -> RangeInclusive<u64> {
        let lo = self.k_lo.saturating_sub(1).max(1);
        let hi = (self.k_hi + 1).min(self.n);
        lo..=hi
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn n1024_beta1() {
        let s = make_schedule(1024, 1.0, 0.5, 0.25).unwrap();
        // Independent route: 1024 = 2^10, so h = 2^(-10/3) and phi = 2^(10/3).
        let h = (-10.0f64 / 3.0 * core::f64::consts::LN_2).exp();
        assert!((s.h - h).abs() < 1e-15);
        assert!((s.h - 0.099_212_565_748_012_47).abs() < 1e-12);
        assert!((s.phi - 10.079_368_399_158_986).abs() < 1e-11);
        assert!((s.phi * s.phi - 101.593_667_325_964_77).abs() < 1e-9);
        assert!((s.kappa - 0.561_231_024_154_686_5).abs() < 1e-12);
        assert!((s.d - 57.017_517_960_981_72).abs() < 1e-9);
        assert!((s.phi * s.phi / (1024.0 * s.h) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn window_indices() {
        let s = make_schedule(1024, 1.0, 0.5, 0.25).unwrap();
        // n z0 = 512, n h = 101.5937...
        assert_eq!(s.k_lo, 411);
        assert_eq!(s.k_hi, 613);
        assert!(s.u(s.k_lo) >= -1.0 && s.u(s.k_lo - 1) < -1.0);
        assert!(s.u(s.k_hi) <= 1.0 && s.u(s.k_hi + 1) > 1.0);
        assert_eq!(s.scan_range(), 410..=614);
    }

    #[test]
    fn rate_exponents() {
        assert!((rate_exponent(1.0) - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(rate_exponent(1.5), 0.375);
    }

    #[test]
    fn rejections() {
        assert!(make_schedule(1000, 2.0, 0.5, 0.25).is_err());
        assert!(make_schedule(1000, 0.9, 0.5, 0.25).is_err());
        assert!(make_schedule(1000, 1.0, 0.5, 0.5).is_err());
        assert!(make_schedule(1000, 1.0, 0.5, 0.0).is_err());
        // h = 0.1: window touches 0 at z0 = 0.1.
        assert!(make_schedule(1000, 1.0, 0.1, 0.25).is_err());
        assert!(make_schedule(1000, 1.0, 0.11, 0.25).is_ok());
        assert!(make_schedule(0, 1.0, 0.5, 0.25).is_err());
        let e = make_schedule(1000, 1.0, 0.5, 0.7).unwrap_err();
        assert!(e.to_string().contains("gamma"), "{e}");
    }

    #[test]
    fn threshold_asymptotics() {
        let mut prev: Option<Schedule> = None;
        for p in 3..=7 {
            let s = make_schedule(10u64.pow(p), 1.25, 0.5, DEFAULT_GAMMA).unwrap();
            if let Some(q) = prev {
                assert!(s.kappa < q.kappa);
                assert!(s.h / (s.kappa * s.kappa) < q.h / (q.kappa * q.kappa));
            }
            assert!((s.h / (s.kappa * s.kappa) - s.h.powf(0.5)).abs() < 1e-12);
            prev = Some(s);
        }
    }

    proptest! {
        #[test]
        fn phi_squared_is_n_h(exp in 2.0f64..7.0, beta in 1.0f64..1.999, gamma in 0.01f64..0.49) {
            let n = 10f64.powf(exp).round() as u64;
            if let Ok(s) = make_schedule(n, beta, 0.5, gamma) {
                prop_assert!((s.phi * s.phi / (n as f64 * s.h) - 1.0).abs() < 1e-12);
                prop_assert!(s.k_lo <= s.k_hi + 1);
                prop_assert!((s.d - s.kappa * s.phi * s.phi).abs() <= 1e-12 * s.d);
            }
        }
    }
}
