use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::{ar_step, CoefFunction, NoiseDensity};
use crate::error::{Error, Result};

/// Design point `x_k = k / n`.
#[inline]
pub fn design_point(k: u64, n: u64) -> f64 {
    k as f64 / n as f64
}

/// A realized path `y_0, ..., y_n` with (optionally) the noise terms that
/// produced it.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    n: u64,
    y: Vec<f64>,
    residuals: Option<Vec<f64>>,
    seed: u64,
    coef_id: String,
    noise_id: String,
}

impl Trajectory {
    /// Assembles a trajectory from observed values; `residuals`, when given,
    /// must hold `xi_1, ..., xi_n`.
    pub fn from_parts(
        y: Vec<f64>,
        residuals: Option<Vec<f64>>,
        seed: u64,
        coef_id: impl Into<String>,
        noise_id: impl Into<String>,
    ) -> Result<Self> {
        if y.len() < 2 {
            return Err(Error::param(
                "trajectory",
                format!("needs y_0 and at least one step (got {} values)", y.len()),
            ));
        }
        let n = (y.len() - 1) as u64;
        if let Some(r) = &residuals {
            if r.len() as u64 != n {
                return Err(Error::param(
                    "trajectory",
                    format!("{} residuals for n = {n}", r.len()),
                ));
            }
        }
        Ok(Self {
            n,
            y,
            residuals,
            seed,
            coef_id: coef_id.into(),
            noise_id: noise_id.into(),
        })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn y0(&self) -> f64 {
        self.y[0]
    }

    /// `y_0, ..., y_n`.
    pub fn y(&self) -> &[f64] {
        &self.y
    }

    /// `xi_1, ..., xi_n` (index `k - 1` holds `xi_k`).
    pub fn residuals(&self) -> Option<&[f64]> {
        self.residuals.as_deref()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn coef_id(&self) -> &str {
        &self.coef_id
    }

    pub fn noise_id(&self) -> &str {
        &self.noise_id
    }

    #[inline]
    pub fn x(&self, k: u64) -> f64 {
        design_point(k, self.n)
    }

    /// Largest relative discrepancy `|y_k - (S(x_k) y_{k-1} + xi_k)| / max(1, |y_k|)`
    /// when the recursion is replayed from the stored residuals.
    pub fn replay_error(&self, coef: &CoefFunction) -> Result<f64> {
        let xi = self.residuals().ok_or(Error::MissingResiduals)?;
        let mut worst = 0.0f64;
        for k in 1..=self.n {
            let i = k as usize;
            let replay = coef.eval(self.x(k)) * self.y[i - 1] + xi[i - 1];
            worst = worst.max((self.y[i] - replay).abs() / self.y[i].abs().max(1.0));
        }
        Ok(worst)
    }
}

/// Simulates `n` steps of the autoregression. Noise term `xi_k` is drawn from
/// the counter stream `(seed, k)`, so the output is a pure function of the
/// arguments and any prefix can be regenerated independently.
pub fn simulate(
    coef: &CoefFunction,
    noise: &NoiseDensity,
    n: u64,
    y0: f64,
    seed: u64,
) -> Result<Trajectory> {
    if n == 0 {
        return Err(Error::param("n", "must be >= 1 (got 0)"));
    }
    noise.validate()?;
    let len = n as usize;
    let mut y = Vec::with_capacity(len + 1);
    let mut residuals = Vec::with_capacity(len);
    y.push(y0);
    let mut prev = y0;
    for k in 1..=n {
        let xi = noise.draw(seed, k);
        let next = ar_step(coef.eval(design_point(k, n)), prev, xi);
        residuals.push(xi);
        y.push(next);
        prev = next;
    }
    Ok(Trajectory {
        n,
        y,
        residuals: Some(residuals),
        seed,
        coef_id: coef.id().to_string(),
        noise_id: noise.id.clone(),
    })
}

/// Runs the recursion on caller-supplied noise terms `xi_1, ..., xi_n`.
pub fn simulate_with_residuals(
    coef: &CoefFunction,
    y0: f64,
    residuals: &[f64],
) -> Result<Trajectory> {
    if residuals.is_empty() {
        return Err(Error::param("n", "must be >= 1 (got 0)"));
    }
    let n = residuals.len() as u64;
    let mut y = Vec::with_capacity(residuals.len() + 1);
    y.push(y0);
    let mut prev = y0;
    for (i, &xi) in residuals.iter().enumerate() {
        prev = ar_step(coef.eval(design_point(i as u64 + 1, n)), prev, xi);
        y.push(prev);
    }
    Ok(Trajectory {
        n,
        y,
        residuals: Some(residuals.to_vec()),
        seed: 0,
        coef_id: coef.id().to_string(),
        noise_id: "injected".to_string(),
    })
}

/// Uniform bound `8 y0^4 + 8 sigma_star / eps^4` on `E y_k^4` over the
/// stability set with margin `eps`.
pub fn fourth_moment_bound(eps: f64, sigma_star: f64, y0: f64) -> Result<f64> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::param(
            "eps",
            format!("must lie in (0, 1) (got {eps})"),
        ));
    }
    let y2 = y0 * y0;
    let e2 = eps * eps;
    Ok(8.0 * y2 * y2 + 8.0 * sigma_star / (e2 * e2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::noise_panel;

    #[test]
    fn hand_recursion() {
        let t =
            simulate_with_residuals(&CoefFunction::constant(0.5), 0.0, &[1.0, -1.0, 2.0]).unwrap();
        assert_eq!(t.y(), &[0.0, 1.0, -0.5, 1.75]);
    }

    #[test]
    fn zero_coefficient_passes_noise_through() {
        for p in noise_panel(9.0).unwrap() {
            let t = simulate(&CoefFunction::zero(), &p, 500, 3.0, 11).unwrap();
            assert_eq!(&t.y()[1..], t.residuals().unwrap());
        }
    }

    #[test]
    fn deterministic_and_seed_sensitive() {
        let s = CoefFunction::constant(0.3);
        let p = NoiseDensity::gaussian();
        let a = simulate(&s, &p, 1000, 0.0, 5).unwrap();
        let b = simulate(&s, &p, 1000, 0.0, 5).unwrap();
        let c = simulate(&s, &p, 1000, 0.0, 6).unwrap();
        assert!(a
            .y()
            .iter()
            .zip(b.y())
            .all(|(u, v)| u.to_bits() == v.to_bits()));
        assert_ne!(a.y(), c.y());
    }

    #[test]
    fn rejects_bad_inputs() {
        let s = CoefFunction::zero();
        assert!(simulate(&s, &NoiseDensity::gaussian(), 0, 0.0, 1).is_err());
        let mut p = NoiseDensity::gaussian();
        p.variance = 0.5;
        assert!(simulate(&s, &p, 10, 0.0, 1).is_err());
        assert!(Trajectory::from_parts(vec![0.0, 1.0], Some(vec![]), 0, "a", "b").is_err());
        assert!(Trajectory::from_parts(vec![0.0], None, 0, "a", "b").is_err());
    }

    #[test]
    fn moment_bound_formula() {
        assert_eq!(fourth_moment_bound(0.5, 9.0, 0.0).unwrap(), 1152.0);
        assert_eq!(fourth_moment_bound(0.5, 9.0, 1.0).unwrap(), 1160.0);
        let near_one = fourth_moment_bound(1.0 - 1e-12, 3.0, 0.0).unwrap();
        assert!((near_one - 24.0).abs() < 1e-9);
        assert!(fourth_moment_bound(1.0, 9.0, 0.0).is_err());
        assert!(fourth_moment_bound(0.0, 9.0, 0.0).is_err());
    }
}
