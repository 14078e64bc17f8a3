use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::rng::CounterRng;

pub const DEFAULT_SIGMA_STAR: f64 = 9.0;

/// Ids of the members of [`noise_panel`], in panel order.
pub const PANEL_IDS: [&str; 4] = ["gaussian", "uniform", "laplace", "mixture"];

const SQRT3: f64 = 1.732_050_807_568_877_2;
const FRAC_1_SQRT2: f64 = core::f64::consts::FRAC_1_SQRT_2;

/// Zero-mean, unit-variance noise families.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum NoiseFamily {
    Gaussian,
    /// Uniform on `[-sqrt 3, sqrt 3]`.
    Uniform,
    /// Laplace with scale `1/sqrt 2`.
    Laplace,
    /// `weight * N(0, var_a) + (1 - weight) * N(0, var_b)`.
    GaussianMixture {
        weight: f64,
        var_a: f64,
        var_b: f64,
    },
}

impl NoiseFamily {
    /// The mixture used in the default panel: `0.8 N(0, 1/2) + 0.2 N(0, 3)`,
    /// standardized fourth moment 6.
    pub const PANEL_MIXTURE: NoiseFamily = NoiseFamily::GaussianMixture {
        weight: 0.8,
        var_a: 0.5,
        var_b: 3.0,
    };

    /// `(E xi, E xi^2, E xi^4)` in closed form.
    pub fn moments(&self) -> (f64, f64, f64) {
        match *self {
            NoiseFamily::Gaussian => (0.0, 1.0, 3.0),
            NoiseFamily::Uniform => (0.0, 1.0, 9.0 / 5.0),
            NoiseFamily::Laplace => (0.0, 1.0, 6.0),
            NoiseFamily::GaussianMixture {
                weight,
                var_a,
                var_b,
            } => (
                0.0,
                weight * var_a + (1.0 - weight) * var_b,
                3.0 * (weight * var_a * var_a + (1.0 - weight) * var_b * var_b),
            ),
        }
    }

    #[inline]
    pub fn sample(&self, rng: &mut CounterRng) -> f64 {
        match *self {
            NoiseFamily::Gaussian => StandardNormal.sample(rng),
            NoiseFamily::Uniform => (2.0 * rng.open01() - 1.0) * SQRT3,
            NoiseFamily::Laplace => {
                let u = rng.open01();
                if u < 0.5 {
                    FRAC_1_SQRT2 * libm::log(2.0 * u)
                } else {
                    -FRAC_1_SQRT2 * libm::log(2.0 * (1.0 - u))
                }
            }
            NoiseFamily::GaussianMixture {
                weight,
                var_a,
                var_b,
            } => {
                let var = if rng.open01() < weight { var_a } else { var_b };
                let z: f64 = StandardNormal.sample(rng);
                libm::sqrt(var) * z
            }
        }
    }
}

/// A noise density together with its declared moments.
///
/// The declared fields are public so that hand-built densities can be checked
/// by [`NoiseDensity::validate`]; [`NoiseDensity::new`] fills them from the
/// family's closed form.
#[derive(Clone, Debug, PartialEq)]
pub struct NoiseDensity {
    pub id: String,
    pub family: NoiseFamily,
    pub mean: f64,
    pub variance: f64,
    pub fourth_moment: f64,
    pub sigma_star: f64,
}

impl NoiseDensity {
    pub fn new(id: impl Into<String>, family: NoiseFamily, sigma_star: f64) -> Self {
        let (mean, variance, fourth_moment) = family.moments();
        Self {
            id: id.into(),
            family,
            mean,
            variance,
            fourth_moment,
            sigma_star,
        }
    }

    pub fn gaussian() -> Self {
        Self::new("gaussian", NoiseFamily::Gaussian, DEFAULT_SIGMA_STAR)
    }

    /// Looks up a panel member by id.
    pub fn from_id(id: &str, sigma_star: f64) -> Result<Self> {
        let family = match id.trim() {
            "gaussian" => NoiseFamily::Gaussian,
            "uniform" => NoiseFamily::Uniform,
            "laplace" => NoiseFamily::Laplace,
            "mixture" => NoiseFamily::PANEL_MIXTURE,
            other => {
                return Err(Error::UnknownId {
                    kind: "noise",
                    id: other.to_string(),
                })
            }
        };
        Ok(Self::new(id.trim(), family, sigma_star))
    }

    /// Checks the declared moments: mean 0, variance 1, fourth moment at most
    /// `sigma_star`, `sigma_star >= 3`, and agreement with the family.
    pub fn validate(&self) -> Result<()> {
        if !(self.sigma_star >= 3.0) {
            return Err(Error::param(
                "sigma_star",
                format!("must be >= 3 (got {})", self.sigma_star),
            ));
        }
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-12 * b.abs().max(1.0);
        if !close(self.mean, 0.0) {
            return Err(Error::param(
                "noise",
                format!("`{}` declares mean {} (must be 0)", self.id, self.mean),
            ));
        }
        if !close(self.variance, 1.0) {
            return Err(Error::param(
                "noise",
                format!(
                    "`{}` declares variance {} (must be 1)",
                    self.id, self.variance
                ),
            ));
        }
        if !(self.fourth_moment <= self.sigma_star || close(self.fourth_moment, self.sigma_star)) {
            return Err(Error::param(
                "noise",
                format!(
                    "`{}` has fourth moment {} > sigma_star = {}",
                    self.id, self.fourth_moment, self.sigma_star
                ),
            ));
        }
        let (m1, m2, m4) = self.family.moments();
        if !(close(m1, self.mean) && close(m2, self.variance) && close(m4, self.fourth_moment)) {
            return Err(Error::param(
                "noise",
                format!(
                    "`{}` declares moments ({}, {}, {}) but its family has ({m1}, {m2}, {m4})",
                    self.id, self.mean, self.variance, self.fourth_moment
                ),
            ));
        }
        Ok(())
    }

    /// Noise term `xi_step` of the trajectory seeded with `seed`.
    #[inline]
    pub fn draw(&self, seed: u64, step: u64) -> f64 {
        self.family.sample(&mut CounterRng::for_step(seed, step))
    }
}

/// The finite stand-in for the admissible noise class: standard Gaussian,
/// uniform on `[-sqrt 3, sqrt 3]`, unit-variance Laplace, and a two-component
/// Gaussian scale mixture. Requires `sigma_star >= 6` because the Laplace and
/// mixture members have fourth moment 6.
pub fn noise_panel(sigma_star: f64) -> Result<Vec<NoiseDensity>> {
    if !(sigma_star >= 3.0) {
        return Err(Error::param(
            "sigma_star",
            format!("must be >= 3 (got {sigma_star})"),
        ));
    }
    if sigma_star < 6.0 {
        return Err(Error::param(
            "sigma_star",
            format!(
                "must be >= 6 for the panel: the laplace member has standardized fourth moment 6 (got {sigma_star})"
            ),
        ));
    }
    let panel = PANEL_IDS
        .iter()
        .map(|id| NoiseDensity::from_id(id, sigma_star))
        .collect::<Result<Vec<_>>>()?;
    for p in &panel {
        p.validate()?;
    }
    Ok(panel)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn panel_at_nine() {
        let panel = noise_panel(9.0).unwrap();
        assert_eq!(panel.len(), 4);
        let uniform = panel.iter().find(|p| p.id == "uniform").unwrap();
        assert_eq!(uniform.fourth_moment, 9.0 / 5.0);
        let mix = panel.iter().find(|p| p.id == "mixture").unwrap();
        assert!((mix.fourth_moment - 6.0).abs() < 1e-12);
        assert!((mix.variance - 1.0).abs() < 1e-15);
    }

    #[test]
    fn panel_rejects_small_sigma_star() {
        let e = noise_panel(2.0).unwrap_err();
        assert!(e.to_string().contains(">= 3"), "{e}");
        let e = noise_panel(4.0).unwrap_err();
        assert!(e.to_string().contains("laplace"), "{e}");
    }

    #[test]
    fn validate_catches_bad_declarations() {
        let mut p = NoiseDensity::gaussian();
        p.variance = 2.0;
        assert!(p.validate().is_err());
        let mut p = NoiseDensity::gaussian();
        p.mean = 0.1;
        assert!(p.validate().is_err());
        let p = NoiseDensity::new("laplace", NoiseFamily::Laplace, 5.0);
        assert!(p.validate().is_err());
        let mut p = NoiseDensity::gaussian();
        p.fourth_moment = 2.0;
        assert!(p.validate().is_err(), "moment disagreeing with family");
    }

    #[test]
    fn empirical_moments_within_three_standard_errors() {
        // Standard errors use the exact higher moments of each family:
        // Var(xi^2) = m4 - 1, Var(xi^4) = m8 - m4^2.
        let eighth = |f: &NoiseFamily| match *f {
            NoiseFamily::Gaussian => 105.0,
            NoiseFamily::Uniform => 81.0 / 9.0,
            NoiseFamily::Laplace => 40320.0 / 16.0,
            NoiseFamily::GaussianMixture {
                weight,
                var_a,
                var_b,
            } => 105.0 * (weight * var_a.powi(4) + (1.0 - weight) * var_b.powi(4)),
        };
        let draws = 1_000_000u64;
        for p in noise_panel(9.0).unwrap() {
            let (mut s1, mut s2, mut s4) = (0.0, 0.0, 0.0);
            for k in 0..draws {
                let x = p.draw(0xABCD, k);
                s1 += x;
                s2 += x * x;
                s4 += x * x * x * x;
            }
            let m = draws as f64;
            let (m1, m2, m4) = (s1 / m, s2 / m, s4 / m);
            let se1 = (1.0 / m).sqrt();
            let se2 = ((p.fourth_moment - 1.0) / m).sqrt();
            let se4 = ((eighth(&p.family) - p.fourth_moment.powi(2)) / m).sqrt();
            assert!(m1.abs() < 3.0 * se1, "{} mean {m1}", p.id);
            assert!((m2 - 1.0).abs() < 3.0 * se2, "{} var {m2}", p.id);
            assert!((m4 - p.fourth_moment).abs() < 3.0 * se4, "{} m4 {m4}", p.id);
        }
    }
}
