use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::classes::{check_beta, check_eps, check_z0, BumpProfile};
use crate::error::{Error, Result};
use crate::estimator::{make_schedule, KernelSpec, Schedule, DEFAULT_GAMMA};
use crate::model::{CoefFunction, FixtureContext, NoiseDensity, DEFAULT_SIGMA_STAR, PANEL_IDS};

/// Parameters of a Monte Carlo experiment.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    /// Coefficient fixtures, see [`CoefFunction::from_id`].
    pub coef_ids: Vec<String>,
    /// Subset of the noise panel.
    pub noise_ids: Vec<String>,
    /// Strictly increasing sample sizes.
    pub n_grid: Vec<u64>,
    pub replications: u32,
    pub z0: f64,
    pub beta: f64,
    pub gamma: f64,
    pub kernel_id: String,
    pub root_seed: u64,
    pub y0: f64,
    pub sigma_star: f64,
    /// Stability margin for the fourth-moment bound and class checks.
    pub eps: f64,
    /// Amplitude at which `log rho_n(u)` is reported.
    pub lan_u: f64,
    /// Mollifier width for the LAN profile; `None` selects the triweight bump.
    pub lan_nu: Option<f64>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            coef_ids: vec!["const(0.5)".to_string()],
            noise_ids: PANEL_IDS.iter().map(|s| s.to_string()).collect(),
            n_grid: vec![1_000, 10_000, 100_000],
            replications: 1_000,
            z0: 0.5,
            beta: 1.0,
            gamma: DEFAULT_GAMMA,
            kernel_id: "indicator".to_string(),
            root_seed: 20_240_901,
            y0: 0.0,
            sigma_star: DEFAULT_SIGMA_STAR,
            eps: 0.5,
            lan_u: 1.0,
            lan_nu: None,
        }
    }
}

impl ExperimentConfig {
    /// Checks every field and that every id and schedule resolves, so that a
    /// run never fails part-way through.
    pub fn validate(&self) -> Result<()> {
        check_z0(self.z0)?;
        check_beta(self.beta)?;
        check_eps(self.eps)?;
        if self.coef_ids.is_empty() {
            return Err(Error::param("coef_ids", "must not be empty"));
        }
        if self.noise_ids.is_empty() {
            return Err(Error::param("noise_ids", "must not be empty"));
        }
        if self.n_grid.is_empty() {
            return Err(Error::param("n_grid", "must not be empty"));
        }
        if self.n_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::param("n_grid", "must be strictly increasing"));
        }
        if self.replications < 2 {
            return Err(Error::param(
                "replications",
                format!("must be >= 2 (got {})", self.replications),
            ));
        }
        if !self.y0.is_finite() {
            return Err(Error::param("y0", "must be finite"));
        }
        if let Some(nu) = self.lan_nu {
            if !(nu > 0.0 && nu < 0.25) {
                return Err(Error::param(
                    "lan_nu",
                    format!("must lie in (0, 0.25) (got {nu})"),
                ));
            }
        }
        self.kernel()?;
        self.noises()?;
        for &n in &self.n_grid {
            self.schedule(n)?;
            self.coefs(n)?;
        }
        Ok(())
    }

    pub fn kernel(&self) -> Result<KernelSpec> {
        KernelSpec::by_id(&self.kernel_id)
    }

    pub fn noises(&self) -> Result<Vec<NoiseDensity>> {
        self.noise_ids
            .iter()
            .map(|id| {
                let p = NoiseDensity::from_id(id, self.sigma_star)?;
                p.validate()?;
                Ok(p)
            })
            .collect()
    }

    pub fn schedule(&self, n: u64) -> Result<Schedule> {
        make_schedule(n, self.beta, self.z0, self.gamma)
    }

    /// Coefficient functions for sample size `n` (bump fixtures depend on `n`).
    pub fn coefs(&self, n: u64) -> Result<Vec<CoefFunction>> {
        let ctx = FixtureContext {
            z0: self.z0,
            beta: self.beta,
            n,
        };
        self.coef_ids
            .iter()
            .map(|id| CoefFunction::from_id(id, &ctx))
            .collect()
    }

    pub(crate) fn lan_profile(&self) -> Result<BumpProfile> {
        match self.lan_nu {
            None => Ok(BumpProfile::Triweight),
            Some(nu) => {
                Ok(crate::classes::mollified_indicator(nu, crate::quad::DEFAULT_QUAD_NODES)?.0)
            }
        }
    }
}
