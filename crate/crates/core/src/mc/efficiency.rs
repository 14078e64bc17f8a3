use alloc::format;
use alloc::vec::Vec;

use super::{mc_risk, Executor, ExperimentConfig, RiskReport};
use crate::error::{Error, Result};

/// `sqrt(1/pi)`, the mean absolute value of a centred normal with variance 1/2.
pub const EFFICIENCY_TARGET: f64 = 0.564_189_583_547_756_3;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EfficiencyRow {
    pub n: u64,
    /// `max_S tau(S)^(-1/2) phi_n panel_sup(S, n)`.
    pub ratio: f64,
    pub target: f64,
}

impl EfficiencyRow {
    /// `ratio / target - 1`.
    pub fn relative_gap(&self) -> f64 {
        self.ratio / self.target - 1.0
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EfficiencyReport {
    pub rows: Vec<EfficiencyRow>,
    pub risk: RiskReport,
}

/// Normalized panel risk against [`EFFICIENCY_TARGET`]. Only the indicator
/// kernel attains the constant, so other kernels are rejected.
pub fn efficiency<E: Executor>(config: &ExperimentConfig, exec: &E) -> Result<EfficiencyReport> {
    config.validate()?;
    if !config.kernel()?.is_indicator() {
        return Err(Error::param(
            "kernel_id",
            format!(
                "the efficiency constant is attained only by the indicator kernel (got `{}`)",
                config.kernel_id
            ),
        ));
    }
    let risk = mc_risk(config, exec)?;
    let rows = efficiency_from_risk(&risk)?;
    Ok(EfficiencyReport { rows, risk })
}

/// Computes the efficiency rows of an existing risk report.
pub fn efficiency_from_risk(risk: &RiskReport) -> Result<Vec<EfficiencyRow>> {
    risk.config
        .n_grid
        .iter()
        .map(|&n| {
            let mut ratio = f64::NEG_INFINITY;
            for p in risk.panel.iter().filter(|p| p.n == n) {
                if !(p.tau > 0.0) {
                    return Err(Error::param(
                        "coef_ids",
                        format!("`{}` has tau = {} at z0", p.coef_id, p.tau),
                    ));
                }
                ratio = ratio.max(p.normalized / libm::sqrt(p.tau));
            }
            Ok(EfficiencyRow {
                n,
                ratio,
                target: EFFICIENCY_TARGET,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mc::{PanelRow, Sequential};
    use alloc::vec;

    #[test]
    fn target_value() {
        assert_eq!(EFFICIENCY_TARGET, libm::sqrt(1.0 / core::f64::consts::PI));
    }

    #[test]
    fn rejects_smooth_kernels() {
        let cfg = ExperimentConfig {
            kernel_id: "epanechnikov".into(),
            replications: 2,
            ..ExperimentConfig::default()
        };
        let e = efficiency(&cfg, &Sequential).unwrap_err().to_string();
        assert!(e.starts_with("kernel_id"), "{e}");
    }

    #[test]
    fn ratio_is_max_over_coefficients() {
        let mut risk = mc_risk(
            &ExperimentConfig {
                n_grid: vec![1000],
                noise_ids: vec!["gaussian".into()],
                replications: 2,
                ..ExperimentConfig::default()
            },
            &Sequential,
        )
        .unwrap();
        risk.panel = vec![
            PanelRow {
                coef_id: "a".into(),
                n: 1000,
                panel_sup: 0.1,
                normalized: 1.0,
                tau: 0.25,
                phi: 10.0,
            },
            PanelRow {
                coef_id: "b".into(),
                n: 1000,
                panel_sup: 0.1,
                normalized: 1.5,
                tau: 1.0,
                phi: 10.0,
            },
        ];
        let rows = efficiency_from_risk(&risk).unwrap();
        assert_eq!(rows[0].ratio, 2.0);
    }
}
