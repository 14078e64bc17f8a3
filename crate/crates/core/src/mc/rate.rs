use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::RiskReport;
use crate::error::{Error, Result};
use crate::estimator::rate_exponent;
use crate::sum::NeumaierSum;

/// Least-squares fit of `log risk = intercept + slope * log n`.
#[derive(Clone, Debug, PartialEq)]
pub struct RateFit {
    pub coef_id: String,
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    /// `-beta / (2 beta + 1)`.
    pub expected_slope: f64,
}

/// Ordinary least squares on `(ln x, ln y)`; returns `(slope, intercept, r^2)`.
pub fn fit_power_law(xs: &[f64], ys: &[f64]) -> Result<(f64, f64, f64)> {
    if xs.len() != ys.len() {
        return Err(Error::param(
            "ys",
            format!("length {} != {}", ys.len(), xs.len()),
        ));
    }
    if xs.len() < 4 {
        return Err(Error::InsufficientPoints {
            needed: 4,
            got: xs.len(),
        });
    }
    if xs.iter().chain(ys).any(|v| !(*v > 0.0 && v.is_finite())) {
        return Err(Error::param(
            "xs",
            "every point must be finite and positive",
        ));
    }
    let lx: Vec<f64> = xs.iter().map(|&x| libm::log(x)).collect();
    let ly: Vec<f64> = ys.iter().map(|&y| libm::log(y)).collect();
    let k = lx.len() as f64;
    let mx = lx.iter().copied().collect::<NeumaierSum>().value() / k;
    let my = ly.iter().copied().collect::<NeumaierSum>().value() / k;
    let mut sxx = NeumaierSum::new();
    let mut sxy = NeumaierSum::new();
    let mut syy = NeumaierSum::new();
    for (x, y) in lx.iter().zip(&ly) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    if sxx.value() == 0.0 {
        return Err(Error::Degenerate("all x values coincide".to_string()));
    }
    let slope = sxy.value() / sxx.value();
    let intercept = my - slope * mx;
    let r2 = if syy.value() == 0.0 {
        1.0
    } else {
        sxy.value() * sxy.value() / (sxx.value() * syy.value())
    };
    Ok((slope, intercept, r2))
}

/// Fits the panel risk of `coef_id` against `n`.
pub fn rate_fit(report: &RiskReport, coef_id: &str) -> Result<RateFit> {
    let rows: Vec<_> = report
        .panel
        .iter()
        .filter(|p| p.coef_id == coef_id)
        .collect();
    if rows.is_empty() {
        return Err(Error::UnknownId {
            kind: "coefficient",
            id: coef_id.to_string(),
        });
    }
    let ns: Vec<f64> = rows.iter().map(|p| p.n as f64).collect();
    let risks: Vec<f64> = rows.iter().map(|p| p.panel_sup).collect();
    let (slope, intercept, r_squared) = fit_power_law(&ns, &risks)?;
    Ok(RateFit {
        coef_id: coef_id.to_string(),
        slope,
        intercept,
        r_squared,
        expected_slope: -rate_exponent(report.config.beta),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_law_is_recovered() {
        let xs = [1e2, 1e3, 1e4, 1e5, 1e6];
        let ys: Vec<f64> = xs.iter().map(|&x| 3.0 * libm::pow(x, -0.375)).collect();
        let (s, c, r2) = fit_power_law(&xs, &ys).unwrap();
        assert!((s + 0.375).abs() < 1e-12);
        assert!((c - libm::log(3.0)).abs() < 1e-10);
        assert!((r2 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn hand_fit() {
        // ln y = [0, 1, 1, 2] against ln x = [0, 1, 2, 3]: slope 0.6, intercept 0.1, r^2 = 0.9.
        let e = core::f64::consts::E;
        let xs = [1.0, e, e * e, e * e * e];
        let ys = [1.0, e, e, e * e];
        let (s, c, r2) = fit_power_law(&xs, &ys).unwrap();
        assert!((s - 0.6).abs() < 1e-12);
        assert!((c - 0.1).abs() < 1e-12);
        assert!((r2 - 0.9).abs() < 1e-12);
    }

    #[test]
    fn too_few_points() {
        let e = fit_power_law(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]).unwrap_err();
        assert_eq!(e, Error::InsufficientPoints { needed: 4, got: 3 });
        assert!(fit_power_law(&[1.0, 2.0, 3.0, 4.0], &[1.0, 0.0, 3.0, 4.0]).is_err());
    }
}
