//! CSV readers and writers. Floats are written in scientific notation with 17
//! significant digits, which round-trips every `f64`.

use std::io::{Read, Write};

use tvar_core::estimator::{EstimateResult, Schedule};
use tvar_core::mc::{CltReport, EfficiencyRow, LanReport, LemmaReport, RateFit, RiskReport};
use tvar_core::Trajectory;

use crate::{Error, Result};

pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn writer<W: Write>(w: W, header: &[&str]) -> Result<csv::Writer<W>> {
    let mut out = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(w);
    out.write_record(header)?;
    Ok(out)
}

/// `k,x,y,xi` with `k = 0..=n`; `xi` is empty at `k = 0` and when the
/// trajectory carries no residuals.
pub fn write_trajectory<W: Write>(w: W, t: &Trajectory) -> Result<()> {
    let mut out = writer(w, &["k", "x", "y", "xi"])?;
    let xi = t.residuals();
    for (k, &y) in t.y().iter().enumerate() {
        let e = match (k, xi) {
            (1.., Some(r)) => fmt_f64(r[k - 1]),
            _ => String::new(),
        };
        out.write_record([k.to_string(), fmt_f64(t.x(k as u64)), fmt_f64(y), e])?;
    }
    out.flush().map_err(Error::io("trajectory"))?;
    Ok(())
}

/// Reads the format of [`write_trajectory`]. Residuals are kept only when
/// every row `k >= 1` has one.
pub fn read_trajectory<R: Read>(r: R) -> Result<Trajectory> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(r);
    let header = rdr.headers()?.clone();
    if header.iter().collect::<Vec<_>>() != ["k", "x", "y", "xi"] {
        return Err(Error::invalid(format!(
            "trajectory: expected header `k,x,y,xi` (got `{}`)",
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut y = Vec::new();
    let mut xi = Vec::new();
    let mut complete = true;
    for (row, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let line = row + 2;
        let k: usize = rec[0]
            .parse()
            .map_err(|_| Error::invalid(format!("trajectory line {line}: bad k `{}`", &rec[0])))?;
        if k != row {
            return Err(Error::invalid(format!(
                "trajectory line {line}: expected k = {row} (got {k})"
            )));
        }
        y.push(parse_float(&rec[2], "y", line)?);
        match (k, &rec[3]) {
            (0, "") => {}
            (0, _) => {
                return Err(Error::invalid(format!(
                    "trajectory line {line}: xi must be empty at k = 0"
                )))
            }
            (_, "") => complete = false,
            (_, v) => xi.push(parse_float(v, "xi", line)?),
        }
    }
    let residuals = (complete && !xi.is_empty()).then_some(xi);
    Trajectory::from_parts(y, residuals, 0, "file", "file").map_err(Error::invalid)
}

fn parse_float(s: &str, col: &str, line: usize) -> Result<f64> {
    s.parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| Error::invalid(format!("trajectory line {line}: bad {col} `{s}`")))
}

pub fn write_estimate<W: Write>(w: W, e: &EstimateResult, s: &Schedule) -> Result<()> {
    let mut out = writer(w, &["value", "A_n", "indicator", "h", "phi", "kappa", "d"])?;
    out.write_record([
        fmt_f64(e.value),
        fmt_f64(e.a_n),
        e.indicator.to_string(),
        fmt_f64(s.h),
        fmt_f64(s.phi),
        fmt_f64(s.kappa),
        fmt_f64(s.d),
    ])?;
    out.flush().map_err(Error::io("estimate"))?;
    Ok(())
}

pub fn write_risk<W: Write>(w: W, r: &RiskReport) -> Result<()> {
    let mut out = writer(
        w,
        &[
            "coef_id",
            "noise_id",
            "n",
            "mean_abs_err",
            "normalized",
            "ci_half",
            "kept_fraction",
        ],
    )?;
    for row in &r.rows {
        out.write_record([
            row.coef_id.clone(),
            row.noise_id.clone(),
            row.n.to_string(),
            fmt_f64(row.mean_abs_err),
            fmt_f64(row.normalized),
            fmt_f64(row.ci_half),
            fmt_f64(row.kept_fraction),
        ])?;
    }
    out.flush().map_err(Error::io("risk"))?;
    Ok(())
}

/// Panel maximum per `(coef_id, n)`.
pub fn write_panel<W: Write>(w: W, r: &RiskReport) -> Result<()> {
    let mut out = writer(
        w,
        &["coef_id", "n", "panel_sup", "normalized", "tau", "phi"],
    )?;
    for p in &r.panel {
        out.write_record([
            p.coef_id.clone(),
            p.n.to_string(),
            fmt_f64(p.panel_sup),
            fmt_f64(p.normalized),
            fmt_f64(p.tau),
            fmt_f64(p.phi),
        ])?;
    }
    out.flush().map_err(Error::io("panel"))?;
    Ok(())
}

pub fn write_rate<W: Write>(w: W, fits: &[RateFit]) -> Result<()> {
    let mut out = writer(w, &["coef_id", "slope", "intercept", "r_squared"])?;
    for f in fits {
        out.write_record([
            f.coef_id.clone(),
            fmt_f64(f.slope),
            fmt_f64(f.intercept),
            fmt_f64(f.r_squared),
        ])?;
    }
    out.flush().map_err(Error::io("rate"))?;
    Ok(())
}

pub fn write_efficiency<W: Write>(w: W, rows: &[EfficiencyRow]) -> Result<()> {
    let mut out = writer(w, &["n", "ratio", "target"])?;
    for r in rows {
        out.write_record([r.n.to_string(), fmt_f64(r.ratio), fmt_f64(r.target)])?;
    }
    out.flush().map_err(Error::io("efficiency"))?;
    Ok(())
}

pub fn write_clt<W: Write>(w: W, r: &CltReport) -> Result<()> {
    let mut out = writer(
        w,
        &[
            "coef_id",
            "noise_id",
            "n",
            "mean",
            "variance",
            "std_error",
            "ks",
        ],
    )?;
    for row in &r.rows {
        out.write_record([
            row.coef_id.clone(),
            row.noise_id.clone(),
            row.n.to_string(),
            fmt_f64(row.mean),
            fmt_f64(row.variance),
            fmt_f64(row.std_error),
            fmt_f64(row.ks),
        ])?;
    }
    out.flush().map_err(Error::io("clt"))?;
    Ok(())
}

pub fn write_lemmas<W: Write>(w: W, r: &LemmaReport) -> Result<()> {
    let mut out = writer(
        w,
        &[
            "coef_id",
            "noise_id",
            "n",
            "max_fourth",
            "fourth_bound",
            "rho_scaled",
            "threshold_scaled",
            "a_hat_fourth",
            "kept_fraction",
            "h",
        ],
    )?;
    for row in &r.rows {
        out.write_record([
            row.coef_id.clone(),
            row.noise_id.clone(),
            row.n.to_string(),
            fmt_f64(row.max_fourth),
            fmt_f64(row.fourth_bound),
            fmt_f64(row.rho_scaled),
            fmt_f64(row.threshold_scaled),
            fmt_f64(row.a_hat_fourth),
            fmt_f64(row.kept_fraction),
            fmt_f64(row.h),
        ])?;
    }
    out.flush().map_err(Error::io("lemmas"))?;
    Ok(())
}

pub fn write_lan<W: Write>(w: W, r: &LanReport) -> Result<()> {
    let mut out = writer(
        w,
        &[
            "n",
            "varsigma_sq_first",
            "varsigma_sq_mean",
            "varsigma_sq_target",
            "eta_mean",
            "eta_variance",
            "log_rho_mean",
            "log_rho_target",
        ],
    )?;
    for row in &r.rows {
        out.write_record([
            row.n.to_string(),
            fmt_f64(row.varsigma_sq_first),
            fmt_f64(row.varsigma_sq_mean),
            fmt_f64(row.varsigma_sq_target),
            fmt_f64(row.eta_mean),
            fmt_f64(row.eta_variance),
            fmt_f64(row.log_rho_mean),
            fmt_f64(row.log_rho_target),
        ])?;
    }
    out.flush().map_err(Error::io("lan"))?;
    Ok(())
}
