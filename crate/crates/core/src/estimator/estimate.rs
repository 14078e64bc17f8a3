use super::{KernelSpec, Schedule};
use crate::error::{Error, Result};
use crate::model::{CoefFunction, Trajectory};
use crate::sum::NeumaierSum;

/// Estimator output together with the terms of the error decomposition
///
/// ```text
/// value - S(z0) = -S(z0) 1(not kept) + a_hat zeta / phi + a_hat b / phi
/// ```
///
/// The keep event is `A_n >= d` (equivalently `a_tilde >= kappa`); the same
/// boolean drives `value` and `a_hat`, so the identity holds exactly up to
/// floating-point rounding.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EstimateResult {
    /// `S_hat_n(z0)`; exactly `0.0` when the threshold is not met.
    pub value: f64,
    /// `A_n = sum Q(u_k) y_{k-1}^2`.
    pub a_n: f64,
    /// `A_n / phi^2`.
    pub a_tilde: f64,
    /// `A_n >= d`.
    pub indicator: bool,
    /// `1 / a_tilde` when kept, `0` otherwise.
    pub a_hat: f64,
    /// `phi^-1 sum Q(u_k) y_{k-1} xi_k` (diagnostic mode only).
    pub zeta: Option<f64>,
    /// `phi^-1 sum Q(u_k) (S(x_k) - S(z0)) y_{k-1}^2` (diagnostic mode only).
    pub b: Option<f64>,
    /// `phi` of the schedule that produced this result.
    pub phi: f64,
}

impl EstimateResult {
    /// `lhs - rhs` of the decomposition for true value `s_z0`; `None` outside
    /// diagnostic mode.
    pub fn decomposition_residual(&self, s_z0: f64) -> Option<f64> {
        let (zeta, b) = (self.zeta?, self.b?);
        let lhs = self.value - s_z0;
        let dropped = if self.indicator { 0.0 } else { -s_z0 };
        let rhs = dropped + self.a_hat * zeta / self.phi + self.a_hat * b / self.phi;
        Some(lhs - rhs)
    }
}

/// Window sums shared by every estimation path.
#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct Accumulator {
    a: NeumaierSum,
    cross: NeumaierSum,
    zeta: NeumaierSum,
    b: NeumaierSum,
}

impl Accumulator {
    #[inline]
    pub(crate) fn push(&mut self, q: f64, y_prev: f64, y: f64) {
        if q == 0.0 {
            return;
        }
        self.a += q * y_prev * y_prev;
        self.cross += q * y_prev * y;
    }

    /// `ds = S(x_k) - S(z0)`.
    #[inline]
    pub(crate) fn push_diagnostic(&mut self, q: f64, y_prev: f64, y: f64, xi: f64, ds: f64) {
        if q == 0.0 {
            return;
        }
        let sq = q * y_prev * y_prev;
        self.a += sq;
        self.cross += q * y_prev * y;
        self.zeta += q * y_prev * xi;
        self.b += ds * sq;
    }

    pub(crate) fn finish(&self, sched: &Schedule, diagnostic: bool) -> EstimateResult {
        let a_n = self.a.value();
        let phi_sq = sched.phi * sched.phi;
        let indicator = a_n >= sched.d;
        let a_tilde = a_n / phi_sq;
        let (value, a_hat) = if indicator {
            assert!(
                a_n > 0.0,
                "kept estimate with A_n = {a_n} (d = {})",
                sched.d
            );
            (self.cross.value() / a_n, 1.0 / a_tilde)
        } else {
            (0.0, 0.0)
        };
        EstimateResult {
            value,
            a_n,
            a_tilde,
            indicator,
            a_hat,
            zeta: diagnostic.then(|| self.zeta.value() / sched.phi),
            b: diagnostic.then(|| self.b.value() / sched.phi),
            phi: sched.phi,
        }
    }
}

fn check_match(traj: &Trajectory, sched: &Schedule) -> Result<()> {
    if traj.n() != sched.n {
        return Err(Error::ScheduleMismatch {
            schedule: sched.n,
            trajectory: traj.n(),
        });
    }
    Ok(())
}

/// Truncated kernel estimate of `S(z0)`:
/// `(1 / A_n) sum Q(u_k) y_{k-1} y_k` if `A_n >= d`, else `0`.
pub fn estimate(
    traj: &Trajectory,
    kernel: &KernelSpec,
    sched: &Schedule,
) -> Result<EstimateResult> {
    check_match(traj, sched)?;
    let y = traj.y();
    let mut acc = Accumulator::default();
    for k in sched.scan_range() {
        let i = k as usize;
        acc.push(kernel.eval(sched.u(k)), y[i - 1], y[i]);
    }
    Ok(acc.finish(sched, false))
}

/// [`estimate`] plus the stochastic term `zeta` and bias term `b`, given the
/// generating coefficient function and the stored residuals.
pub fn decompose(
    traj: &Trajectory,
    s_true: &CoefFunction,
    kernel: &KernelSpec,
    sched: &Schedule,
) -> Result<EstimateResult> {
    check_match(traj, sched)?;
    let xi = traj.residuals().ok_or(Error::MissingResiduals)?;
    let y = traj.y();
    let s0 = s_true.eval(sched.z0);
    let mut acc = Accumulator::default();
    for k in sched.scan_range() {
        let i = k as usize;
        let ds = s_true.eval(traj.x(k)) - s0;
        acc.push_diagnostic(kernel.eval(sched.u(k)), y[i - 1], y[i], xi[i - 1], ds);
    }
    Ok(acc.finish(sched, true))
}
