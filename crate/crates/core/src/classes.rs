//! Smoothness classes for the coefficient function and the parametric
//! families used to probe them.
//!
//! Suprema over `[0, 1]` are taken on a uniform grid (default
//! [`DEFAULT_GRID_POINTS`] points) and integrals over `[-1, 1]` use composite
//! Simpson (default [`DEFAULT_QUAD_NODES`] nodes). Derivatives are always the
//! analytic ones supplied by [`CoefFunction`].

use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::model::{CoefFunction, CoefKind};
use crate::quad::{self, simpson, unit_grid, DEFAULT_GRID_POINTS, DEFAULT_QUAD_NODES};

/// Hölder-type class at `z0`: `|S| <= 1 - eps`, `|S'| <= K`, and
/// `|S'(x) - S'(z0)| <= K |x - z0|^alpha` with `alpha = beta - 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HolderSpec {
    pub z0: f64,
    pub beta: f64,
    pub k_const: f64,
    pub eps: f64,
}

impl HolderSpec {
    pub fn alpha(&self) -> f64 {
        self.beta - 1.0
    }

    pub fn validate(&self) -> Result<()> {
        check_z0(self.z0)?;
        check_beta(self.beta)?;
        check_eps(self.eps)?;
        if !(self.k_const > 0.0) {
            return Err(Error::param(
                "K",
                format!("must be > 0 (got {})", self.k_const),
            ));
        }
        Ok(())
    }
}

/// Weak class at `z0` for sample size `n`: `|S| <= 1 - eps`,
/// `|S'| <= 1/delta`, and `|Omega_h(z0, S)| <= delta h^beta`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WeakHolderSpec {
    pub z0: f64,
    pub beta: f64,
    pub delta: f64,
    pub eps: f64,
    pub n: u64,
}

impl WeakHolderSpec {
    /// `n^(-1/(2 beta + 1))`.
    pub fn h(&self) -> f64 {
        bandwidth(self.n, self.beta)
    }

    pub fn validate(&self) -> Result<()> {
        check_z0(self.z0)?;
        check_beta(self.beta)?;
        check_eps(self.eps)?;
        if !(self.delta > 0.0) {
            return Err(Error::param(
                "delta",
                format!("must be > 0 (got {})", self.delta),
            ));
        }
        if self.n == 0 {
            return Err(Error::param("n", "must be >= 1 (got 0)"));
        }
        Ok(())
    }
}

pub(crate) fn bandwidth(n: u64, beta: f64) -> f64 {
    libm::pow(n as f64, -1.0 / (2.0 * beta + 1.0))
}

pub(crate) fn rate(n: u64, beta: f64) -> f64 {
    libm::pow(n as f64, beta / (2.0 * beta + 1.0))
}

pub(crate) fn check_beta(beta: f64) -> Result<()> {
    if (1.0..2.0).contains(&beta) {
        Ok(())
    } else {
        Err(Error::param(
            "beta",
            format!("must satisfy 1 <= beta < 2 (got {beta})"),
        ))
    }
}

pub(crate) fn check_z0(z0: f64) -> Result<()> {
    if z0 > 0.0 && z0 < 1.0 {
        Ok(())
    } else {
        Err(Error::param("z0", format!("must lie in (0, 1) (got {z0})")))
    }
}

pub(crate) fn check_eps(eps: f64) -> Result<()> {
    if eps > 0.0 && eps < 1.0 {
        Ok(())
    } else {
        Err(Error::param(
            "eps",
            format!("must lie in (0, 1) (got {eps})"),
        ))
    }
}

/// `max |S(x)| <= 1 - eps` over a uniform grid of `grid_points` points.
pub fn check_stability(coef: &CoefFunction, eps: f64, grid_points: usize) -> Result<bool> {
    if grid_points < 2 {
        return Err(Error::param(
            "grid_points",
            format!("must be >= 2 (got {grid_points})"),
        ));
    }
    Ok(grid_sup(grid_points, |x| coef.eval(x)) <= 1.0 - eps)
}

fn grid_sup(points: usize, f: impl Fn(f64) -> f64) -> f64 {
    unit_grid(points).map(|x| f(x).abs()).fold(0.0, f64::max)
}

/// Grid supremum of `|S'(x) - S'(z0)| / |x - z0|^alpha` over `x != z0`.
pub fn holder_constant(
    coef: &CoefFunction,
    z0: f64,
    alpha: f64,
    grid_points: usize,
) -> Result<f64> {
    if !(0.0..1.0).contains(&alpha) {
        return Err(Error::param(
            "alpha",
            format!("must lie in [0, 1) (got {alpha})"),
        ));
    }
    if grid_points < 2 {
        return Err(Error::param(
            "grid_points",
            format!("must be >= 2 (got {grid_points})"),
        ));
    }
    let d0 = coef.deriv(z0);
    Ok(unit_grid(grid_points)
        .filter(|&x| x != z0)
        .map(|x| (coef.deriv(x) - d0).abs() / libm::pow((x - z0).abs(), alpha))
        .fold(0.0, f64::max))
}

/// `Omega_h(z0, S) = integral over u in [-1, 1] of S(z0 + u h) - S(z0)`.
pub fn omega_h(coef: &CoefFunction, z0: f64, h: f64, quad_nodes: usize) -> Result<f64> {
    if !(h > 0.0) {
        return Err(Error::param("h", format!("must be > 0 (got {h})")));
    }
    if z0 - h < 0.0 || z0 + h > 1.0 {
        return Err(Error::param(
            "h",
            format!("window [{}, {}] leaves [0, 1]", z0 - h, z0 + h),
        ));
    }
    let s0 = coef.eval(z0);
    simpson(|u| coef.eval(z0 + u * h) - s0, -1.0, 1.0, quad_nodes)
}

/// Membership in the Hölder-type class of [`HolderSpec`].
pub fn check_holder_membership(
    coef: &CoefFunction,
    spec: &HolderSpec,
    grid_points: usize,
) -> Result<bool> {
    spec.validate()?;
    Ok(check_stability(coef, spec.eps, grid_points)?
        && grid_sup(grid_points, |x| coef.deriv(x)) <= spec.k_const
        && holder_constant(coef, spec.z0, spec.alpha(), grid_points)? <= spec.k_const)
}

/// Membership in the weak class of [`WeakHolderSpec`], using the default grid
/// and quadrature sizes.
pub fn check_weak_membership(coef: &CoefFunction, spec: &WeakHolderSpec) -> Result<bool> {
    spec.validate()?;
    let h = spec.h();
    let omega = omega_h(coef, spec.z0, h, DEFAULT_QUAD_NODES)?;
    Ok(check_stability(coef, spec.eps, DEFAULT_GRID_POINTS)?
        && grid_sup(DEFAULT_GRID_POINTS, |x| coef.deriv(x)) <= 1.0 / spec.delta
        && omega.abs() <= spec.delta * libm::pow(h, spec.beta))
}

/// `tau(S) = 1 - S(z0)^2`.
pub fn tau(coef: &CoefFunction, z0: f64) -> f64 {
    let s = coef.eval(z0);
    1.0 - s * s
}

/// Even, compactly supported (`V(z) = 0` for `|z| >= 1`), twice continuously
/// differentiable profiles with analytic first and second derivatives.
#[derive(Clone)]
pub enum BumpProfile {
    /// `(1 - z^2)^3`: `max V = 1`, `max |V''| = 6`, `integral V = 32/35`.
    Triweight,
    Mollified(Arc<MollifiedIndicator>),
}

impl fmt::Debug for BumpProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BumpProfile::Triweight => f.write_str("Triweight"),
            BumpProfile::Mollified(m) => write!(f, "Mollified(nu = {})", m.nu),
        }
    }
}

impl BumpProfile {
    #[inline]
    pub fn value(&self, z: f64) -> f64 {
        match self {
            BumpProfile::Triweight => {
                if z.abs() >= 1.0 {
                    0.0
                } else {
                    let w = 1.0 - z * z;
                    w * w * w
                }
            }
            BumpProfile::Mollified(m) => m.value(z),
        }
    }

    pub fn deriv(&self, z: f64) -> f64 {
        match self {
            BumpProfile::Triweight => {
                if z.abs() >= 1.0 {
                    0.0
                } else {
                    let w = 1.0 - z * z;
                    -6.0 * z * w * w
                }
            }
            BumpProfile::Mollified(m) => m.deriv(z),
        }
    }

    pub fn second_deriv(&self, z: f64) -> f64 {
        match self {
            BumpProfile::Triweight => {
                if z.abs() >= 1.0 {
                    0.0
                } else {
                    (1.0 - z * z) * (30.0 * z * z - 6.0)
                }
            }
            BumpProfile::Mollified(m) => m.second_deriv(z),
        }
    }

    /// `max |V|`.
    pub fn sup(&self) -> f64 {
        match self {
            BumpProfile::Triweight => 1.0,
            BumpProfile::Mollified(_) => 2.0,
        }
    }

    /// `max |V'|`; closed form for the triweight, grid maximum otherwise.
    pub fn deriv_sup(&self) -> f64 {
        match self {
            // |6 z (1 - z^2)^2| peaks at z^2 = 1/5.
            BumpProfile::Triweight => 6.0 * libm::sqrt(0.2) * 0.64,
            BumpProfile::Mollified(_) => symmetric_grid_sup(|z| self.deriv(z)),
        }
    }

    /// `V''_* = max |V''|`; closed form for the triweight, grid maximum otherwise.
    pub fn second_deriv_sup(&self) -> f64 {
        match self {
            BumpProfile::Triweight => 6.0,
            BumpProfile::Mollified(_) => symmetric_grid_sup(|z| self.second_deriv(z)),
        }
    }

    /// `integral of V^2 over [-1, 1]` by Simpson quadrature.
    pub fn l2_norm_sq(&self, quad_nodes: usize) -> Result<f64> {
        simpson(
            |z| {
                let v = self.value(z);
                v * v
            },
            -1.0,
            1.0,
            quad_nodes,
        )
    }
}

fn symmetric_grid_sup(f: impl Fn(f64) -> f64) -> f64 {
    const POINTS: usize = 40_001;
    (0..POINTS)
        .map(|i| f(quad::node(-1.0, 1.0, i, POINTS - 1)).abs())
        .fold(0.0, f64::max)
}

/// Amplitude-`u` member of the bump family around `z0` for sample size `n`.
#[derive(Clone, Debug)]
pub struct BumpSpec {
    pub profile: BumpProfile,
    pub u: f64,
    /// Hölder budget `K`; caps the amplitude at `u* = K / max|V''|`.
    pub k_const: f64,
    pub n: u64,
    pub beta: f64,
    pub z0: f64,
}

impl BumpSpec {
    pub fn u_star(&self) -> f64 {
        self.k_const / self.profile.second_deriv_sup()
    }
}

/// `S_u(x) = (u / phi_n) V((x - z0) / h)` with `h = n^(-1/(2 beta + 1))`,
/// `phi_n = n^(beta/(2 beta + 1))`.
pub fn bump_function(spec: &BumpSpec) -> Result<CoefFunction> {
    check_beta(spec.beta)?;
    check_z0(spec.z0)?;
    if spec.n == 0 {
        return Err(Error::param("n", "must be >= 1 (got 0)"));
    }
    let u_star = spec.u_star();
    if !(spec.u.abs() <= u_star) {
        return Err(Error::AmplitudeTooLarge { u: spec.u, u_star });
    }
    let id = format!(
        "bump(u={},n={},beta={},z0={})",
        spec.u, spec.n, spec.beta, spec.z0
    );
    Ok(CoefFunction::new(
        id,
        CoefKind::Bump {
            scale: spec.u / rate(spec.n, spec.beta),
            z0: spec.z0,
            h: bandwidth(spec.n, spec.beta),
            profile: spec.profile.clone(),
        },
    ))
}

/// Smoothed two-level indicator
/// `V_nu(x) = nu^-1 * integral of Qt_nu(u) g((u - x)/nu) du`, where
/// `Qt_nu = 1` on `|u| <= 1 - 2 nu`, `2` on `1 - 2 nu <= |u| <= 1 - nu`,
/// `0` beyond, and `g(z) ∝ exp(-1/(1 - z^2))` on `(-1, 1)`.
///
/// `Qt_nu` is written as a sum of steps `w_j 1(u >= e_j)`, so
/// `V_nu(x) = -sum_j w_j H((e_j - x)/nu)` with `H` the odd part of the CDF of
/// `g` (the weights sum to zero). `H` is tabulated once and evaluated by cubic
/// Hermite interpolation with the exact density as slope.
pub struct MollifiedIndicator {
    nu: f64,
    edges: [f64; 4],
    weights: [f64; 4],
    norm: f64,
    table: Vec<f64>,
}

const MOLLIFIER_CELLS: usize = 2048;

impl MollifiedIndicator {
    pub fn new(nu: f64) -> Result<Self> {
        if !(nu > 0.0 && nu < 0.25) {
            return Err(Error::param(
                "nu",
                format!("must lie in (0, 0.25) (got {nu})"),
            ));
        }
        let outer = 1.0 - nu;
        let inner = 1.0 - 2.0 * nu;
        // Cumulative integral of the unnormalized bump over [0, s].
        let mut table = Vec::with_capacity(MOLLIFIER_CELLS + 1);
        table.push(0.0);
        let mut acc = crate::sum::NeumaierSum::new();
        let step = 1.0 / MOLLIFIER_CELLS as f64;
        for i in 0..MOLLIFIER_CELLS {
            let a = i as f64 * step;
            acc += quad::simpson_unchecked(raw_bump, a, a + step, 33);
            table.push(acc.value());
        }
        let norm = 2.0 * table[MOLLIFIER_CELLS];
        for v in table.iter_mut() {
            *v /= norm;
        }
        Ok(Self {
            nu,
            edges: [-outer, -inner, inner, outer],
            weights: [2.0, -1.0, 1.0, -2.0],
            norm,
            table,
        })
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    /// Normalized mollifier density `g`.
    pub fn g(&self, t: f64) -> f64 {
        raw_bump(t) / self.norm
    }

    fn g_prime(&self, t: f64) -> f64 {
        if t.abs() >= 1.0 {
            return 0.0;
        }
        let w = 1.0 - t * t;
        raw_bump(t) * (-2.0 * t / (w * w)) / self.norm
    }

    /// Odd part of the mollifier CDF: `G(t) - 1/2`.
    fn half_cdf(&self, t: f64) -> f64 {
        let s = t.abs();
        if s >= 1.0 {
            return 0.5f64.copysign(t);
        }
        let pos = s * MOLLIFIER_CELLS as f64;
        let i = (pos as usize).min(MOLLIFIER_CELLS - 1);
        let dx = 1.0 / MOLLIFIER_CELLS as f64;
        let x0 = i as f64 * dx;
        let r = (s - x0) / dx;
        let (r2, r3) = (r * r, r * r * r);
        let h00 = 2.0 * r3 - 3.0 * r2 + 1.0;
        let h10 = r3 - 2.0 * r2 + r;
        let h01 = -2.0 * r3 + 3.0 * r2;
        let h11 = r3 - r2;
        let v = h00 * self.table[i]
            + h10 * dx * self.g(x0)
            + h01 * self.table[i + 1]
            + h11 * dx * self.g(x0 + dx);
        v.copysign(t)
    }

    pub fn value(&self, x: f64) -> f64 {
        if x.abs() >= 1.0 {
            return 0.0;
        }
        let mut v = 0.0;
        for (e, w) in self.edges.iter().zip(&self.weights) {
            v -= w * self.half_cdf((e - x) / self.nu);
        }
        v
    }

    pub fn deriv(&self, x: f64) -> f64 {
        if x.abs() >= 1.0 {
            return 0.0;
        }
        let mut v = 0.0;
        for (e, w) in self.edges.iter().zip(&self.weights) {
            v += w * self.g((e - x) / self.nu);
        }
        v / self.nu
    }

    pub fn second_deriv(&self, x: f64) -> f64 {
        if x.abs() >= 1.0 {
            return 0.0;
        }
        let mut v = 0.0;
        for (e, w) in self.edges.iter().zip(&self.weights) {
            v -= w * self.g_prime((e - x) / self.nu);
        }
        v / (self.nu * self.nu)
    }
}

fn raw_bump(t: f64) -> f64 {
    if t.abs() >= 1.0 {
        0.0
    } else {
        libm::exp(-1.0 / (1.0 - t * t))
    }
}

/// Builds `V_nu` and returns it with `sigma_nu^2 = integral of V_nu^2 over
/// [-1, 1]` (Simpson, `quad_nodes` nodes).
pub fn mollified_indicator(nu: f64, quad_nodes: usize) -> Result<(BumpProfile, f64)> {
    let profile = BumpProfile::Mollified(Arc::new(MollifiedIndicator::new(nu)?));
    let sigma_sq = profile.l2_norm_sq(quad_nodes)?;
    Ok((profile, sigma_sq))
}
