use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;

use crate::classes::{bump_function, BumpProfile, BumpSpec};
use crate::error::{Error, Result};

type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Analytic families of coefficient functions.
#[derive(Clone)]
pub enum CoefKind {
    /// `c`
    Constant(f64),
    /// `level + slope * (x - z0)`
    Linear { level: f64, slope: f64, z0: f64 },
    /// `level + curvature * (x - z0)^2`
    Quadratic { level: f64, curvature: f64, z0: f64 },
    /// `level + amplitude * sin(2 pi (x - z0))`
    Sine { level: f64, amplitude: f64, z0: f64 },
    /// `amplitude * cos(2 pi x)`
    Cosine { amplitude: f64 },
    /// `level + scale * sign(x - z0) |x - z0|^beta`; its derivative is
    /// Hölder of order `beta - 1` at `z0` and nowhere smoother.
    Cusp {
        level: f64,
        scale: f64,
        z0: f64,
        beta: f64,
    },
    /// `scale * V((x - z0) / h)` for a compactly supported profile `V`.
    Bump {
        scale: f64,
        z0: f64,
        h: f64,
        profile: BumpProfile,
    },
    /// Caller-supplied function and its exact derivative.
    Custom { eval: RealFn, deriv: RealFn },
}

/// Autoregression coefficient `S` on `[0, 1]` with its analytic derivative and
/// a declared bound on `sup |S|`.
#[derive(Clone)]
pub struct CoefFunction {
    id: String,
    kind: CoefKind,
    sup_norm_bound: f64,
}

impl fmt::Debug for CoefFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CoefFunction")
            .field("id", &self.id)
            .field("sup_norm_bound", &self.sup_norm_bound)
            .finish_non_exhaustive()
    }
}

impl CoefFunction {
    /// Builds a function from an analytic family; the sup-norm bound is derived
    /// from the family's closed form over `[0, 1]`.
    pub fn new(id: impl Into<String>, kind: CoefKind) -> Self {
        let far = |z0: f64| z0.max(1.0 - z0);
        let sup_norm_bound = match &kind {
            CoefKind::Constant(c) => c.abs(),
            CoefKind::Linear { level, slope, z0 } => level.abs() + slope.abs() * far(*z0),
            CoefKind::Quadratic {
                level,
                curvature,
                z0,
            } => level.abs() + curvature.abs() * far(*z0) * far(*z0),
            CoefKind::Sine {
                level, amplitude, ..
            } => level.abs() + amplitude.abs(),
            CoefKind::Cosine { amplitude } => amplitude.abs(),
            CoefKind::Cusp {
                level,
                scale,
                z0,
                beta,
            } => level.abs() + scale.abs() * libm::pow(far(*z0), *beta),
            CoefKind::Bump { scale, profile, .. } => scale.abs() * profile.sup(),
            CoefKind::Custom { .. } => f64::INFINITY,
        };
        Self {
            id: id.into(),
            kind,
            sup_norm_bound,
        }
    }

    /// Caller-supplied function; `deriv` must be the exact derivative of `eval`.
    pub fn custom<F, D>(id: impl Into<String>, sup_norm_bound: f64, eval: F, deriv: D) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
        D: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self {
            id: id.into(),
            kind: CoefKind::Custom {
                eval: Arc::new(eval),
                deriv: Arc::new(deriv),
            },
            sup_norm_bound,
        }
    }

    pub fn constant(c: f64) -> Self {
        Self::new(format!("const({c})"), CoefKind::Constant(c))
    }

    pub fn zero() -> Self {
        Self::new("zero", CoefKind::Constant(0.0))
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn kind(&self) -> &CoefKind {
        &self.kind
    }

    pub fn sup_norm_bound(&self) -> f64 {
        self.sup_norm_bound
    }

    /// True for the identically-zero function (the null model of the LAN
    /// construction).
    pub fn is_zero(&self) -> bool {
        matches!(self.kind, CoefKind::Constant(c) if c == 0.0)
            || matches!(self.kind, CoefKind::Bump { scale, .. } if scale == 0.0)
    }

    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        match &self.kind {
            CoefKind::Constant(c) => *c,
            CoefKind::Linear { level, slope, z0 } => level + slope * (x - z0),
            CoefKind::Quadratic {
                level,
                curvature,
                z0,
            } => {
                let d = x - z0;
                level + curvature * d * d
            }
            CoefKind::Sine {
                level,
                amplitude,
                z0,
            } => level + amplitude * libm::sin(2.0 * PI * (x - z0)),
            CoefKind::Cosine { amplitude } => amplitude * libm::cos(2.0 * PI * x),
            CoefKind::Cusp {
                level,
                scale,
                z0,
                beta,
            } => {
                let d = x - z0;
                let m = scale * libm::pow(d.abs(), *beta);
                if d < 0.0 {
                    level - m
                } else {
                    level + m
                }
            }
            CoefKind::Bump {
                scale,
                z0,
                h,
                profile,
            } => scale * profile.value((x - z0) / h),
            CoefKind::Custom { eval, .. } => eval(x),
        }
    }

    #[inline]
    pub fn deriv(&self, x: f64) -> f64 {
        match &self.kind {
            CoefKind::Constant(_) => 0.0,
            CoefKind::Linear { slope, .. } => *slope,
            CoefKind::Quadratic { curvature, z0, .. } => 2.0 * curvature * (x - z0),
            CoefKind::Sine { amplitude, z0, .. } => {
                2.0 * PI * amplitude * libm::cos(2.0 * PI * (x - z0))
            }
            CoefKind::Cosine { amplitude } => -2.0 * PI * amplitude * libm::sin(2.0 * PI * x),
            CoefKind::Cusp {
                scale, z0, beta, ..
            } => scale * beta * libm::pow((x - z0).abs(), beta - 1.0),
            CoefKind::Bump {
                scale,
                z0,
                h,
                profile,
            } => scale / h * profile.deriv((x - z0) / h),
            CoefKind::Custom { deriv, .. } => deriv(x),
        }
    }

    /// Resolves a fixture id such as `sine(0.4,0.3)`.
    ///
    /// Grammar: `name` or `name(arg, ...)`, where `name` is one of
    ///
    /// | id | function |
    /// |----|----------|
    /// | `zero` | `0` |
    /// | `const(c)` | `c` |
    /// | `linear(level,slope)` | `level + slope (x - z0)` |
    /// | `quadratic(level,curvature)` | `level + curvature (x - z0)^2` |
    /// | `sine(level,amplitude)` | `level + amplitude sin(2 pi (x - z0))` |
    /// | `cosine(amplitude)` | `amplitude cos(2 pi x)` |
    /// | `cusp(level,scale[,beta])` | `level + scale sign(x - z0) abs(x - z0)^beta` |
    /// | `bump(u,K)` | triweight bump of amplitude `u`, Hölder budget `K` |
    ///
    /// `z0`, `beta` (cusp default) and `n` (bump) come from `ctx`.
    pub fn from_id(id: &str, ctx: &FixtureContext) -> Result<Self> {
        let id = id.trim();
        let (name, args) = parse_call(id)?;
        let want = |k: usize| -> Result<()> {
            if args.len() == k {
                Ok(())
            } else {
                Err(Error::param(
                    "coef_ids",
                    format!("`{id}` takes {k} argument(s), got {}", args.len()),
                ))
            }
        };
        let z0 = ctx.z0;
        let kind = match name {
            "zero" => {
                want(0)?;
                CoefKind::Constant(0.0)
            }
            "const" => {
                want(1)?;
                CoefKind::Constant(args[0])
            }
            "linear" => {
                want(2)?;
                CoefKind::Linear {
                    level: args[0],
                    slope: args[1],
                    z0,
                }
            }
            "quadratic" => {
                want(2)?;
                CoefKind::Quadratic {
                    level: args[0],
                    curvature: args[1],
                    z0,
                }
            }
            "sine" => {
                want(2)?;
                CoefKind::Sine {
                    level: args[0],
                    amplitude: args[1],
                    z0,
                }
            }
            "cosine" => {
                want(1)?;
                CoefKind::Cosine { amplitude: args[0] }
            }
            "cusp" => {
                if args.len() != 2 && args.len() != 3 {
                    want(3)?;
                }
                CoefKind::Cusp {
                    level: args[0],
                    scale: args[1],
                    z0,
                    beta: args.get(2).copied().unwrap_or(ctx.beta),
                }
            }
            "bump" => {
                want(2)?;
                let spec = BumpSpec {
                    profile: BumpProfile::Triweight,
                    u: args[0],
                    k_const: args[1],
                    n: ctx.n,
                    beta: ctx.beta,
                    z0,
                };
                let mut f = bump_function(&spec)?;
                f.id = id.to_string();
                return Ok(f);
            }
            _ => {
                return Err(Error::UnknownId {
                    kind: "coefficient",
                    id: id.to_string(),
                })
            }
        };
        Ok(Self::new(id, kind))
    }
}

/// Parameters that fixture ids may depend on.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FixtureContext {
    pub z0: f64,
    pub beta: f64,
    pub n: u64,
}

fn parse_call(id: &str) -> Result<(&str, Vec<f64>)> {
    let bad = || {
        Error::param(
            "coef_ids",
            format!("malformed coefficient id `{id}` (expected name or name(a,b,...))"),
        )
    };
    let Some(open) = id.find('(') else {
        return Ok((id, Vec::new()));
    };
    let inner = id[open + 1..].strip_suffix(')').ok_or_else(bad)?;
    let args = inner
        .split(',')
        .map(|a| a.trim().parse::<f64>().map_err(|_| bad()))
        .collect::<Result<Vec<_>>>()?;
    Ok((id[..open].trim(), args))
}
