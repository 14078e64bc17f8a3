use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use core::fmt;

use crate::error::{Error, Result};
use crate::quad::simpson;

/// Largest admissible `|integral of z Q(z)|`.
pub const MOMENT1_TOL: f64 = 1e-10;

/// Ids of the built-in kernels.
pub const KERNEL_IDS: [&str; 3] = ["indicator", "epanechnikov", "quartic"];

#[derive(Clone)]
pub enum KernelShape {
    /// `1` on the closed interval `[-1, 1]`.
    Indicator,
    /// `3/4 (1 - z^2)`.
    Epanechnikov,
    /// `15/16 (1 - z^2)^2`.
    Quartic,
    Custom {
        id: String,
        q: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    },
}

impl KernelShape {
    pub fn custom(id: impl Into<String>, q: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        KernelShape::Custom {
            id: id.into(),
            q: Arc::new(q),
        }
    }

    pub fn from_id(id: &str) -> Result<Self> {
        match id.trim() {
            "indicator" => Ok(KernelShape::Indicator),
            "epanechnikov" => Ok(KernelShape::Epanechnikov),
            "quartic" => Ok(KernelShape::Quartic),
            other => Err(Error::UnknownId {
                kind: "kernel",
                id: other.to_string(),
            }),
        }
    }

    fn id(&self) -> &str {
        match self {
            KernelShape::Indicator => "indicator",
            KernelShape::Epanechnikov => "epanechnikov",
            KernelShape::Quartic => "quartic",
            KernelShape::Custom { id, .. } => id,
        }
    }

    /// Kernel value; zero outside `[-1, 1]` whatever the shape.
    #[inline]
    fn eval(&self, z: f64) -> f64 {
        if !(z.abs() <= 1.0) {
            return 0.0;
        }
        match self {
            KernelShape::Indicator => 1.0,
            KernelShape::Epanechnikov => 0.75 * (1.0 - z * z),
            KernelShape::Quartic => {
                let w = 1.0 - z * z;
                0.9375 * w * w
            }
            KernelShape::Custom { q, .. } => q(z),
        }
    }
}

/// A kernel that passed [`validate_kernel`].
#[derive(Clone)]
pub struct KernelSpec {
    id: String,
    shape: KernelShape,
    moment0: f64,
    moment1: f64,
}

impl fmt::Debug for KernelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("KernelSpec")
            .field("id", &self.id)
            .field("moment0", &self.moment0)
            .field("moment1", &self.moment1)
            .finish()
    }
}

impl KernelSpec {
    /// Validated built-in kernel.
    pub fn by_id(id: &str) -> Result<Self> {
        validate_kernel(KernelShape::from_id(id)?, crate::quad::DEFAULT_QUAD_NODES)
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn moment0(&self) -> f64 {
        self.moment0
    }

    pub fn moment1(&self) -> f64 {
        self.moment1
    }

    pub fn is_indicator(&self) -> bool {
        matches!(self.shape, KernelShape::Indicator)
    }

    #[inline]
    pub fn eval(&self, z: f64) -> f64 {
        self.shape.eval(z)
    }
}

/// Computes `integral of Q` and `integral of z Q` over `[-1, 1]` by Simpson
/// quadrature and accepts the kernel iff the first is positive and the second
/// vanishes to [`MOMENT1_TOL`].
pub fn validate_kernel(shape: KernelShape, quad_nodes: usize) -> Result<KernelSpec> {
    let moment0 = simpson(|z| shape.eval(z), -1.0, 1.0, quad_nodes)?;
    let moment1 = simpson(|z| z * shape.eval(z), -1.0, 1.0, quad_nodes)?;
    if !(moment0 > 0.0 && moment1.abs() <= MOMENT1_TOL) {
        return Err(Error::KernelRejected { moment0, moment1 });
    }
    Ok(KernelSpec {
        id: shape.id().to_string(),
        shape,
        moment0,
        moment1,
    })
}

impl fmt::Display for KernelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format!("{} (moment0 = {})", self.id, self.moment0))
    }
}
