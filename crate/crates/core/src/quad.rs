//! Composite Simpson quadrature and uniform-grid suprema.

use crate::error::{Error, Result};

/// Node count used wherever an integral over `[-1, 1]` is needed and the caller
/// does not choose one.
pub const DEFAULT_QUAD_NODES: usize = 2001;

/// Point count for grid suprema over `[0, 1]`.
pub const DEFAULT_GRID_POINTS: usize = 10_000;

/// Composite Simpson rule on `[a, b]` with `nodes` equally spaced nodes
/// (`nodes` odd, at least 3).
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, nodes: usize) -> Result<f64> {
    if nodes < 3 || nodes.is_multiple_of(2) {
        return Err(Error::param(
            "quad_nodes",
            alloc::format!("must be an odd integer >= 3 (got {nodes})"),
        ));
    }
    Ok(simpson_unchecked(f, a, b, nodes))
}

pub(crate) fn simpson_unchecked<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, nodes: usize) -> f64 {
    let intervals = nodes - 1;
    let step = (b - a) / intervals as f64;
    let mut acc = crate::sum::NeumaierSum::new();
    for i in 0..nodes {
        let w = if i == 0 || i == intervals {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        acc += w * f(node(a, b, i, intervals));
    }
    acc.value() * step / 3.0
}

/// `i`-th of `intervals + 1` equally spaced nodes on `[a, b]`, computed from
/// the nearer endpoint so that symmetric intervals give exactly symmetric nodes.
#[inline]
pub(crate) fn node(a: f64, b: f64, i: usize, intervals: usize) -> f64 {
    if 2 * i <= intervals {
        a + (b - a) * (i as f64 / intervals as f64)
    } else {
        b - (b - a) * ((intervals - i) as f64 / intervals as f64)
    }
}

/// Uniform grid of `points` values covering `[0, 1]` including both ends.
pub fn unit_grid(points: usize) -> impl Iterator<Item = f64> {
    let intervals = points.saturating_sub(1).max(1);
    (0..points).map(move |i| node(0.0, 1.0, i, intervals))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_on_cubics() {
        let v = simpson(|x| x * x * x - 2.0 * x + 1.0, -1.0, 2.0, 5).unwrap();
        // 16/4 - 4 + 2 - (1/4 - 1 - 1)
        assert!((v - 3.75).abs() < 1e-14);
    }

    #[test]
    fn rejects_even_node_count() {
        assert!(simpson(|x| x, 0.0, 1.0, 4).is_err());
        assert!(simpson(|x| x, 0.0, 1.0, 1).is_err());
    }

    #[test]
    fn symmetric_nodes() {
        let n = 2000;
        for i in 0..=n {
            assert_eq!(node(-1.0, 1.0, i, n), -node(-1.0, 1.0, n - i, n));
        }
    }

    #[test]
    fn grid_endpoints() {
        let g: alloc::vec::Vec<f64> = unit_grid(11).collect();
        assert_eq!(g.len(), 11);
        assert_eq!(g[0], 0.0);
        assert_eq!(g[10], 1.0);
    }
}
