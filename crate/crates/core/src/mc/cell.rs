use alloc::format;
use alloc::vec::Vec;

use crate::estimator::{Accumulator, EstimateResult, KernelSpec, Schedule};
use crate::model::{ar_step, design_point, CoefFunction, NoiseDensity};
use crate::rng::{fnv1a, replication_seed};

/// Precomputed state for the replications of one `(coef, noise, n)` cell.
///
/// A replication only simulates up to the last step that can carry kernel
/// weight; every value it touches is bitwise equal to the corresponding value
/// of the full [`crate::simulate`] trajectory with the same seed.
pub(crate) struct Cell<'a> {
    pub coef: &'a CoefFunction,
    pub noise: &'a NoiseDensity,
    pub sched: Schedule,
    pub y0: f64,
    pub s_z0: f64,
    cell_key: u64,
    root_seed: u64,
    /// `S(x_k)` for `k = 1..=scan_end` (index `k - 1`).
    coef_at: Vec<f64>,
    /// `Q(u_k)` for `k` in the scan range (index `k - scan_start`).
    weights: Vec<f64>,
    scan_start: u64,
}

pub(crate) fn cell_hash(coef_id: &str, noise_id: &str, n: u64) -> u64 {
    fnv1a(format!("{coef_id}|{noise_id}|{n}").as_bytes())
}

impl<'a> Cell<'a> {
    pub fn new(
        coef: &'a CoefFunction,
        noise: &'a NoiseDensity,
        kernel: &KernelSpec,
        sched: Schedule,
        y0: f64,
        root_seed: u64,
    ) -> Self {
        let end = *sched.scan_range().end();
        Self::with_horizon(coef, noise, kernel, sched, y0, root_seed, end)
    }

    /// Like [`Cell::new`] but [`Cell::walk`] runs to step `horizon`, which must
    /// cover the scan range.
    pub fn with_horizon(
        coef: &'a CoefFunction,
        noise: &'a NoiseDensity,
        kernel: &KernelSpec,
        sched: Schedule,
        y0: f64,
        root_seed: u64,
        horizon: u64,
    ) -> Self {
        let scan = sched.scan_range();
        assert!(horizon >= *scan.end() && horizon <= sched.n);
        let coef_at = (1..=horizon)
            .map(|k| coef.eval(design_point(k, sched.n)))
            .collect();
        let weights = scan.clone().map(|k| kernel.eval(sched.u(k))).collect();
        Self {
            coef,
            noise,
            sched,
            y0,
            s_z0: coef.eval(sched.z0),
            cell_key: cell_hash(coef.id(), &noise.id, sched.n),
            root_seed,
            coef_at,
            weights,
            scan_start: *scan.start(),
        }
    }

    pub fn seed(&self, rep: u64) -> u64 {
        replication_seed(self.root_seed, self.cell_key, rep)
    }

    /// Simulates replication `rep` up to the horizon, calling
    /// `f(k, y_{k-1}, y_k, xi_k, S(x_k))` for every step.
    #[inline]
    pub fn walk(&self, rep: u64, mut f: impl FnMut(u64, f64, f64, f64, f64)) {
        let seed = self.seed(rep);
        let mut prev = self.y0;
        for (i, &s) in self.coef_at.iter().enumerate() {
            let k = i as u64 + 1;
            let xi = self.noise.draw(seed, k);
            let y = ar_step(s, prev, xi);
            f(k, prev, y, xi, s);
            prev = y;
        }
    }

    /// Kernel weight `Q(u_k)`, zero outside the scan range.
    #[inline]
    pub fn weight(&self, k: u64) -> f64 {
        if k < self.scan_start {
            return 0.0;
        }
        self.weights
            .get((k - self.scan_start) as usize)
            .copied()
            .unwrap_or(0.0)
    }

    /// Diagnostic-mode estimate for replication `rep`.
    pub fn replicate(&self, rep: u64) -> EstimateResult {
        let mut acc = Accumulator::default();
        self.walk(rep, |k, prev, y, xi, s| {
            if k >= self.scan_start {
                acc.push_diagnostic(self.weight(k), prev, y, xi, s - self.s_z0);
            }
        });
        acc.finish(&self.sched, true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimator::{decompose, make_schedule};
    use crate::model::{noise_panel, simulate, FixtureContext};

    #[test]
    fn streaming_replication_matches_full_trajectory_bitwise() {
        let n = 5000;
        let ctx = FixtureContext {
            z0: 0.45,
            beta: 1.5,
            n,
        };
        let kernels = ["indicator", "epanechnikov"];
        for id in ["sine(0.4,0.3)", "cusp(0.3,0.5)", "zero"] {
            let coef = CoefFunction::from_id(id, &ctx).unwrap();
            for p in noise_panel(9.0).unwrap() {
                for kid in kernels {
                    let kernel = KernelSpec::by_id(kid).unwrap();
                    let sched = make_schedule(n, 1.5, 0.45, 0.25).unwrap();
                    let cell = Cell::new(&coef, &p, &kernel, sched, 0.25, 99);
                    for rep in [0, 7] {
                        let fast = cell.replicate(rep);
                        let t = simulate(&coef, &p, n, 0.25, cell.seed(rep)).unwrap();
                        let slow = decompose(&t, &coef, &kernel, &sched).unwrap();
                        assert_eq!(fast.value.to_bits(), slow.value.to_bits());
                        assert_eq!(fast.a_n.to_bits(), slow.a_n.to_bits());
                        assert_eq!(fast.zeta.unwrap().to_bits(), slow.zeta.unwrap().to_bits());
                        assert_eq!(fast.b.unwrap().to_bits(), slow.b.unwrap().to_bits());
                    }
                }
            }
        }
    }

    #[test]
    fn replication_seeds_are_distinct() {
        let coef = CoefFunction::zero();
        let p = NoiseDensity::gaussian();
        let k = KernelSpec::by_id("indicator").unwrap();
        let sched = make_schedule(1000, 1.0, 0.5, 0.25).unwrap();
        let a = Cell::new(&coef, &p, &k, sched, 0.0, 1);
        let b = Cell::new(&coef, &p, &k, sched, 0.0, 2);
        let mut seeds: Vec<u64> = (0..1000).map(|r| a.seed(r)).collect();
        seeds.extend((0..1000).map(|r| b.seed(r)));
        seeds.sort_unstable();
        seeds.dedup();
        assert_eq!(seeds.len(), 2000);
    }
}
