// Shared-sample hit counting on the disk.
//
// Samples of A_alpha are drawn in radial strata that get finer towards the
// boundary; every stratum receives the same number of samples. A caller
// classifies each sample into any number of cells (windows, level sets) and the
// per-stratum hit counts become estimates `sum_s mass_s * hits_s / n_s`.
// Integer counts make the result independent of the thread count, and a
// sample set shared between nested cells gives exactly nested estimates.

use alloc::vec::Vec;

use crate::exec::{pairwise_sum, sum_counts};
use crate::math::sqrt;
use crate::measures::{allocation, Estimate, Method, PolarBox};
use crate::rng::{self, BLOCK};
use crate::C64;

/// Upper bound on the number of radial strata.
const MAX_STRATA: usize = 40;

pub(crate) struct DiskTally {
    masses: Vec<f64>,
    sizes: Vec<usize>,
    cells: usize,
    counts: Vec<u64>,
}

/// Strata of `{ |z| >= r0 }` with boundaries at `1 - |z| = t0, t0/2, t0/4, ...`
/// down to `t_min`, plus a last stratum reaching the circle.
pub(crate) fn geometric_strata(r0: f64, t_min: f64) -> Vec<PolarBox> {
    let t0 = (1.0 - r0).clamp(0.0, 1.0);
    let mut edges = alloc::vec![t0];
    let mut t = t0;
    while t > t_min && edges.len() < MAX_STRATA {
        t *= 0.5;
        edges.push(t);
    }
    let mut out: Vec<PolarBox> =
        edges.windows(2).map(|w| PolarBox { r0: 1.0 - w[0], r1: 1.0 - w[1], ..PolarBox::full() }).collect();
    out.push(PolarBox { r0: 1.0 - edges[edges.len() - 1], r1: 1.0, ..PolarBox::full() });
    out[0].r0 = r0;
    out
}

impl DiskTally {
    /// Draw `total` samples of `A_alpha` spread evenly over `strata` and let
    /// `classify(z, hits)` increment the cells hit by `z`.
    pub fn run<F>(alpha: f64, strata: &[PolarBox], total: usize, seed: u64, cells: usize, classify: F) -> Self
    where
        F: Fn(C64, &mut [u64]) + Sync + Send,
    {
        let k = strata.len();
        let sizes = allocation(total, k);
        let masses: Vec<f64> = strata.iter().map(|s| s.mass(alpha)).collect();
        let mut jobs = Vec::new();
        for (s, &n) in sizes.iter().enumerate() {
            for b in 0..n.div_ceil(BLOCK) {
                jobs.push((s, b, BLOCK.min(n - b * BLOCK)));
            }
        }
        let counts = sum_counts(jobs.len(), k * cells, |i, acc| {
            let (s, b, n) = jobs[i];
            let mut r = rng::stream(seed, rng::stream_id(s, b));
            let slot = &mut acc[s * cells..(s + 1) * cells];
            for _ in 0..n {
                classify(strata[s].draw(alpha, &mut r), slot);
            }
        });
        Self { masses, sizes, cells, counts }
    }

    pub fn hits(&self, cell: usize) -> u64 {
        (0..self.sizes.len()).map(|s| self.counts[s * self.cells + cell]).sum()
    }

    pub fn samples(&self) -> usize {
        self.sizes.iter().sum()
    }

    pub fn estimate(&self, cell: usize) -> Estimate {
        let mut vals = Vec::with_capacity(self.sizes.len());
        let mut vars = Vec::with_capacity(self.sizes.len());
        for (s, &n) in self.sizes.iter().enumerate() {
            if n == 0 {
                continue;
            }
            let p = self.counts[s * self.cells + cell] as f64 / n as f64;
            vals.push(self.masses[s] * p);
            vars.push(self.masses[s] * self.masses[s] * p * (1.0 - p) / n as f64);
        }
        Estimate {
            value: pairwise_sum(&vals),
            error_bar: sqrt(pairwise_sum(&vars)),
            samples_used: self.samples(),
            method: Method::MonteCarlo,
        }
    }
}
