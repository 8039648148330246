//! Globally adaptive tensor Gauss-Legendre quadrature on rectangles.
//!
//! Each cell carries two estimates: the tensor rule on the cell itself and the
//! sum of the same rule over its four children. Their difference is the cell's
//! error indicator; the worst cell is split until the summed indicator meets the
//! tolerance. The reported error is that last refinement delta.

use alloc::collections::BinaryHeap;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::math::{cos, fabs, PI};

/// Gauss-Legendre nodes and weights on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre order must be positive");
        let mut nodes = alloc::vec![0.0; n];
        let mut weights = alloc::vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            // Tricomi initial guess, then Newton on P_n.
            let mut x = cos(PI * (i as f64 + 0.75) / (n as f64 + 0.5));
            let mut dp = 1.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if fabs(dx) < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    /// Tensor rule over `[x0,x1] x [y0,y1]`.
    pub fn tensor<F: Fn(f64, f64) -> f64>(&self, f: &F, r: &Cell) -> f64 {
        let hx = 0.5 * (r.x1 - r.x0);
        let hy = 0.5 * (r.y1 - r.y0);
        let cx = 0.5 * (r.x1 + r.x0);
        let cy = 0.5 * (r.y1 + r.y0);
        let mut acc = 0.0;
        for (xi, wi) in self.nodes.iter().zip(&self.weights) {
            let x = cx + hx * xi;
            let mut row = 0.0;
            for (yj, wj) in self.nodes.iter().zip(&self.weights) {
                row += wj * f(x, cy + hy * yj);
            }
            acc += wi * row;
        }
        acc * hx * hy
    }
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Axis-aligned integration cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Cell {
    pub fn new(x0: f64, x1: f64, y0: f64, y1: f64) -> Self {
        Self { x0, x1, y0, y1 }
    }

    fn split(&self) -> [Cell; 4] {
        let xm = 0.5 * (self.x0 + self.x1);
        let ym = 0.5 * (self.y0 + self.y1);
        [
            Cell::new(self.x0, xm, self.y0, ym),
            Cell::new(xm, self.x1, self.y0, ym),
            Cell::new(self.x0, xm, ym, self.y1),
            Cell::new(xm, self.x1, ym, self.y1),
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOutcome {
    pub value: f64,
    /// Sum of |fine - coarse| over the final cells.
    pub error: f64,
    pub subdivisions: usize,
    pub evaluations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    pub order: usize,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self { order: 8, rel_tol: 1e-10, abs_tol: 1e-12, max_subdivisions: 20_000 }
    }
}

struct Entry {
    cell: Cell,
    children: [f64; 4],
    fine: f64,
    err: f64,
}

impl PartialEq for Entry {
    fn eq(&self, other: &Self) -> bool {
        self.err.total_cmp(&other.err) == Ordering::Equal
    }
}
impl Eq for Entry {}
impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

/// Adaptive integration of `f` over `cell`.
pub fn integrate_2d<F: Fn(f64, f64) -> f64>(f: F, cell: Cell, opts: &QuadOptions) -> QuadOutcome {
    let rule = GaussLegendre::new(opts.order);
    integrate_2d_with(&rule, f, cell, opts)
}

pub fn integrate_2d_with<F: Fn(f64, f64) -> f64>(
    rule: &GaussLegendre,
    f: F,
    cell: Cell,
    opts: &QuadOptions,
) -> QuadOutcome {
    let per_rule = rule.nodes.len() * rule.nodes.len();
    let mut evaluations = 0usize;
    let make = |c: Cell, coarse: f64, evals: &mut usize| -> Entry {
        let kids = c.split();
        let mut children = [0.0; 4];
        for (v, k) in children.iter_mut().zip(kids.iter()) {
            *v = rule.tensor(&f, k);
        }
        *evals += 4 * per_rule;
        let fine = children.iter().sum::<f64>();
        Entry { cell: c, children, fine, err: fabs(fine - coarse) }
    };

    let coarse = rule.tensor(&f, &cell);
    evaluations += per_rule;
    let mut heap = BinaryHeap::new();
    heap.push(make(cell, coarse, &mut evaluations));
    let mut subdivisions = 0usize;

    loop {
        // Totals are recomputed from scratch to avoid drift in running sums.
        let (value, error) = heap.iter().fold((0.0, 0.0), |(v, e), en| (v + en.fine, e + en.err));
        let target = opts.abs_tol.max(opts.rel_tol * fabs(value));
        let nonfinite = !value.is_finite() || !error.is_finite();
        if error <= target || subdivisions >= opts.max_subdivisions || nonfinite {
            return QuadOutcome { value, error, subdivisions, evaluations, converged: error <= target && !nonfinite };
        }
        let worst = heap.pop().expect("heap is never empty");
        for (k, &v) in worst.cell.split().iter().zip(worst.children.iter()) {
            heap.push(make(*k, v, &mut evaluations));
        }
        subdivisions += 1;
    }
}
