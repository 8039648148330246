//! Dyadic analysis of `|f|` on `Omega` for `f: Pi+ -> Pi+`: conditional
//! expectations, the dyadic maximal function, the Calderon-Zygmund stopping
//! time decomposition and the audits built on it.
//!
//! Square averages come from adaptive Gauss-Legendre quadrature. Comparisons
//! against the threshold `1` use a dead band of one quadrature error: a square
//! stops when `avg - err > 1` and is known not to stop when `avg + err <= 1`.
//!
//! Squares off the imaginary axis are pruned with Harnack's inequality: on
//! `Q ⊂ Delta(c, s)` every average of `|f|` is at most `M_s |f(c)|`, so when
//! that bound is at most one no descendant can stop.

use alloc::collections::VecDeque;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::map_blocks;
use crate::geometry::{
    dyadic_pseudo_radius, half_plane_disk_point, harnack_constant, non_touching_radius, ComplexPoint, Domain,
    DyadicIndex, Rect, Region,
};
use crate::math::{fabs, pow, PI};
use crate::measures::{integrate, Estimate, IntegrationConfig, MeasureKind, Method, WeightParameter};
use crate::pullback::level_set_table;
use crate::quadrature::{integrate_2d_with, Cell, GaussLegendre, QuadOptions};
use crate::rng;
use crate::selfmaps::HoloMap;
use crate::C64;

/// Settings of the dyadic machinery.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CzConfig {
    /// Deepest generation examined.
    pub n_max: u32,
    /// Absolute tolerance on each square average.
    pub avg_tol: f64,
    pub max_subdivisions: usize,
    pub order: usize,
}

impl Default for CzConfig {
    fn default() -> Self {
        Self { n_max: 12, avg_tol: 1e-9, max_subdivisions: 4000, order: 8 }
    }
}

impl CzConfig {
    fn validate(&self) -> Result<()> {
        if self.n_max > crate::geometry::MAX_GENERATION {
            return Err(Error::InvalidParameter(alloc::format!("n_max {} too deep", self.n_max)));
        }
        if !(self.avg_tol > 0.0) || self.max_subdivisions == 0 || self.order < 2 {
            return Err(Error::InvalidParameter("invalid quadrature settings".into()));
        }
        Ok(())
    }

    fn options(&self, tol: f64) -> QuadOptions {
        QuadOptions { order: self.order, rel_tol: 1e-300, abs_tol: tol, max_subdivisions: self.max_subdivisions }
    }
}

fn require_half_plane_self_map(f: &HoloMap) -> Result<()> {
    if f.domain() != Domain::HalfPlane || f.codomain() != Domain::HalfPlane {
        return Err(Error::IncompatibleChain(alloc::format!("{f} is not a self-map of the half-plane")));
    }
    Ok(())
}

/// Average of `|f|` over a rectangle with its quadrature error.
fn rect_average(f: &HoloMap, b: &Rect, rule: &GaussLegendre, cfg: &CzConfig, tol: f64) -> Result<(f64, f64)> {
    let area = b.area();
    let out = integrate_2d_with(
        rule,
        |x, y| f.eval_raw(C64::new(x, y)).norm(),
        Cell::new(b.x0, b.x1, b.y0, b.y1),
        &cfg.options(tol * area),
    );
    if !out.converged {
        return Err(Error::QuadratureFailure(alloc::format!(
            "average over [{}, {}] x [{}, {}]: error {} after {} subdivisions",
            b.x0,
            b.x1,
            b.y0,
            b.y1,
            out.error / area,
            out.subdivisions
        )));
    }
    Ok((out.value / area, out.error / area))
}

fn square_average(f: &HoloMap, l: &DyadicIndex, rule: &GaussLegendre, cfg: &CzConfig) -> Result<(f64, f64)> {
    rect_average(f, &l.bounds(), rule, cfg, cfg.avg_tol)
}

/// `E_n |f|` as a table of square averages, indexed `j * 2^n + k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PiecewiseDyadicFunction {
    pub generation: u32,
    pub values: Vec<f64>,
    pub errors: Vec<f64>,
}

impl PiecewiseDyadicFunction {
    pub fn side_count(&self) -> u64 {
        1u64 << self.generation
    }

    pub fn value(&self, j: u64, k: u64) -> f64 {
        self.values[(j * self.side_count() + k) as usize]
    }

    pub fn error(&self, j: u64, k: u64) -> f64 {
        self.errors[(j * self.side_count() + k) as usize]
    }

    /// Value at a point of `Omega` (half-open squares).
    pub fn at(&self, z: C64) -> Option<f64> {
        DyadicIndex::containing(z, self.generation).map(|l| self.value(l.j, l.k))
    }
}

/// Table of `E_n |f|` on generation `n`.
pub fn conditional_expectation(f: &HoloMap, n: u32, cfg: &CzConfig) -> Result<PiecewiseDyadicFunction> {
    cfg.validate()?;
    require_half_plane_self_map(f)?;
    if n > cfg.n_max {
        return Err(Error::InvalidParameter(alloc::format!("generation {n} beyond n_max = {}", cfg.n_max)));
    }
    let rule = GaussLegendre::new(cfg.order);
    let m = 1u64 << n;
    let rows = map_blocks(m as usize, |j| {
        (0..m).map(|k| square_average(f, &DyadicIndex { n, j: j as u64, k }, &rule, cfg)).collect::<Result<Vec<_>>>()
    });
    let mut values = Vec::with_capacity((m * m) as usize);
    let mut errors = Vec::with_capacity((m * m) as usize);
    for row in rows {
        for (v, e) in row? {
            values.push(v);
            errors.push(e);
        }
    }
    Ok(PiecewiseDyadicFunction { generation: n, values, errors })
}

/// `Mf(z) = max_{n <= n_max} E_n|f|(z)`.
pub fn maximal_function(f: &HoloMap, z: &ComplexPoint, n_max: u32, cfg: &CzConfig) -> Result<f64> {
    require_half_plane_self_map(f)?;
    let w = z.expect(Domain::HalfPlane)?;
    if !Region::OmegaBox.contains_raw(w) {
        return Err(Error::InvalidPoint { re: w.re, im: w.im, domain: "Omega" });
    }
    if n_max > crate::geometry::MAX_GENERATION {
        return Err(Error::InvalidParameter(alloc::format!("n_max {n_max} too deep")));
    }
    if DyadicIndex::on_grid_line(w, n_max) {
        return Err(Error::OnDyadicBoundary);
    }
    let rule = GaussLegendre::new(cfg.order);
    let mut best = 0.0f64;
    for n in 0..=n_max {
        let l = DyadicIndex::containing(w, n).ok_or(Error::OnDyadicBoundary)?;
        best = best.max(square_average(f, &l, &rule, cfg)?.0);
    }
    Ok(best)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StoppingSquare {
    pub index: DyadicIndex,
    pub average: f64,
    pub error: f64,
    /// `|f(c_l)|`.
    pub center_value: f64,
}

/// What is left undecided at the depth cap.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Residual {
    /// Generation-`n_max` squares with average `<= 1` that could not be pruned.
    pub leaves: usize,
    /// Of those, the ones where a sampled value of `|f|` exceeds 1, so some of
    /// `{Mf > 1}` may lie below the cap.
    pub suspect_leaves: usize,
    /// Total area of the suspect leaves.
    pub suspect_area: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CzResult {
    /// Sorted by `(n, j, k)`.
    pub squares: Vec<StoppingSquare>,
    /// Squares whose average stayed within one error of 1 at the tightest tolerance.
    pub ambiguous: Vec<DyadicIndex>,
    pub residual: Residual,
    pub root_average: f64,
    pub n_max: u32,
    pub avg_tol: f64,
    /// Sum of the quadrature errors of the stopping squares.
    pub total_error: f64,
    pub squares_examined: usize,
    pub squares_pruned: usize,
}

#[derive(Clone, Copy, PartialEq)]
enum Side {
    Above,
    Below,
    Ambiguous,
}

fn classify(avg: f64, err: f64) -> Side {
    if avg - err > 1.0 {
        Side::Above
    } else if avg + err <= 1.0 {
        Side::Below
    } else {
        Side::Ambiguous
    }
}

/// Average with the dead band resolved by tightening the tolerance.
fn resolved_average(f: &HoloMap, l: &DyadicIndex, rule: &GaussLegendre, cfg: &CzConfig) -> Result<(f64, f64, Side)> {
    let (mut avg, mut err) = square_average(f, l, rule, cfg)?;
    let mut side = classify(avg, err);
    let mut tol = cfg.avg_tol;
    for _ in 0..3 {
        if side != Side::Ambiguous {
            break;
        }
        tol *= 1e-2;
        match rect_average(f, &l.bounds(), rule, cfg, tol) {
            Ok((a, e)) => {
                avg = a;
                err = e;
                side = classify(a, e);
            }
            Err(_) => break,
        }
    }
    Ok((avg, err, side))
}

/// Harnack bound on every average of `|f|` over sub-squares of `l`.
fn harnack_ceiling(f: &HoloMap, l: &DyadicIndex) -> f64 {
    if l.touches_boundary() {
        return f64::INFINITY;
    }
    harnack_constant(dyadic_pseudo_radius(l)) * f.eval_raw(l.center()).norm()
}

/// Calderon-Zygmund decomposition of `|f|` restricted to `Omega` at level 1.
pub fn cz_decompose(f: &HoloMap, cfg: &CzConfig) -> Result<CzResult> {
    cfg.validate()?;
    require_half_plane_self_map(f)?;
    let rule = GaussLegendre::new(cfg.order);
    let root = DyadicIndex::root();
    let (root_avg, root_err) = square_average(f, &root, &rule, cfg)?;
    if root_avg + root_err > 1.0 {
        return Err(Error::RootAverageExceedsOne(root_avg));
    }
    let mut squares = Vec::new();
    let mut ambiguous = Vec::new();
    let mut leaves = Vec::new();
    let mut examined = 1usize;
    let mut pruned = 0usize;
    let mut queue = VecDeque::from([root]);
    while !queue.is_empty() {
        // Process one breadth-first layer in parallel.
        let layer: Vec<DyadicIndex> = queue.drain(..).collect();
        let results = map_blocks(layer.len(), |i| {
            let parent = layer[i];
            if parent.n >= cfg.n_max {
                return Ok(Vec::new());
            }
            parent
                .children()
                .iter()
                .map(|c| resolved_average(f, c, &rule, cfg).map(|(a, e, s)| (*c, a, e, s)))
                .collect::<Result<Vec<_>>>()
        });
        for (i, r) in results.into_iter().enumerate() {
            let kids = r?;
            if layer[i].n >= cfg.n_max {
                leaves.push(layer[i]);
                continue;
            }
            for (c, avg, err, side) in kids {
                examined += 1;
                match side {
                    Side::Above => squares.push(StoppingSquare {
                        index: c,
                        average: avg,
                        error: err,
                        center_value: f.eval_raw(c.center()).norm(),
                    }),
                    Side::Below | Side::Ambiguous => {
                        if side == Side::Ambiguous {
                            ambiguous.push(c);
                        }
                        if harnack_ceiling(f, &c) < 1.0 - 1e-9 {
                            pruned += 1;
                        } else {
                            queue.push_back(c);
                        }
                    }
                }
            }
        }
    }
    squares.sort_by_key(|s| (s.index.n, s.index.j, s.index.k));
    ambiguous.sort_by_key(|l| (l.n, l.j, l.k));
    let residual = residual_of(f, &leaves);
    Ok(CzResult {
        total_error: squares.iter().map(|s| s.error).sum(),
        squares,
        ambiguous,
        residual,
        root_average: root_avg,
        n_max: cfg.n_max,
        avg_tol: cfg.avg_tol,
        squares_examined: examined,
        squares_pruned: pruned,
    })
}

/// Sample `|f|` on a 5x5 lattice of each leaf.
fn residual_of(f: &HoloMap, leaves: &[DyadicIndex]) -> Residual {
    let mut suspect = 0usize;
    let mut area = 0.0;
    for l in leaves {
        let b = l.bounds();
        let hot = (0..5).any(|i| {
            (0..5).any(|k| {
                let z = C64::new(
                    b.x0 + (b.x1 - b.x0) * (i as f64 + 0.5) / 5.0,
                    b.y0 + (b.y1 - b.y0) * (k as f64 + 0.5) / 5.0,
                );
                f.eval_raw(z).norm() > 1.0
            })
        });
        if hot {
            suspect += 1;
            area += b.area();
        }
    }
    Residual { leaves: leaves.len(), suspect_leaves: suspect, suspect_area: area }
}

/// How a precision region is built.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum PrecisionShape {
    /// `R_l = Q_l` (square off the axis).
    Square,
    /// `R_l = Delta(c_l, 1/4)` (square on the axis).
    PseudoDisk { radius: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrecisionRegion {
    pub index: DyadicIndex,
    pub shape: PrecisionShape,
    pub tau_region: Estimate,
    pub tau_square: Estimate,
    /// `tau(R_l) / tau(Q_l)`.
    pub ratio: f64,
    /// `mu_alpha(R_l) / mu_alpha(Q_l)`.
    pub mu_ratio: f64,
    /// Lower constant `delta_0` guaranteed by Harnack on `R_l`.
    pub delta0: f64,
    /// Smallest `|f(z)| / |f(c_l)|` over samples of `R_l`.
    pub min_sampled_ratio: f64,
    /// Every sample of `R_l` fell inside `Q_l`.
    pub inside: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrecisionReport {
    pub regions: Vec<PrecisionRegion>,
    /// `min_l tau(R_l) / tau(Q_l)`.
    pub c_emp: Option<f64>,
    /// `mu_alpha(Delta(1, 1/4)) / mu_alpha(Omega)`.
    pub c_axis: Estimate,
}

/// Pseudo-hyperbolic radius of the axis-touching precision regions.
pub const AXIS_RADIUS: f64 = 0.25;

/// Affine map of `Omega` onto the axis-touching square `l`: `z -> h z + i b`.
fn axis_square_scale(l: &DyadicIndex) -> (f64, f64) {
    let c = l.center();
    (c.re, c.im)
}

/// Precision regions `R_l` of the stopping squares and their masses.
pub fn precision_regions(
    f: &HoloMap,
    result: &CzResult,
    alpha: WeightParameter,
    cfg: &IntegrationConfig,
) -> Result<PrecisionReport> {
    require_half_plane_self_map(f)?;
    let a = alpha.value();
    let mu = MeasureKind::MuX(alpha);
    let tau = MeasureKind::TauT(alpha);
    let one = ComplexPoint::half_plane(1.0, 0.0)?;
    let disk = Region::pseudo_disk(&one, AXIS_RADIUS)?;
    let mu_disk = integrate(&mu, &disk, &IntegrationConfig { method: Method::MonteCarlo, ..*cfg })?;
    let mu_omega = pow(2.0, a + 1.0) / (a + 1.0) * 2.0;
    let c_axis = Estimate { value: mu_disk.value / mu_omega, error_bar: mu_disk.error_bar / mu_omega, ..mu_disk };
    let quad = IntegrationConfig { method: Method::AdaptiveQuadrature, rel_tol: 1e-9, abs_tol: 1e-15, ..*cfg };
    let mut regions = Vec::with_capacity(result.squares.len());
    for (i, s) in result.squares.iter().enumerate() {
        let l = s.index;
        let square = Region::DyadicSquare(l);
        let tau_square = integrate(&tau, &square, &quad)?;
        let fc = f.eval_raw(l.center()).norm();
        let seed = rng::derive_seed(cfg.seed, i as u64);
        let mut r = rng::stream(seed, 0);
        let (shape, tau_region, mu_ratio, delta0, samples): (_, _, _, _, Vec<C64>) = if l.touches_boundary() {
            let (h, b) = axis_square_scale(&l);
            let center = ComplexPoint::half_plane(h, b)?;
            let reg = Region::pseudo_disk(&center, AXIS_RADIUS)?;
            let t = integrate(&tau, &reg, &IntegrationConfig { method: Method::MonteCarlo, seed, ..*cfg })?;
            let pts = (0..256).map(|_| half_plane_disk_point(center.z(), rng::in_disk(&mut r, AXIS_RADIUS))).collect();
            (
                PrecisionShape::PseudoDisk { radius: AXIS_RADIUS },
                t,
                c_axis.value,
                1.0 / harnack_constant(AXIS_RADIUS),
                pts,
            )
        } else {
            let bb = l.bounds();
            let pts = (0..256)
                .map(|_| {
                    C64::new(
                        bb.x0 + (bb.x1 - bb.x0) * rng::uniform(&mut r),
                        bb.y0 + (bb.y1 - bb.y0) * rng::uniform(&mut r),
                    )
                })
                .collect();
            (PrecisionShape::Square, tau_square, 1.0, 1.0 / harnack_constant(non_touching_radius()), pts)
        };
        let bounds = l.bounds();
        let inside = samples.iter().all(|z| bounds.contains(*z));
        let min_sampled_ratio = samples.iter().map(|z| f.eval_raw(*z).norm() / fc).fold(f64::INFINITY, f64::min);
        regions.push(PrecisionRegion {
            index: l,
            shape,
            ratio: tau_region.value / tau_square.value,
            tau_region,
            tau_square,
            mu_ratio,
            delta0,
            min_sampled_ratio,
            inside,
        });
    }
    let c_emp = regions.iter().map(|r| r.ratio).reduce(f64::min);
    Ok(PrecisionReport { regions, c_emp, c_axis })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanValueAudit {
    pub average: f64,
    pub error: f64,
    pub center_value: f64,
    /// `average >= (pi/4) |f(c)| - tol`.
    pub lower_ok: bool,
    /// `average / ((pi/4) |f(c)|)`.
    pub ratio: f64,
}

/// Compare the average of `|f|` over a square with `(pi/4) |f(center)|`.
pub fn mean_value_audit(f: &HoloMap, q: &Rect, cfg: &CzConfig) -> Result<MeanValueAudit> {
    require_half_plane_self_map(f)?;
    if !(q.x0 >= 0.0) || q.area() <= 0.0 {
        return Err(Error::InvalidParameter("square must lie in the closed half-plane".into()));
    }
    let rule = GaussLegendre::new(cfg.order);
    let (average, error) = rect_average(f, q, &rule, cfg, cfg.avg_tol)?;
    let center_value = f.eval_raw(q.center()).norm();
    let floor = PI / 4.0 * center_value;
    Ok(MeanValueAudit {
        average,
        error,
        center_value,
        lower_ok: average >= floor - error - cfg.avg_tol,
        ratio: average / floor,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RemarkReport {
    pub t: Vec<f64>,
    /// `sigma(t) = (1/4) int_{[-1,1]^2} |f(1 + t x + i t y)| dx dy`.
    pub sigma: Vec<f64>,
    pub sigma_error: Vec<f64>,
    /// `(1/4) int (x^4 + y^4 - 6 x^2 y^2) / 16` by quadrature.
    pub polynomial_integral: f64,
    /// Central difference of `s -> (1/4) int exp((s/16)(x^4 + y^4 - 6x^2y^2))` at 0.
    pub tau_prime_fd: f64,
    /// Richardson limit of `(sigma(t) - 1) / t^4`.
    pub sigma_quartic_coefficient: f64,
    /// Smallest grid `t` with `sigma(t) < 1`.
    pub witness: Option<f64>,
}

/// The averages of `exp((Tz)^4)` over small squares centred at 1 fall below `|f(1)| = 1`.
pub fn remark_counterexample(t_grid: &[f64]) -> Result<RemarkReport> {
    if t_grid.is_empty() || t_grid.iter().any(|t| !(*t > 0.0 && *t <= 0.5)) {
        return Err(Error::InvalidGrid("t grid must be a nonempty subset of (0, 1/2]".into()));
    }
    let f = HoloMap::exp_quartic();
    let rule = GaussLegendre::new(10);
    let opts = QuadOptions { order: 10, rel_tol: 1e-15, abs_tol: 1e-15, max_subdivisions: 2000 };
    let unit = Cell::new(-1.0, 1.0, -1.0, 1.0);
    let sigma_at = |t: f64| {
        let o = integrate_2d_with(&rule, |x, y| f.eval_raw(C64::new(1.0 + t * x, t * y)).norm(), unit, &opts);
        (o.value / 4.0, o.error / 4.0)
    };
    let mut t: Vec<f64> = t_grid.to_vec();
    t.sort_by(f64::total_cmp);
    let (sigma, sigma_error): (Vec<f64>, Vec<f64>) = t.iter().map(|&x| sigma_at(x)).unzip();
    let witness = t.iter().zip(&sigma).zip(&sigma_error).find(|((_, s), e)| **s + **e < 1.0).map(|((t, _), _)| *t);

    let poly = |x: f64, y: f64| (x * x * x * x + y * y * y * y - 6.0 * x * x * y * y) / 16.0;
    let polynomial_integral = integrate_2d_with(&rule, poly, unit, &opts).value / 4.0;
    let tau = |s: f64| integrate_2d_with(&rule, |x, y| libm::exp(s * poly(x, y)), unit, &opts).value / 4.0;
    let ds = 1e-3;
    let tau_prime_fd = (tau(ds) - tau(-ds)) / (2.0 * ds);
    // sigma(t) = 1 - t^4/60 + O(t^6): eliminate the t^2 correction.
    let q = |x: f64| (sigma_at(x).0 - 1.0) / (x * x * x * x);
    let (t1, t2) = (0.1, 0.05);
    let sigma_quartic_coefficient = (4.0 * q(t2) - q(t1)) / 3.0;
    Ok(RemarkReport { t, sigma, sigma_error, polynomial_integral, tau_prime_fd, sigma_quartic_coefficient, witness })
}

/// Center bound on the stopping squares: `|f(c_l)| <= (4/pi) avg <= 16/pi`.
pub const CENTER_BOUND: f64 = 16.0 / PI;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainAuditReport {
    pub alpha: f64,
    pub symbol: String,
    pub stopping_squares: usize,
    /// `sum_l tau(Q_l) = tau({Mf > 1} ∩ Omega)` up to the residual.
    pub tau_stopping: f64,
    pub lambda: Vec<f64>,
    /// `tau({|f| > lambda} ∩ Omega)`.
    pub lhs: Vec<Estimate>,
    /// `lhs * lambda^(alpha+2) / tau_stopping`: the measured `C_alpha` per level,
    /// absent when nothing stops.
    pub upper_constants: Vec<Option<f64>>,
    /// Largest `avg_l / ((pi/4)|f(c_l)|)`: the measured mean-value constant.
    pub mean_value_constant: f64,
    pub delta0: f64,
    /// `(4 / (pi C)) delta0`.
    pub delta1: f64,
    /// `tau({|f| > delta1})`.
    pub tau_delta1: Estimate,
    /// `tau({|f| > delta1}) / tau_stopping`, absent when nothing stops.
    pub lower_constant: Option<f64>,
    /// Largest `|f(c_l)|`.
    pub max_center_value: f64,
    pub center_bound_ok: bool,
}

/// Check the two inequalities chained in the localized tail estimate.
pub fn theo_clef_chain_audit(
    f: &HoloMap,
    alpha: WeightParameter,
    lambdas: &[f64],
    cz_cfg: &CzConfig,
    cfg: &IntegrationConfig,
) -> Result<ChainAuditReport> {
    cfg.validate()?;
    if lambdas.is_empty() || lambdas.iter().any(|l| !(*l >= 1.0)) {
        return Err(Error::InvalidGrid("levels must be at least 1".into()));
    }
    let cz = cz_decompose(f, cz_cfg)?;
    let a = alpha.value();
    let tau = MeasureKind::TauT(alpha);
    let quad = IntegrationConfig { method: Method::AdaptiveQuadrature, rel_tol: 1e-9, abs_tol: 1e-15, ..*cfg };
    let mut tau_stopping = 0.0;
    for s in &cz.squares {
        tau_stopping += integrate(&tau, &Region::DyadicSquare(s.index), &quad)?.value;
    }
    let omega = Region::OmegaBox;
    let mut levels = lambdas.to_vec();
    let mean_value_constant = cz.squares.iter().map(|s| s.average / (PI / 4.0 * s.center_value)).fold(0.0, f64::max);
    let delta0 = (1.0 / harnack_constant(AXIS_RADIUS)).min(1.0 / harnack_constant(non_touching_radius()));
    let delta1 = if mean_value_constant > 0.0 { 4.0 / (PI * mean_value_constant) * delta0 } else { delta0 };
    levels.push(delta1);
    let table = level_set_table(f, a, &levels, Some(&omega), cfg);
    let whole =
        level_set_table(f, a, &[delta1], None, &IntegrationConfig { seed: rng::derive_seed(cfg.seed, 1), ..*cfg });
    let n = lambdas.len();
    let lhs: Vec<Estimate> = table[..n].iter().map(|t| t.0).collect();
    let upper_constants = lambdas
        .iter()
        .zip(&lhs)
        .map(|(l, e)| (tau_stopping > 0.0).then(|| e.value * pow(*l, a + 2.0) / tau_stopping))
        .collect();
    let tau_delta1 = whole[0].0;
    let max_center_value = cz.squares.iter().map(|s| s.center_value).fold(0.0, f64::max);
    Ok(ChainAuditReport {
        alpha: a,
        symbol: alloc::string::ToString::to_string(f),
        stopping_squares: cz.squares.len(),
        tau_stopping,
        lambda: lambdas.to_vec(),
        lhs,
        upper_constants,
        mean_value_constant,
        delta0,
        delta1,
        lower_constant: (tau_stopping > 0.0).then(|| tau_delta1.value / tau_stopping),
        tau_delta1,
        max_center_value,
        center_bound_ok: max_center_value <= CENTER_BOUND + 1e-9,
    })
}

/// Brute-force stopping squares from full tables of generations `0..=n_max`.
pub fn brute_force_stopping_squares(f: &HoloMap, cfg: &CzConfig) -> Result<Vec<DyadicIndex>> {
    let tables = (0..=cfg.n_max).map(|n| conditional_expectation(f, n, cfg)).collect::<Result<Vec<_>>>()?;
    let mut out = Vec::new();
    for n in 1..=cfg.n_max {
        for l in DyadicIndex::generation(n) {
            let t = &tables[n as usize];
            if classify(t.value(l.j, l.k), t.error(l.j, l.k)) != Side::Above {
                continue;
            }
            let mut anc = l.parent();
            let mut clear = true;
            while let Some(p) = anc {
                let tp = &tables[p.n as usize];
                if classify(tp.value(p.j, p.k), tp.error(p.j, p.k)) == Side::Above {
                    clear = false;
                    break;
                }
                anc = p.parent();
            }
            if clear {
                out.push(l);
            }
        }
    }
    Ok(out)
}

/// Tower property defect: largest gap between `E_{n-1}` and the mean of its
/// four children in `E_n`, minus the summed quadrature errors.
pub fn tower_defect(parent: &PiecewiseDyadicFunction, child: &PiecewiseDyadicFunction) -> f64 {
    let m = parent.side_count();
    let mut worst = f64::NEG_INFINITY;
    for j in 0..m {
        for k in 0..m {
            let (mut mean, mut err) = (0.0, parent.error(j, k));
            for (dj, dk) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
                mean += 0.25 * child.value(2 * j + dj, 2 * k + dk);
                err += 0.25 * child.error(2 * j + dj, 2 * k + dk);
            }
            worst = worst.max(fabs(mean - parent.value(j, k)) - err);
        }
    }
    worst
}
