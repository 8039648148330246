//! Pull-backs of `A_alpha` under analytic maps: window masses, Carleson
//! profiles, the window scaling experiment and the level-set tail audits.
//!
//! All estimators in this module share samples. A set of `A_alpha` samples is
//! drawn once per experiment and every window or level set is a cell counted
//! on that set, so nested regions always get nested estimates.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{cayley_raw, mismatch, ComplexPoint, Domain, Region};
use crate::math::{atan2, ceil, fabs, pow, sqrt, tanh, PI, TAU};
use crate::measures::{self, level_set_inner_radius, Estimate, IntegrationConfig, MeasureKind, WeightParameter};
use crate::selfmaps::HoloMap;
use crate::stats::{least_squares_slope, loglog_slope};
use crate::tally::{geometric_strata, DiskTally};
use crate::C64;

/// Fewest hits a window needs before its mass enters a slope fit.
pub const MIN_HITS: u64 = 200;
/// A ratio is reported only when its denominator exceeds this many error bars.
pub const DENOMINATOR_SIGMAS: f64 = 5.0;

fn ang_dist(a: f64, b: f64) -> f64 {
    let mut d = fabs(a - b) % TAU;
    if d > PI {
        d = TAU - d;
    }
    d
}

fn require_self_map(phi: &HoloMap) -> Result<()> {
    if phi.domain() != Domain::Disk || phi.codomain() != Domain::Disk {
        return Err(Error::IncompatibleChain(format!("{phi} is not a self-map of the disk")));
    }
    Ok(())
}

/// Radius inside which `phi` cannot reach a window of size `h`.
fn window_inner_radius(phi: &HoloMap, h: f64) -> f64 {
    level_set_inner_radius(phi, 1.0 - h)
}

/// Innermost useful stratum edge for windows of size `h_min`: by Schwarz-Pick
/// the preimage of such a window sits where `1 - |z| <~ h_min (1+a)/(1-a)`.
fn window_t_min(phi: &HoloMap, h_min: f64) -> f64 {
    let a = phi.disk_center_modulus();
    0.25 * h_min * (1.0 - a) / (1.0 + a)
}

/// The circle points at which windows are probed.
#[derive(Debug, Clone)]
enum Probes {
    Uniform(usize),
    Angles(Vec<f64>),
}

impl Probes {
    fn len(&self) -> usize {
        match self {
            Probes::Uniform(n) => *n,
            Probes::Angles(a) => a.len(),
        }
    }

    fn angle(&self, j: usize) -> f64 {
        match self {
            Probes::Uniform(n) => TAU * j as f64 / *n as f64,
            Probes::Angles(a) => a[j],
        }
    }
}

/// Hit table of windows `W(xi_j, h_i)` for the pull-back of `A_alpha` by `phi`.
/// Cell layout: `i * probes + j`.
struct WindowTable {
    probes: Probes,
    tally: DiskTally,
}

impl WindowTable {
    fn build(phi: &HoloMap, alpha: f64, probes: Probes, sizes: &[f64], cfg: &IntegrationConfig) -> WindowTable {
        let h_max = sizes.iter().cloned().fold(0.0, f64::max);
        let h_min = sizes.iter().cloned().fold(1.0, f64::min);
        let strata = geometric_strata(window_inner_radius(phi, h_max), window_t_min(phi, h_min));
        let np = probes.len();
        let sizes_v = sizes.to_vec();
        let probes_c = probes.clone();
        let tally = DiskTally::run(alpha, &strata, cfg.sample_count, cfg.seed, sizes.len() * np, |z, hits| {
            let w = phi.eval_raw(z);
            let modulus = w.norm();
            let theta = atan2(w.im, w.re);
            for (i, &h) in sizes_v.iter().enumerate() {
                if modulus < 1.0 - h {
                    continue;
                }
                match &probes_c {
                    Probes::Uniform(n) => {
                        let step = TAU / *n as f64;
                        let lo = ceil((theta - h) / step) as i64 - 1;
                        let hi = ((theta + h) / step) as i64 + 1;
                        let span = (hi - lo + 1).min(*n as i64);
                        for jj in lo..lo + span {
                            let j = jj.rem_euclid(*n as i64) as usize;
                            if ang_dist(theta, step * j as f64) <= h {
                                hits[i * np + j] += 1;
                            }
                        }
                    }
                    Probes::Angles(a) => {
                        for (j, &t) in a.iter().enumerate() {
                            if ang_dist(theta, t) <= h {
                                hits[i * np + j] += 1;
                            }
                        }
                    }
                }
            }
        });
        WindowTable { probes, tally }
    }

    fn cell(&self, i: usize, j: usize) -> usize {
        i * self.probes.len() + j
    }
}

fn check_window_size(h: f64) -> Result<()> {
    if h > 0.0 && h < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("window size {h} not in (0,1)")))
    }
}

/// `A_alpha(phi^-1(W(xi, h)))`.
pub fn pullback_window_measure(
    phi: &HoloMap,
    alpha: WeightParameter,
    xi: &ComplexPoint,
    h: f64,
    cfg: &IntegrationConfig,
) -> Result<Estimate> {
    cfg.validate()?;
    require_self_map(phi)?;
    check_window_size(h)?;
    let x = xi.expect(Domain::Circle)?;
    let t = WindowTable::build(phi, alpha.value(), Probes::Angles(alloc::vec![atan2(x.im, x.re)]), &[h], cfg);
    let e = t.tally.estimate(0);
    if e.value > 0.0 && e.error_bar > cfg.rel_tol * e.value {
        return Err(Error::NonConvergence { value: e.value, error: e.error_bar });
    }
    Ok(e)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CarlesonProfile {
    pub alpha: f64,
    pub symbol: String,
    /// Strictly decreasing window sizes.
    pub h: Vec<f64>,
    pub rho: Vec<Estimate>,
    /// Probe angle achieving the maximum at each `h`.
    pub argmax_angle: Vec<f64>,
    /// Hits in the maximizing window.
    pub hits: Vec<u64>,
    /// `max { rho(t) / t^(alpha+2) : t <= h on the grid }`.
    pub k: Vec<f64>,
    pub xi_count: usize,
    /// All windows at the smallest `h` are empty.
    pub eventually_zero: bool,
    /// Sizes whose maximizing window has fewer than `MIN_HITS` hits.
    pub under_resolved: Vec<f64>,
}

impl CarlesonProfile {
    /// `rho(h) / h^(alpha+2)` at each grid point.
    pub fn normalized(&self) -> Vec<f64> {
        self.h.iter().zip(&self.rho).map(|(h, r)| r.value / pow(*h, self.alpha + 2.0)).collect()
    }
}

/// Default number of probe points for windows down to `h_min`.
pub fn default_xi_count(h_min: f64) -> usize {
    (ceil(4.0 * PI / h_min) as usize).max(64)
}

fn check_h_grid(h: &[f64], upper: f64) -> Result<()> {
    if h.is_empty() {
        return Err(Error::InvalidGrid("empty h grid".into()));
    }
    if let Some(bad) = h.iter().find(|x| !(**x > 0.0 && **x <= upper)) {
        return Err(Error::InvalidGrid(format!("h = {bad} outside (0, {upper}]")));
    }
    Ok(())
}

/// Carleson function `rho(h) = sup_xi A_alpha(phi^-1 W(xi, h))` on a grid of
/// sizes, with the sup over `xi_count` equally spaced probes.
pub fn carleson_profile(
    phi: &HoloMap,
    alpha: WeightParameter,
    h_grid: &[f64],
    xi_count: Option<usize>,
    cfg: &IntegrationConfig,
) -> Result<CarlesonProfile> {
    cfg.validate()?;
    require_self_map(phi)?;
    check_h_grid(h_grid, 0.5)?;
    if h_grid.iter().any(|h| *h >= 0.5) {
        return Err(Error::InvalidGrid("profile sizes must be below 1/2".into()));
    }
    let mut h: Vec<f64> = h_grid.to_vec();
    h.sort_by(|a, b| b.total_cmp(a));
    h.dedup();
    let h_min = h[h.len() - 1];
    let n = xi_count.unwrap_or_else(|| default_xi_count(h_min));
    if n < 8 {
        return Err(Error::InvalidGrid(format!("xi count {n} below 8")));
    }
    let table = WindowTable::build(phi, alpha.value(), Probes::Uniform(n), &h, cfg);
    let mut rho = Vec::with_capacity(h.len());
    let mut argmax_angle = Vec::with_capacity(h.len());
    let mut hits = Vec::with_capacity(h.len());
    for i in 0..h.len() {
        let mut best = (0usize, table.tally.estimate(table.cell(i, 0)));
        for j in 1..n {
            let e = table.tally.estimate(table.cell(i, j));
            if e.value > best.1.value {
                best = (j, e);
            }
        }
        argmax_angle.push(table.probes.angle(best.0));
        hits.push(table.tally.hits(table.cell(i, best.0)));
        rho.push(best.1);
    }
    let exponent = alpha.carleson_exponent();
    let mut k = alloc::vec![0.0; h.len()];
    let mut running = 0.0f64;
    for i in (0..h.len()).rev() {
        running = running.max(rho[i].value / pow(h[i], exponent));
        k[i] = running;
    }
    let under_resolved = h.iter().zip(&hits).filter(|(_, c)| **c < MIN_HITS).map(|(h, _)| *h).collect();
    Ok(CarlesonProfile {
        alpha: alpha.value(),
        symbol: phi.to_string(),
        eventually_zero: hits[hits.len() - 1] == 0,
        h,
        rho,
        argmax_angle,
        hits,
        k,
        xi_count: n,
        under_resolved,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingReport {
    pub alpha: f64,
    pub symbol: String,
    pub xi: C64,
    pub h: Vec<f64>,
    pub eps: Vec<f64>,
    /// `A_alpha(phi^-1 W(xi, h))` per `h`.
    pub base: Vec<Estimate>,
    /// `A_alpha(phi^-1 W(xi, eps h))`, indexed `[h][eps]`.
    pub window: Vec<Vec<Estimate>>,
    pub hits: Vec<Vec<u64>>,
    /// `window / (eps^(alpha+2) base)`, absent when the denominator is not
    /// resolved.
    pub ratio: Vec<Vec<Option<f64>>>,
    /// Log-log slope of `eps -> window` per `h`, over windows with enough hits.
    pub slope: Vec<Option<f64>>,
    /// Largest reported ratio per `h`.
    pub c_emp_per_h: Vec<Option<f64>>,
    pub c_emp: Option<f64>,
    pub alarm: f64,
    /// `(h index, eps index)` of ratios above `alarm`.
    pub alarms: Vec<(usize, usize)>,
    /// No window at the smallest `h` is hit: the symbol stays away from `xi`.
    pub degenerate: bool,
    pub samples: usize,
}

/// Window scaling experiment around one boundary point.
pub fn scaling_experiment(
    phi: &HoloMap,
    alpha: WeightParameter,
    xi: &ComplexPoint,
    h_grid: &[f64],
    eps_grid: &[f64],
    cfg: &IntegrationConfig,
    alarm: f64,
) -> Result<ScalingReport> {
    cfg.validate()?;
    require_self_map(phi)?;
    check_h_grid(h_grid, 0.25)?;
    if eps_grid.is_empty() || eps_grid.iter().any(|e| !(*e >= 0.05 && *e <= 1.0)) {
        return Err(Error::InvalidGrid("eps grid must lie in [0.05, 1]".into()));
    }
    let x = xi.expect(Domain::Circle)?;
    let mut sizes: Vec<f64> = h_grid.to_vec();
    for h in h_grid {
        for e in eps_grid {
            sizes.push(h * e);
        }
    }
    sizes.sort_by(f64::total_cmp);
    sizes.dedup();
    let table = WindowTable::build(phi, alpha.value(), Probes::Angles(alloc::vec![atan2(x.im, x.re)]), &sizes, cfg);
    let idx = |s: f64| sizes.iter().position(|v| *v == s).expect("size registered");
    let exponent = alpha.carleson_exponent();

    let mut base = Vec::new();
    let mut window = Vec::new();
    let mut hits = Vec::new();
    let mut ratio = Vec::new();
    let mut slope = Vec::new();
    let mut c_per_h = Vec::new();
    let mut alarms = Vec::new();
    for (hi, &h) in h_grid.iter().enumerate() {
        let b = table.tally.estimate(table.cell(idx(h), 0));
        let resolved = b.value > DENOMINATOR_SIGMAS * b.error_bar && b.value > 0.0;
        let mut row = Vec::new();
        let mut row_hits = Vec::new();
        let mut row_ratio = Vec::new();
        for (ei, &e) in eps_grid.iter().enumerate() {
            let cell = table.cell(idx(h * e), 0);
            let est = table.tally.estimate(cell);
            let r = resolved.then(|| est.value / (pow(e, exponent) * b.value));
            if let Some(r) = r {
                if r > alarm {
                    alarms.push((hi, ei));
                }
            }
            row.push(est);
            row_hits.push(table.tally.hits(cell));
            row_ratio.push(r);
        }
        let (fx, fy): (Vec<f64>, Vec<f64>) = eps_grid
            .iter()
            .zip(row.iter().zip(&row_hits))
            .filter(|(_, (_, c))| **c >= MIN_HITS)
            .map(|(e, (est, _))| (*e, est.value))
            .unzip();
        slope.push(loglog_slope(&fx, &fy));
        c_per_h.push(row_ratio.iter().flatten().cloned().reduce(f64::max));
        base.push(b);
        window.push(row);
        hits.push(row_hits);
        ratio.push(row_ratio);
    }
    let h_min = h_grid.iter().cloned().fold(1.0, f64::min);
    let degenerate = table.tally.hits(table.cell(idx(h_min), 0)) == 0;
    Ok(ScalingReport {
        alpha: alpha.value(),
        symbol: phi.to_string(),
        xi: x,
        h: h_grid.to_vec(),
        eps: eps_grid.to_vec(),
        base,
        window,
        hits,
        ratio,
        slope,
        c_emp: c_per_h.iter().flatten().cloned().reduce(f64::max),
        c_emp_per_h: c_per_h,
        alarm,
        alarms,
        degenerate,
        samples: table.tally.samples(),
    })
}

/// Measures of `{ |m| > lambda_i } ∩ region` for a whole grid of levels, on one
/// sample set. `m` acts on the disk (measure `A_alpha`) or on the half-plane
/// (measure `tau_alpha`, sampled as the image of `A_alpha` under `T`).
pub(crate) fn level_set_table(
    m: &HoloMap,
    alpha: f64,
    lambdas: &[f64],
    region: Option<&Region>,
    cfg: &IntegrationConfig,
) -> Vec<(Estimate, u64)> {
    let lam_min = lambdas.iter().cloned().fold(f64::INFINITY, f64::min);
    let lam_max = lambdas.iter().cloned().fold(0.0, f64::max);
    let r0 = level_set_inner_radius(m, lam_min);
    let a = m.disk_center_modulus();
    let edge = if m.codomain() == Domain::Disk { 1.0 - lam_max } else { 2.0 / (lam_max + 1.0) };
    let t_min = 0.25 * edge.max(1e-6) * (1.0 - a) / (1.0 + a);
    let strata = geometric_strata(r0, t_min);
    let half_plane = m.domain() == Domain::HalfPlane;
    let sq: Vec<f64> = lambdas.iter().map(|l| l * l).collect();
    let tally = DiskTally::run(alpha, &strata, cfg.sample_count, cfg.seed, lambdas.len(), |z, hits| {
        let p = if half_plane { cayley_raw(z) } else { z };
        if half_plane && !(p.re > 0.0) {
            return;
        }
        if let Some(r) = region {
            if !r.contains_raw(p) {
                return;
            }
        }
        let v = m.eval_raw(p).norm_sqr();
        for (i, l2) in sq.iter().enumerate() {
            if v > *l2 {
                hits[i] += 1;
            }
        }
    });
    (0..lambdas.len()).map(|i| (tally.estimate(i), tally.hits(i))).collect()
}

/// Measure of `{ z in region : |m(z)| > lambda }`.
///
/// Disk maps are integrated against `A_alpha` with Schwarz-Pick stratified
/// sampling. Half-plane maps against `tau_alpha` use the same sampler through
/// `T`; other half-plane measures go through [`measures::integrate`].
pub fn level_set_measure(
    m: &HoloMap,
    measure: &MeasureKind,
    lambda: f64,
    region: &Region,
    cfg: &IntegrationConfig,
) -> Result<Estimate> {
    cfg.validate()?;
    if !(lambda > 0.0) {
        return Err(Error::InvalidParameter(format!("level {lambda} must be positive")));
    }
    if region.ambient() != m.domain() {
        return Err(mismatch(m.domain(), region.ambient()));
    }
    if measure.support() != m.domain() {
        return Err(mismatch(m.domain(), measure.support()));
    }
    match measure {
        MeasureKind::BergmanA(a) | MeasureKind::TauT(a) => {
            Ok(level_set_table(m, a.value(), &[lambda], Some(region), cfg)[0].0)
        }
        _ => {
            let set = Region::intersect(alloc::vec![Region::level_set(m.clone(), lambda)?, region.clone()])?;
            measures::integrate(measure, &set, cfg)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AuditKind {
    /// `A({|g| > l}) <= C l^-(a+2) |g(0)|^(a+2)` for `g: D -> Pi+`.
    Starting,
    /// `tau({|f| > l}) <= C l^-(a+2) |f(1)|^(a+2)` for `f: Pi+ -> Pi+`.
    Global,
    /// `A({|g| > l}) <= K0 l^-(a+2) A({|g| > 1})` for `|g(0)| <= c0`.
    Reduction,
    /// `tau({|f| > l} ∩ Omega) <= K l^-(a+2) tau({|f| > 1} ∩ Omega)` for `|f(1)| <= c1`.
    TheoClef,
}

impl AuditKind {
    pub fn name(self) -> &'static str {
        match self {
            AuditKind::Starting => "starting",
            AuditKind::Global => "global",
            AuditKind::Reduction => "reduction",
            AuditKind::TheoClef => "theo-clef",
        }
    }
}

/// Default smallness bound on `|f(1)|` for the localized audit.
pub fn default_c1() -> f64 {
    0.9 * tanh(PI)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailAuditReport {
    pub kind: AuditKind,
    pub alpha: f64,
    pub symbol: String,
    pub lambda: Vec<f64>,
    /// Left-hand side measure per level.
    pub lhs: Vec<Estimate>,
    pub hits: Vec<u64>,
    /// `|g(0)|^(a+2)`, `|f(1)|^(a+2)` or the measure at level 1.
    pub rhs: f64,
    pub rhs_error: f64,
    /// `lhs * lambda^(a+2) / rhs`.
    pub ratio: Vec<f64>,
    /// The measured constant: the largest ratio.
    pub constant: f64,
    /// Least-squares slope of `log ratio` against `log lambda`, over levels with hits.
    pub trend_slope: Option<f64>,
    /// Whether the trend slope exceeds `TREND_LIMIT`.
    pub growth_flag: bool,
    /// `|g(0)|` or `|f(1)|`.
    pub anchor_modulus: f64,
}

/// Largest trend slope accepted as "bounded".
pub const TREND_LIMIT: f64 = 0.05;

/// Tail inequality audit over a grid of levels `lambda > 1`.
pub fn tail_inequality_audit(
    kind: AuditKind,
    m: &HoloMap,
    alpha: WeightParameter,
    lambdas: &[f64],
    cfg: &IntegrationConfig,
    c1: f64,
) -> Result<TailAuditReport> {
    cfg.validate()?;
    if lambdas.is_empty() || lambdas.iter().any(|l| !(*l > 1.0 && l.is_finite())) {
        return Err(Error::InvalidGrid("levels must exceed 1".into()));
    }
    let disk_side = matches!(kind, AuditKind::Starting | AuditKind::Reduction);
    let (want_domain, anchor) =
        if disk_side { (Domain::Disk, C64::new(0.0, 0.0)) } else { (Domain::HalfPlane, C64::new(1.0, 0.0)) };
    if m.domain() != want_domain || m.codomain() != Domain::HalfPlane {
        return Err(Error::IncompatibleChain(format!(
            "{} audit needs a map from the {} into the half-plane, got {m}",
            kind.name(),
            want_domain.name()
        )));
    }
    let anchor_modulus = m.eval_raw(anchor).norm();
    match kind {
        AuditKind::Reduction if anchor_modulus > tanh(PI) => {
            return Err(Error::PreconditionFailed(format!("|g(0)| = {anchor_modulus} exceeds tanh(pi)")));
        }
        AuditKind::TheoClef if anchor_modulus > c1 => {
            return Err(Error::PreconditionFailed(format!("|f(1)| = {anchor_modulus} exceeds c1 = {c1}")));
        }
        _ => {}
    }
    let a = alpha.value();
    let exponent = alpha.carleson_exponent();
    let normalized_by_level_one = matches!(kind, AuditKind::Reduction | AuditKind::TheoClef);
    let mut levels = lambdas.to_vec();
    if normalized_by_level_one {
        levels.push(1.0);
    }
    let omega = Region::OmegaBox;
    let region = (kind == AuditKind::TheoClef).then_some(&omega);
    let table = level_set_table(m, a, &levels, region, cfg);
    let (rhs, rhs_error) = if normalized_by_level_one {
        let e = table[table.len() - 1].0;
        (e.value, e.error_bar)
    } else {
        (pow(anchor_modulus, exponent), 0.0)
    };
    if !(rhs > 0.0) || (normalized_by_level_one && rhs <= DENOMINATOR_SIGMAS * rhs_error) {
        return Err(Error::DegenerateRhs);
    }
    let n = lambdas.len();
    let lhs: Vec<Estimate> = table[..n].iter().map(|t| t.0).collect();
    let hits: Vec<u64> = table[..n].iter().map(|t| t.1).collect();
    let ratio: Vec<f64> = lambdas.iter().zip(&lhs).map(|(l, e)| e.value * pow(*l, exponent) / rhs).collect();
    let (lx, ly): (Vec<f64>, Vec<f64>) = lambdas
        .iter()
        .zip(&ratio)
        .zip(&hits)
        .filter(|((_, r), c)| **r > 0.0 && **c > 0)
        .map(|((l, r), _)| (libm::log(*l), libm::log(*r)))
        .unzip();
    let trend_slope = least_squares_slope(&lx, &ly);
    Ok(TailAuditReport {
        kind,
        alpha: a,
        symbol: m.to_string(),
        lambda: lambdas.to_vec(),
        constant: ratio.iter().cloned().fold(0.0, f64::max),
        growth_flag: trend_slope.is_some_and(|s| s > TREND_LIMIT),
        trend_slope,
        lhs,
        hits,
        rhs,
        rhs_error,
        ratio,
        anchor_modulus,
    })
}

/// Relative distance in combined standard errors between two estimates.
pub fn sigma_distance(a: &Estimate, b: &Estimate) -> f64 {
    let s = sqrt(a.error_bar * a.error_bar + b.error_bar * b.error_bar);
    if s == 0.0 {
        if a.value == b.value {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        fabs(a.value - b.value) / s
    }
}
