//! Weighted measures and their integration.
//!
//! Densities: `A_alpha` relative to `dA = dx dy / pi` on the disk; `tau_alpha`,
//! `mu_alpha`, `sigma_alpha` and the area measure relative to `dx dy` on the
//! half-plane. `tau_alpha` is the image of `A_alpha` under `T` and `sigma_alpha`
//! the image of `A_alpha` restricted to `U` under `L`.
//!
//! Monte Carlo always uses stratified sampling with proportional allocation.
//! For disk-side integrals the strata are annular sectors of equal `A_alpha`
//! mass; for half-plane integrals the strata are vertical slabs of a bounding
//! box with equal `mu_alpha` mass.

use alloc::format;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::{map_blocks, pairwise_sum};
use crate::geometry::{cayley_raw, mismatch, ComplexPoint, Domain, Rect, Region};
use crate::math::{cos, exp, pow, sin, sqrt, PI};
use crate::quadrature::{integrate_2d, Cell, QuadOptions};
use crate::rng::{self, Stream, BLOCK};
use crate::selfmaps::HoloMap;
use crate::C64;

/// Bergman weight `alpha > -1`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct WeightParameter(f64);

impl WeightParameter {
    pub fn new(alpha: f64) -> Result<Self> {
        if alpha > -1.0 && alpha.is_finite() {
            Ok(Self(alpha))
        } else {
            Err(Error::InvalidWeight(alpha))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// The exponent `alpha + 2` of the Carleson condition.
    pub fn carleson_exponent(self) -> f64 {
        self.0 + 2.0
    }
}

impl TryFrom<f64> for WeightParameter {
    type Error = Error;
    fn try_from(a: f64) -> Result<Self> {
        Self::new(a)
    }
}

impl From<WeightParameter> for f64 {
    fn from(w: WeightParameter) -> f64 {
        w.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum MeasureKind {
    BergmanA(WeightParameter),
    TauT(WeightParameter),
    MuX(WeightParameter),
    SigmaL(WeightParameter),
    /// Lebesgue measure on the half-plane, i.e. `mu_0`.
    Area,
}

impl MeasureKind {
    pub fn support(&self) -> Domain {
        match self {
            MeasureKind::BergmanA(_) => Domain::Disk,
            _ => Domain::HalfPlane,
        }
    }

    pub fn alpha(&self) -> f64 {
        match self {
            MeasureKind::BergmanA(a) | MeasureKind::TauT(a) | MeasureKind::MuX(a) | MeasureKind::SigmaL(a) => a.0,
            MeasureKind::Area => 0.0,
        }
    }

    /// Total mass, `None` when infinite.
    pub fn total_mass(&self) -> Option<f64> {
        match self {
            MeasureKind::BergmanA(_) | MeasureKind::TauT(_) => Some(1.0),
            MeasureKind::SigmaL(a) => Some(pow(1.0 - exp(-4.0 * PI), a.0 + 1.0)),
            MeasureKind::MuX(_) | MeasureKind::Area => None,
        }
    }

    fn name(&self) -> &'static str {
        match self {
            MeasureKind::BergmanA(_) => "A_alpha",
            MeasureKind::TauT(_) => "tau_alpha",
            MeasureKind::MuX(_) => "mu_alpha",
            MeasureKind::SigmaL(_) => "sigma_alpha",
            MeasureKind::Area => "area",
        }
    }
}

/// Density at a raw point of the support (relative to `dA` on the disk and
/// `dx dy` on the half-plane).
pub(crate) fn density_raw(m: &MeasureKind, z: C64) -> f64 {
    match *m {
        MeasureKind::BergmanA(a) => (a.0 + 1.0) * pow(1.0 - z.norm_sqr(), a.0),
        MeasureKind::TauT(a) => {
            let c = pow(4.0, a.0 + 1.0) * (a.0 + 1.0) / PI;
            c * pow(z.re, a.0) / pow((z + 1.0).norm_sqr(), a.0 + 2.0)
        }
        MeasureKind::MuX(a) => pow(z.re, a.0),
        MeasureKind::SigmaL(a) => {
            if !Region::OmegaBox.contains_raw(z) {
                return 0.0;
            }
            let e = exp(-2.0 * PI * z.re);
            (a.0 + 1.0) * PI * e * pow(1.0 - e, a.0)
        }
        MeasureKind::Area => 1.0,
    }
}

/// Density divided by `x^alpha`: finite up to the imaginary axis.
fn reduced_density(m: &MeasureKind, z: C64) -> f64 {
    match *m {
        MeasureKind::TauT(a) => pow(4.0, a.0 + 1.0) * (a.0 + 1.0) / PI / pow((z + 1.0).norm_sqr(), a.0 + 2.0),
        MeasureKind::MuX(_) | MeasureKind::Area => 1.0,
        MeasureKind::SigmaL(a) => {
            if !Region::OmegaBox.contains_raw(z) {
                return 0.0;
            }
            let x = z.re;
            let e = exp(-2.0 * PI * x);
            // (1 - e^{-2 pi x}) / x, stable near 0.
            let q = if x < 1e-8 { 2.0 * PI * (1.0 - PI * x) } else { -libm::expm1(-2.0 * PI * x) / x };
            (a.0 + 1.0) * PI * e * pow(q, a.0)
        }
        MeasureKind::BergmanA(_) => f64::NAN,
    }
}

pub fn density(m: &MeasureKind, z: &ComplexPoint) -> Result<f64> {
    let w = z.expect(m.support())?;
    if matches!(m, MeasureKind::MuX(_) | MeasureKind::TauT(_)) && m.alpha() < 0.0 && w.re <= 0.0 {
        return Err(Error::SingularPoint);
    }
    Ok(density_raw(m, w))
}

/// `(1 - r^2)^(alpha + 1)`, the `A_alpha` mass of `{ |z| > r }`.
pub(crate) fn outer_mass(alpha: f64, r: f64) -> f64 {
    pow((1.0 - r * r).max(0.0), alpha + 1.0)
}

/// A polar box `{ r0 <= |z| <= r1, |arg z - theta| <= half }` with its mass.
#[derive(Debug, Clone, Copy)]
pub(crate) struct PolarBox {
    pub r0: f64,
    pub r1: f64,
    pub theta: f64,
    pub half: f64,
}

impl PolarBox {
    pub fn full() -> Self {
        Self { r0: 0.0, r1: 1.0, theta: 0.0, half: PI }
    }

    pub fn mass(&self, alpha: f64) -> f64 {
        if self.r1 <= self.r0 {
            return 0.0;
        }
        self.half / PI * (outer_mass(alpha, self.r0) - outer_mass(alpha, self.r1))
    }

    /// Split into `k` radial strata of equal mass.
    pub fn strata(&self, alpha: f64, k: usize) -> Vec<PolarBox> {
        let v0 = outer_mass(alpha, self.r0);
        let v1 = outer_mass(alpha, self.r1);
        let inv = 1.0 / (alpha + 1.0);
        let radius = |v: f64| sqrt((1.0 - pow(v, inv)).max(0.0));
        (0..k)
            .map(|i| {
                let a = v0 + (v1 - v0) * i as f64 / k as f64;
                let b = v0 + (v1 - v0) * (i + 1) as f64 / k as f64;
                PolarBox {
                    r0: if i == 0 { self.r0 } else { radius(a) },
                    r1: if i + 1 == k { self.r1 } else { radius(b) },
                    ..*self
                }
            })
            .collect()
    }

    /// Draw from `A_alpha` conditioned on the box.
    #[inline]
    pub fn draw(&self, alpha: f64, r: &mut Stream) -> C64 {
        let v_outer = outer_mass(alpha, self.r0);
        let v_inner = outer_mass(alpha, self.r1);
        let v = v_outer - rng::uniform(r) * (v_outer - v_inner);
        let s = pow(v, 1.0 / (alpha + 1.0));
        let mut rad = sqrt((1.0 - s).max(0.0));
        if rad >= 1.0 {
            rad = 1.0 - f64::EPSILON;
        }
        let t = self.theta + self.half * (2.0 * rng::uniform(r) - 1.0);
        C64::new(rad * cos(t), rad * sin(t))
    }
}

/// Independent samples of `A_alpha`, reproducible from `seed`.
pub fn sample(m: &MeasureKind, count: usize, seed: u64) -> Result<Vec<ComplexPoint>> {
    let MeasureKind::BergmanA(a) = *m else {
        return Err(Error::InvalidParameter(format!("exact sampler only for A_alpha, not {}", m.name())));
    };
    if count == 0 {
        return Err(Error::InvalidParameter("count must be at least 1".into()));
    }
    let full = PolarBox::full();
    let blocks = count.div_ceil(BLOCK);
    let chunks = map_blocks(blocks, |b| {
        let mut r = rng::stream(seed, rng::stream_id(0, b));
        let n = BLOCK.min(count - b * BLOCK);
        (0..n).map(|_| full.draw(a.0, &mut r)).collect::<Vec<_>>()
    });
    chunks.into_iter().flatten().map(|z| ComplexPoint::new(z, Domain::Disk)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    MonteCarlo,
    AdaptiveQuadrature,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegrationConfig {
    pub method: Method,
    pub sample_count: usize,
    pub max_subdivisions: usize,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub seed: u64,
}

impl Default for IntegrationConfig {
    fn default() -> Self {
        Self {
            method: Method::AdaptiveQuadrature,
            sample_count: 1 << 20,
            max_subdivisions: 20_000,
            rel_tol: 1e-9,
            abs_tol: 1e-12,
            seed: 0,
        }
    }
}

impl IntegrationConfig {
    pub fn monte_carlo(sample_count: usize, seed: u64) -> Self {
        Self { method: Method::MonteCarlo, sample_count, seed, ..Self::default() }
    }

    pub fn quadrature(rel_tol: f64, abs_tol: f64) -> Self {
        Self { method: Method::AdaptiveQuadrature, rel_tol, abs_tol, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return Err(Error::InvalidParameter("tolerances must be positive".into()));
        }
        if self.sample_count < 1000 {
            return Err(Error::InvalidParameter(format!(
                "sample_count {} below the minimum of 1000",
                self.sample_count
            )));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::InvalidParameter("max_subdivisions must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    /// Standard error (Monte Carlo) or last refinement delta (quadrature).
    pub error_bar: f64,
    /// Samples drawn, or integrand evaluations for quadrature.
    pub samples_used: usize,
    pub method: Method,
}

impl Estimate {
    pub fn exact(value: f64) -> Self {
        Self { value, error_bar: 0.0, samples_used: 0, method: Method::AdaptiveQuadrature }
    }
}

/// Number of strata used by the Monte Carlo engine.
pub(crate) const STRATA: usize = 16;

/// Samples per stratum under proportional allocation.
pub(crate) fn allocation(total: usize, k: usize) -> Vec<usize> {
    (0..k).map(|i| total / k + usize::from(i < total % k)).collect()
}

/// Run a stratified estimator. `value(s, rng)` draws one sample in stratum `s`
/// and returns its contribution; the estimate is `sum_s mass_s * mean_s`.
pub(crate) fn stratified<F>(masses: &[f64], counts: &[usize], seed: u64, value: F) -> Estimate
where
    F: Fn(usize, &mut Stream) -> f64 + Sync + Send,
{
    let mut jobs = Vec::new();
    for (s, &n) in counts.iter().enumerate() {
        for b in 0..n.div_ceil(BLOCK) {
            jobs.push((s, b, BLOCK.min(n - b * BLOCK)));
        }
    }
    let partial = map_blocks(jobs.len(), |i| {
        let (s, b, n) = jobs[i];
        let mut r = rng::stream(seed, rng::stream_id(s, b));
        let (mut sum, mut sq) = (0.0, 0.0);
        for _ in 0..n {
            let v = value(s, &mut r);
            sum += v;
            sq += v * v;
        }
        (sum, sq)
    });
    let mut value_total = Vec::with_capacity(counts.len());
    let mut var_total = Vec::with_capacity(counts.len());
    for (s, &n) in counts.iter().enumerate() {
        if n == 0 || masses[s] == 0.0 {
            continue;
        }
        let sums: Vec<f64> = jobs.iter().zip(&partial).filter(|(j, _)| j.0 == s).map(|(_, p)| p.0).collect();
        let sqs: Vec<f64> = jobs.iter().zip(&partial).filter(|(j, _)| j.0 == s).map(|(_, p)| p.1).collect();
        let nf = n as f64;
        let mean = pairwise_sum(&sums) / nf;
        let var = if n > 1 { ((pairwise_sum(&sqs) / nf - mean * mean) * nf / (nf - 1.0)).max(0.0) } else { 0.0 };
        value_total.push(masses[s] * mean);
        var_total.push(masses[s] * masses[s] * var / nf);
    }
    Estimate {
        value: pairwise_sum(&value_total),
        error_bar: sqrt(pairwise_sum(&var_total)),
        samples_used: counts.iter().sum(),
        method: Method::MonteCarlo,
    }
}

/// Radius below which a disk-side region certainly has no points, and the
/// polar box that contains it.
pub(crate) fn disk_envelope(region: &Region) -> PolarBox {
    match region {
        Region::Intersect(parts) => {
            let mut env = PolarBox::full();
            for p in parts {
                let e = disk_envelope(p);
                env.r0 = env.r0.max(e.r0);
                env.r1 = env.r1.min(e.r1);
                if e.half < env.half {
                    env.theta = e.theta;
                    env.half = e.half;
                }
            }
            env
        }
        Region::LevelSet { map, lambda } => PolarBox { r0: level_set_inner_radius(map, *lambda), ..PolarBox::full() },
        other => match other.polar_box() {
            Some((r0, r1, theta, half)) => PolarBox { r0, r1, theta, half },
            None => PolarBox::full(),
        },
    }
}

/// Schwarz-Pick exclusion for `{ |m| > lambda }`, expressed on the disk (for
/// half-plane maps, on the disk variable `T w`).
///
/// With `h` the disk self-map attached to `m` and `a = |h(0)|`,
/// `|h(z)| <= (|z| + a) / (1 + a |z|)`; and `|m| > lambda` forces
/// `|h| > lambda` (disk codomain) or `|h| > (lambda - 1)/(lambda + 1)`.
pub fn level_set_inner_radius(m: &HoloMap, lambda: f64) -> f64 {
    let r = if m.codomain() == Domain::Disk {
        lambda
    } else if lambda > 1.0 {
        (lambda - 1.0) / (lambda + 1.0)
    } else {
        return 0.0;
    };
    if r >= 1.0 {
        return 1.0;
    }
    let a = m.disk_center_modulus();
    if r <= a {
        0.0
    } else {
        // A small margin keeps the bound safe against rounding in `m`.
        ((r - a) / (1.0 - r * a) * (1.0 - 1e-12) - 1e-15).max(0.0)
    }
}

fn as_rect(region: &Region) -> Option<Rect> {
    match region {
        Region::Rectangle(r) => Some(*r),
        Region::DyadicSquare(l) => Some(l.bounds()),
        Region::OmegaBox => Some(Rect::omega()),
        Region::Intersect(parts) => {
            let mut acc: Option<Rect> = None;
            for p in parts {
                let r = as_rect(p)?;
                acc = Some(match acc {
                    None => r,
                    Some(a) => a.intersect(&r)?,
                });
            }
            acc
        }
        _ => None,
    }
}

/// `int_{x0}^{x1} x^alpha dx`.
fn power_mass(alpha: f64, x0: f64, x1: f64) -> f64 {
    (pow(x1, alpha + 1.0) - pow(x0.max(0.0), alpha + 1.0)) / (alpha + 1.0)
}

/// Inverse of `power_mass(alpha, 0, .)`.
fn power_inverse(alpha: f64, v: f64) -> f64 {
    pow((alpha + 1.0) * v, 1.0 / (alpha + 1.0))
}

fn clip_to_support(m: &MeasureKind, b: Rect) -> Option<Rect> {
    let b = Rect { x0: b.x0.max(0.0), ..b };
    if matches!(m, MeasureKind::SigmaL(_)) {
        b.intersect(&Rect::omega())
    } else if b.x1 > b.x0 && b.y1 > b.y0 {
        Some(b)
    } else {
        None
    }
}

/// mu_alpha-stratified importance sampler over a box of the half-plane.
fn box_monte_carlo(m: &MeasureKind, region: &Region, b: Rect, cfg: &IntegrationConfig) -> Estimate {
    let alpha = m.alpha();
    let v_lo = power_mass(alpha, 0.0, b.x0);
    let v_hi = power_mass(alpha, 0.0, b.x1);
    let height = b.y1 - b.y0;
    let k = STRATA;
    let counts = allocation(cfg.sample_count, k);
    let slab_v = (v_hi - v_lo) / k as f64;
    let masses: Vec<f64> = (0..k).map(|_| slab_v * height).collect();
    stratified(&masses, &counts, cfg.seed, |s, r| {
        let v = v_lo + slab_v * (s as f64 + rng::uniform(r));
        let x = power_inverse(alpha, v).clamp(b.x0, b.x1);
        let y = b.y0 + height * rng::uniform(r);
        let w = C64::new(x, y);
        if x > 0.0 && region.contains_raw(w) {
            reduced_density(m, w)
        } else {
            0.0
        }
    })
}

/// Push-forward of `A_alpha` through `T` for `tau_alpha` over unbounded sets.
fn tau_pushforward(alpha: f64, region: &Region, cfg: &IntegrationConfig) -> Estimate {
    let env = disk_envelope(region);
    let strata = env.strata(alpha, STRATA);
    let masses: Vec<f64> = strata.iter().map(|s| s.mass(alpha)).collect();
    let counts = allocation(cfg.sample_count, STRATA);
    stratified(&masses, &counts, cfg.seed, |s, r| {
        let w = cayley_raw(strata[s].draw(alpha, r));
        f64::from(u8::from(w.re > 0.0 && region.contains_raw(w)))
    })
}

fn bergman_monte_carlo(alpha: f64, region: &Region, cfg: &IntegrationConfig) -> Estimate {
    let env = disk_envelope(region);
    if env.mass(alpha) == 0.0 {
        return Estimate { value: 0.0, error_bar: 0.0, samples_used: 0, method: Method::MonteCarlo };
    }
    let strata = env.strata(alpha, STRATA);
    let masses: Vec<f64> = strata.iter().map(|s| s.mass(alpha)).collect();
    let counts = allocation(cfg.sample_count, STRATA);
    stratified(&masses, &counts, cfg.seed, |s, r| f64::from(u8::from(region.contains_raw(strata[s].draw(alpha, r)))))
}

fn quad_options(cfg: &IntegrationConfig) -> QuadOptions {
    QuadOptions {
        rel_tol: cfg.rel_tol,
        abs_tol: cfg.abs_tol,
        max_subdivisions: cfg.max_subdivisions,
        ..QuadOptions::default()
    }
}

fn finish_quadrature(value: f64, error: f64, evals: usize, converged: bool) -> Result<Estimate> {
    if !converged {
        return Err(Error::NonConvergence { value, error });
    }
    Ok(Estimate { value, error_bar: error, samples_used: evals, method: Method::AdaptiveQuadrature })
}

/// Integrate a half-plane density over a rectangle, removing the `x^alpha`
/// singularity by `v = x^(alpha+1)/(alpha+1)` when `alpha < 0`.
fn rect_quadrature(m: &MeasureKind, b: Rect, cfg: &IntegrationConfig) -> Result<Estimate> {
    let alpha = m.alpha();
    let opts = quad_options(cfg);
    let out = if alpha < 0.0 {
        let cell = Cell::new(power_mass(alpha, 0.0, b.x0), power_mass(alpha, 0.0, b.x1), b.y0, b.y1);
        integrate_2d(|v, y| reduced_density(m, C64::new(power_inverse(alpha, v), y)), cell, &opts)
    } else {
        let cell = Cell::new(b.x0, b.x1, b.y0, b.y1);
        integrate_2d(|x, y| density_raw(m, C64::new(x, y)), cell, &opts)
    };
    finish_quadrature(out.value, out.error, out.evaluations, out.converged)
}

/// `A_alpha` of a polar box in the coordinates `v = (1 - r^2)^(alpha+1)`, where
/// `dA_alpha = dv dtheta / (2 pi)`.
fn polar_quadrature(alpha: f64, p: PolarBox, cfg: &IntegrationConfig) -> Result<Estimate> {
    let cell = Cell::new(outer_mass(alpha, p.r1), outer_mass(alpha, p.r0), p.theta - p.half, p.theta + p.half);
    let out = integrate_2d(|_, _| 0.5 / PI, cell, &quad_options(cfg));
    finish_quadrature(out.value, out.error, out.evaluations, out.converged)
}

/// Measure of a region.
///
/// Adaptive quadrature handles `A_alpha` on polar boxes and the half-plane
/// densities on rectangles; every other pair, and every region defined
/// through an analytic map, is integrated by Monte Carlo.
pub fn integrate(m: &MeasureKind, region: &Region, cfg: &IntegrationConfig) -> Result<Estimate> {
    cfg.validate()?;
    if region.ambient() != m.support() {
        return Err(mismatch(m.support(), region.ambient()));
    }
    let alpha = m.alpha();
    let quad = cfg.method == Method::AdaptiveQuadrature && !region.involves_map();
    if let MeasureKind::BergmanA(_) = m {
        if quad {
            if let Some((r0, r1, theta, half)) = region.polar_box() {
                return polar_quadrature(alpha, PolarBox { r0, r1, theta, half }, cfg);
            }
        }
        return Ok(bergman_monte_carlo(alpha, region, cfg));
    }
    if quad {
        if let Some(b) = as_rect(region) {
            return match clip_to_support(m, b) {
                Some(b) => rect_quadrature(m, b, cfg),
                None => Ok(Estimate::exact(0.0)),
            };
        }
    }
    let bounding = region.bounding_rect().or_else(|| matches!(m, MeasureKind::SigmaL(_)).then(Rect::omega));
    match bounding.map(|b| clip_to_support(m, b)) {
        Some(Some(b)) => Ok(box_monte_carlo(m, region, b, cfg)),
        Some(None) => Ok(Estimate { value: 0.0, error_bar: 0.0, samples_used: 0, method: Method::MonteCarlo }),
        None => match m {
            MeasureKind::TauT(a) => Ok(tau_pushforward(a.0, region, cfg)),
            _ => Err(Error::UnboundedRegionWithInfiniteMass),
        },
    }
}

/// `A_alpha(W(xi, h)) = (h / pi) (2h - h^2)^(alpha + 1)` for every `xi`.
pub fn window_measure_closed_form(alpha: WeightParameter, h: f64) -> Result<f64> {
    if !(h > 0.0 && h <= 1.0) {
        return Err(Error::InvalidParameter(format!("window size {h} not in (0,1]")));
    }
    Ok(h / PI * pow(2.0 * h - h * h, alpha.0 + 1.0))
}

/// Cell-centred lattice on `Omega`; never touches `Re w = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OmegaGrid {
    pub nx: usize,
    pub ny: usize,
}

impl OmegaGrid {
    pub fn new(nx: usize, ny: usize) -> Result<Self> {
        if nx == 0 || ny == 0 {
            return Err(Error::InvalidGrid("grid needs at least one point per axis".into()));
        }
        Ok(Self { nx, ny })
    }

    pub fn points(&self) -> impl Iterator<Item = C64> + '_ {
        (0..self.nx).flat_map(move |i| {
            (0..self.ny).map(move |k| {
                C64::new(2.0 * (i as f64 + 0.5) / self.nx as f64, -1.0 + 2.0 * (k as f64 + 0.5) / self.ny as f64)
            })
        })
    }
}

/// Extremes of `density(a) / density(b)` over a lattice of `Omega`.
pub fn equivalence_ratio(a: &MeasureKind, b: &MeasureKind, grid: OmegaGrid) -> Result<(f64, f64)> {
    for m in [a, b] {
        if m.support() != Domain::HalfPlane {
            return Err(mismatch(Domain::HalfPlane, m.support()));
        }
    }
    if a == b {
        return Ok((1.0, 1.0));
    }
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for w in grid.points() {
        let (da, db) = (density_raw(a, w), density_raw(b, w));
        if !(da > 0.0 && db > 0.0) || !da.is_finite() || !db.is_finite() {
            return Err(Error::SingularRatio);
        }
        let q = da / db;
        lo = lo.min(q);
        hi = hi.max(q);
    }
    Ok((lo, hi))
}

/// Relative gap `|x - y| / max(|x|, |y|)`.
#[cfg(test)]
pub(crate) fn rel_gap(x: f64, y: f64) -> f64 {
    let s = x.abs().max(y.abs());
    if s == 0.0 {
        0.0
    } else {
        (x - y).abs() / s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(a: f64) -> WeightParameter {
        WeightParameter::new(a).unwrap()
    }

    #[test]
    fn weight_validation() {
        assert!(WeightParameter::new(-1.0).is_err());
        assert!(WeightParameter::new(-0.999).is_ok());
        assert!(WeightParameter::new(f64::NAN).is_err());
    }

    #[test]
    fn density_examples() {
        let z = ComplexPoint::disk(0.3, -0.4).unwrap();
        assert_eq!(density(&MeasureKind::BergmanA(w(0.0)), &z).unwrap(), 1.0);
        let p = ComplexPoint::half_plane(3.0, 7.0).unwrap();
        assert!((density(&MeasureKind::MuX(w(2.0)), &p).unwrap() - 9.0).abs() < 1e-12);
        let one = ComplexPoint::half_plane(1.0, 0.0).unwrap();
        let t = density(&MeasureKind::TauT(w(0.0)), &one).unwrap();
        assert!((t - 1.0 / (4.0 * PI)).abs() < 1e-15);
        assert!(matches!(density(&MeasureKind::MuX(w(0.0)), &z), Err(Error::DomainMismatch { .. })));
    }

    #[test]
    fn window_closed_form_examples() {
        assert!((window_measure_closed_form(w(0.0), 1.0).unwrap() - 1.0 / PI).abs() < 1e-15);
        assert!((window_measure_closed_form(w(0.0), 0.1).unwrap() - 0.0060479).abs() < 1e-7);
        assert!((window_measure_closed_form(w(1.0), 0.5).unwrap() - 0.089524).abs() < 1e-6);
        assert!(window_measure_closed_form(w(0.0), 0.0).is_err());
    }

    #[test]
    fn equal_mass_strata_cover_box() {
        let b = PolarBox { r0: 0.2, r1: 0.95, theta: 0.3, half: 0.7 };
        for a in [-0.5, 0.0, 2.0] {
            let s = b.strata(a, 7);
            let total: f64 = s.iter().map(|p| p.mass(a)).sum();
            assert!(rel_gap(total, b.mass(a)) < 1e-12);
            for p in &s {
                assert!(rel_gap(p.mass(a), b.mass(a) / 7.0) < 1e-9);
            }
        }
    }

    #[test]
    fn allocation_sums() {
        assert_eq!(allocation(1003, 16).iter().sum::<usize>(), 1003);
    }

    #[test]
    fn config_validation() {
        assert!(IntegrationConfig::monte_carlo(999, 0).validate().is_err());
        assert!(IntegrationConfig::quadrature(0.0, 1e-9).validate().is_err());
        assert!(IntegrationConfig::default().validate().is_ok());
    }
}
