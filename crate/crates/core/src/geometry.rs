//! Geometry of the unit disk `D` and the right half-plane `Pi+`.
//!
//! `T(z) = (1 - z)/(1 + z)` exchanges the two domains and is an involution.
//! `E(w) = exp(-pi w)` sends `Omega = (0,2) x (-1,1)` onto the annulus
//! `e^(-2 pi) < |z| < 1` minus the negative real axis; `log_map` is its inverse.

use alloc::boxed::Box;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::math::{atan2, exp, fabs, floor, log, sqrt, PI};
use crate::selfmaps::HoloMap;
use crate::C64;

/// Inner radius of the annulus `U = E(Omega)`.
pub const ANNULUS_INNER: f64 = 0.001_867_442_731_707_988_8; // e^(-2 pi)

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Domain {
    Disk,
    HalfPlane,
    Circle,
    Plane,
}

impl Domain {
    pub fn name(self) -> &'static str {
        match self {
            Domain::Disk => "unit disk",
            Domain::HalfPlane => "right half-plane",
            Domain::Circle => "unit circle",
            Domain::Plane => "complex plane",
        }
    }

    pub fn admits(self, z: C64) -> bool {
        if !(z.re.is_finite() && z.im.is_finite()) {
            return false;
        }
        match self {
            Domain::Disk => z.norm_sqr() < 1.0,
            Domain::HalfPlane => z.re > 0.0,
            Domain::Circle => fabs(z.norm_sqr() - 1.0) <= 1e-12,
            Domain::Plane => true,
        }
    }

    /// The other side of the Cayley transform.
    pub fn cayley_image(self) -> Domain {
        match self {
            Domain::Disk => Domain::HalfPlane,
            Domain::HalfPlane => Domain::Disk,
            Domain::Circle | Domain::Plane => Domain::Plane,
        }
    }
}

/// A point tagged with the domain it belongs to. The tag is checked on
/// construction, so a `Disk` point always has modulus below one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPoint", into = "RawPoint")]
pub struct ComplexPoint {
    z: C64,
    domain: Domain,
}

#[derive(Serialize, Deserialize)]
struct RawPoint {
    re: f64,
    im: f64,
    domain: Domain,
}

impl TryFrom<RawPoint> for ComplexPoint {
    type Error = Error;
    fn try_from(p: RawPoint) -> Result<Self> {
        ComplexPoint::new(C64::new(p.re, p.im), p.domain)
    }
}

impl From<ComplexPoint> for RawPoint {
    fn from(p: ComplexPoint) -> Self {
        RawPoint { re: p.z.re, im: p.z.im, domain: p.domain }
    }
}

impl ComplexPoint {
    pub fn new(z: C64, domain: Domain) -> Result<Self> {
        if domain.admits(z) {
            Ok(Self { z, domain })
        } else {
            Err(Error::InvalidPoint { re: z.re, im: z.im, domain: domain.name() })
        }
    }

    pub fn disk(re: f64, im: f64) -> Result<Self> {
        Self::new(C64::new(re, im), Domain::Disk)
    }

    pub fn half_plane(re: f64, im: f64) -> Result<Self> {
        Self::new(C64::new(re, im), Domain::HalfPlane)
    }

    /// `e^(i theta)`.
    pub fn circle(theta: f64) -> Self {
        Self { z: C64::from_polar(1.0, theta), domain: Domain::Circle }
    }

    pub fn plane(re: f64, im: f64) -> Self {
        Self { z: C64::new(re, im), domain: Domain::Plane }
    }

    pub fn z(&self) -> C64 {
        self.z
    }

    pub fn re(&self) -> f64 {
        self.z.re
    }

    pub fn im(&self) -> f64 {
        self.z.im
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub(crate) fn expect(&self, domain: Domain) -> Result<C64> {
        if self.domain == domain {
            Ok(self.z)
        } else {
            Err(mismatch(domain, self.domain))
        }
    }
}

pub(crate) fn mismatch(expected: Domain, found: Domain) -> Error {
    Error::DomainMismatch { expected: expected.name(), found: found.name() }
}

#[inline]
pub fn cayley_raw(z: C64) -> C64 {
    (C64::new(1.0, 0.0) - z) / (C64::new(1.0, 0.0) + z)
}

/// The Cayley transform `T(z) = (1 - z)/(1 + z)`.
pub fn cayley(p: &ComplexPoint) -> Result<ComplexPoint> {
    let z = p.z();
    if z == C64::new(-1.0, 0.0) {
        return Err(Error::PoleAtMinusOne);
    }
    ComplexPoint::new(cayley_raw(z), p.domain().cayley_image())
}

#[inline]
pub fn exp_map_raw(w: C64) -> C64 {
    (-PI * w).exp()
}

/// `E(w) = exp(-pi w)` from the half-plane into the disk.
pub fn exp_map(w: &ComplexPoint) -> Result<ComplexPoint> {
    let w = w.expect(Domain::HalfPlane)?;
    ComplexPoint::new(exp_map_raw(w), Domain::Disk)
}

/// Inverse of `E` on `Omega`, or `None` outside the annulus or on the slit.
#[inline]
pub fn log_map_raw(z: C64) -> Option<C64> {
    let r2 = z.norm_sqr();
    if !(r2 < 1.0 && r2 > ANNULUS_INNER * ANNULUS_INNER) {
        return None;
    }
    if z.im == 0.0 && z.re < 0.0 {
        return None;
    }
    let arg = atan2(z.im, z.re);
    Some(C64::new(-0.5 * log(r2) / PI, -arg / PI))
}

/// `L = E^(-1)` from the annulus `U` (minus the slit `arg z = pi`) onto `Omega`.
pub fn log_map(z: &ComplexPoint) -> Result<ComplexPoint> {
    let z = z.expect(Domain::Disk)?;
    let r2 = z.norm_sqr();
    if r2 <= ANNULUS_INNER * ANNULUS_INNER {
        return Err(Error::OutsideAnnulus);
    }
    if z.im == 0.0 && z.re < 0.0 {
        return Err(Error::OnBranchSlit);
    }
    let w = log_map_raw(z).ok_or(Error::OutsideAnnulus)?;
    ComplexPoint::new(w, Domain::HalfPlane)
}

/// `rho'(z, w) = |(z - w)/(1 - conj(z) w)|` on the disk.
#[inline]
pub fn pseudo_distance_disk(z: C64, w: C64) -> f64 {
    ((z - w) / (C64::new(1.0, 0.0) - z.conj() * w)).norm()
}

/// `rho(a, b) = |(a - b)/(conj(a) + b)|` on the half-plane.
#[inline]
pub fn pseudo_distance_half(a: C64, b: C64) -> f64 {
    ((a - b) / (a.conj() + b)).norm()
}

pub fn pseudo_distance(a: &ComplexPoint, b: &ComplexPoint) -> Result<f64> {
    if a.domain() != b.domain() {
        return Err(mismatch(a.domain(), b.domain()));
    }
    match a.domain() {
        Domain::Disk => Ok(pseudo_distance_disk(a.z(), b.z())),
        Domain::HalfPlane => Ok(pseudo_distance_half(a.z(), b.z())),
        d => Err(mismatch(Domain::Disk, d)),
    }
}

/// Image of `u` in `D(0, r)` under the automorphism onto `Delta(center, r)` of `Pi+`:
/// `z = (c + u conj(c))/(1 - u)`.
#[inline]
pub fn half_plane_disk_point(center: C64, u: C64) -> C64 {
    (center + u * center.conj()) / (C64::new(1.0, 0.0) - u)
}

/// Image of `u` under `phi_c(u) = (c - u)/(1 - conj(c) u)`, which maps `D(0,r)`
/// onto `Delta'(c, r)`.
#[inline]
pub fn disk_automorphism(center: C64, u: C64) -> C64 {
    (center - u) / (C64::new(1.0, 0.0) - center.conj() * u)
}

/// Pseudo-hyperbolic constant `M_s = (1 + s)/(1 - s)`.
pub fn harnack_constant(s: f64) -> f64 {
    (1.0 + s) / (1.0 - s)
}

/// Axis-aligned rectangle `[x0, x1) x [y0, y1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Rect {
    pub fn new(x0: f64, x1: f64, y0: f64, y1: f64) -> Result<Self> {
        if !(x0 <= x1 && y0 <= y1) || ![x0, x1, y0, y1].iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidParameter(alloc::format!("bad rectangle [{x0}, {x1}] x [{y0}, {y1}]")));
        }
        Ok(Self { x0, x1, y0, y1 })
    }

    pub fn omega() -> Self {
        Self { x0: 0.0, x1: 2.0, y0: -1.0, y1: 1.0 }
    }

    pub fn area(&self) -> f64 {
        (self.x1 - self.x0) * (self.y1 - self.y0)
    }

    /// Half-open membership, left and bottom edges included.
    #[inline]
    pub fn contains(&self, z: C64) -> bool {
        z.re >= self.x0 && z.re < self.x1 && z.im >= self.y0 && z.im < self.y1
    }

    pub fn intersect(&self, o: &Rect) -> Option<Rect> {
        let r = Rect { x0: self.x0.max(o.x0), x1: self.x1.min(o.x1), y0: self.y0.max(o.y0), y1: self.y1.min(o.y1) };
        (r.x0 < r.x1 && r.y0 < r.y1).then_some(r)
    }

    pub fn center(&self) -> C64 {
        C64::new(0.5 * (self.x0 + self.x1), 0.5 * (self.y0 + self.y1))
    }

    /// `lambda * self`.
    pub fn scaled(&self, lambda: f64) -> Rect {
        Rect { x0: lambda * self.x0, x1: lambda * self.x1, y0: lambda * self.y0, y1: lambda * self.y1 }
    }

    pub fn translated(&self, dy: f64) -> Rect {
        Rect { y0: self.y0 + dy, y1: self.y1 + dy, ..*self }
    }
}

/// Bounding box of the pseudo-hyperbolic disk `Delta(center, r)` of the
/// half-plane, using the bounds `(1-r)/(1+r) <= Re z <= (1+r)/(1-r)` and
/// `|Im z| <= 2r/(1-r)^2` for center 1, transported by dilation and
/// vertical translation.
pub fn pseudo_disk_bounding_box(center: &ComplexPoint, r: f64) -> Result<Rect> {
    let c = center.expect(Domain::HalfPlane)?;
    if !(0.0..1.0).contains(&r) {
        return Err(Error::InvalidParameter(alloc::format!("pseudo-hyperbolic radius {r} not in [0,1)")));
    }
    let a = c.re;
    let half = a * 2.0 * r / ((1.0 - r) * (1.0 - r));
    Ok(Rect { x0: a * (1.0 - r) / (1.0 + r), x1: a * (1.0 + r) / (1.0 - r), y0: c.im - half, y1: c.im + half })
}

/// Euclidean center and radius of `Delta(center, r)` in the half-plane.
pub fn pseudo_disk_euclidean(center: C64, r: f64) -> (C64, f64) {
    let a = center.re;
    let d = 1.0 - r * r;
    (C64::new(a * (1.0 + r * r) / d, center.im), 2.0 * a * r / d)
}

/// Dyadic square index `l = (n, j, k)` of `Omega`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DyadicIndex {
    pub n: u32,
    pub j: u64,
    pub k: u64,
}

/// Bounds, center and boundary contact of a dyadic square.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DyadicSquare {
    pub bounds: Rect,
    pub center: ComplexPoint,
    pub touches_boundary: bool,
}

/// Deepest supported generation.
pub const MAX_GENERATION: u32 = 40;

impl DyadicIndex {
    pub fn new(n: u32, j: u64, k: u64) -> Result<Self> {
        if n > MAX_GENERATION || j >= (1u64 << n) || k >= (1u64 << n) {
            return Err(Error::InvalidIndex { n, j, k });
        }
        Ok(Self { n, j, k })
    }

    pub fn root() -> Self {
        Self { n: 0, j: 0, k: 0 }
    }

    /// Side length `2 / 2^n`.
    pub fn side(&self) -> f64 {
        2.0 / (1u64 << self.n) as f64
    }

    pub fn bounds(&self) -> Rect {
        let s = self.side();
        Rect {
            x0: self.j as f64 * s,
            x1: (self.j + 1) as f64 * s,
            y0: self.k as f64 * s - 1.0,
            y1: (self.k + 1) as f64 * s - 1.0,
        }
    }

    /// `c_l = (2j+1)/2^n + i((2k+1)/2^n - 1)`.
    pub fn center(&self) -> C64 {
        let d = (1u64 << self.n) as f64;
        C64::new((2 * self.j + 1) as f64 / d, (2 * self.k + 1) as f64 / d - 1.0)
    }

    pub fn touches_boundary(&self) -> bool {
        self.j == 0
    }

    pub fn square(&self) -> DyadicSquare {
        DyadicSquare {
            bounds: self.bounds(),
            center: ComplexPoint { z: self.center(), domain: Domain::HalfPlane },
            touches_boundary: self.touches_boundary(),
        }
    }

    pub fn children(&self) -> [DyadicIndex; 4] {
        let (n, j, k) = (self.n + 1, 2 * self.j, 2 * self.k);
        [
            DyadicIndex { n, j, k },
            DyadicIndex { n, j: j + 1, k },
            DyadicIndex { n, j, k: k + 1 },
            DyadicIndex { n, j: j + 1, k: k + 1 },
        ]
    }

    pub fn parent(&self) -> Option<DyadicIndex> {
        (self.n > 0).then(|| DyadicIndex { n: self.n - 1, j: self.j / 2, k: self.k / 2 })
    }

    /// Whether `self` is a strict ancestor of `other`.
    pub fn is_ancestor_of(&self, other: &DyadicIndex) -> bool {
        other.n > self.n && {
            let shift = other.n - self.n;
            other.j >> shift == self.j && other.k >> shift == self.k
        }
    }

    /// The generation-`n` square containing `z` (half-open convention).
    pub fn containing(z: C64, n: u32) -> Option<DyadicIndex> {
        if !Rect::omega().contains(z) || z.re <= 0.0 || n > MAX_GENERATION {
            return None;
        }
        let m = (1u64 << n) as f64;
        let j = floor(z.re * m / 2.0) as u64;
        let k = floor((z.im + 1.0) * m / 2.0) as u64;
        let lim = (1u64 << n) - 1;
        Some(DyadicIndex { n, j: j.min(lim), k: k.min(lim) })
    }

    /// True when `z` sits on a grid line of some generation `<= n_max`.
    pub fn on_grid_line(z: C64, n_max: u32) -> bool {
        let m = (1u64 << n_max) as f64;
        let a = z.re * m / 2.0;
        let b = (z.im + 1.0) * m / 2.0;
        a == floor(a) || b == floor(b)
    }

    /// All `4^n` indices of generation `n`.
    pub fn generation(n: u32) -> impl Iterator<Item = DyadicIndex> {
        let m = 1u64 << n;
        (0..m).flat_map(move |j| (0..m).map(move |k| DyadicIndex { n, j, k }))
    }
}

/// Measurable regions used by the integration engine.
#[derive(Debug, Clone, PartialEq)]
pub enum Region {
    /// Carleson window `{ |z| >= 1 - h, |arg(z conj(xi))| <= h }`.
    Window {
        xi: C64,
        h: f64,
    },
    /// `{ z in D : |z - xi| <= h }`.
    SBall {
        xi: C64,
        h: f64,
    },
    PseudoDiskD {
        center: C64,
        r: f64,
    },
    PseudoDiskH {
        center: C64,
        r: f64,
    },
    DyadicSquare(DyadicIndex),
    OmegaBox,
    /// `U = { e^(-2 pi) < |z| < 1 }`.
    Annulus,
    /// Rectangle of the half-plane.
    Rectangle(Rect),
    /// The whole open domain.
    Whole(Domain),
    /// `{ |f| > lambda }` on the domain of `f`.
    LevelSet {
        map: Box<HoloMap>,
        lambda: f64,
    },
    Intersect(Vec<Region>),
}

impl Region {
    pub fn window(xi: &ComplexPoint, h: f64) -> Result<Self> {
        let xi = xi.expect(Domain::Circle)?;
        check_size(h)?;
        Ok(Region::Window { xi, h })
    }

    pub fn s_ball(xi: &ComplexPoint, h: f64) -> Result<Self> {
        let xi = xi.expect(Domain::Circle)?;
        check_size(h)?;
        Ok(Region::SBall { xi, h })
    }

    pub fn pseudo_disk(center: &ComplexPoint, r: f64) -> Result<Self> {
        if !(r > 0.0 && r < 1.0) {
            return Err(Error::InvalidParameter(alloc::format!("pseudo-hyperbolic radius {r} not in (0,1)")));
        }
        match center.domain() {
            Domain::Disk => Ok(Region::PseudoDiskD { center: center.z(), r }),
            Domain::HalfPlane => Ok(Region::PseudoDiskH { center: center.z(), r }),
            d => Err(mismatch(Domain::Disk, d)),
        }
    }

    pub fn rectangle(r: Rect) -> Result<Self> {
        if r.x0 < 0.0 {
            return Err(Error::InvalidParameter("rectangle leaves the half-plane".into()));
        }
        Ok(Region::Rectangle(r))
    }

    pub fn level_set(map: HoloMap, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0) {
            return Err(Error::InvalidParameter(alloc::format!("level {lambda} must be positive")));
        }
        Ok(Region::LevelSet { map: Box::new(map), lambda })
    }

    pub fn intersect(parts: Vec<Region>) -> Result<Self> {
        let Some(first) = parts.first() else {
            return Err(Error::InvalidParameter("empty intersection".into()));
        };
        let amb = first.ambient();
        if let Some(bad) = parts.iter().find(|p| p.ambient() != amb) {
            return Err(mismatch(amb, bad.ambient()));
        }
        Ok(Region::Intersect(parts))
    }

    /// Domain the region lives in.
    pub fn ambient(&self) -> Domain {
        match self {
            Region::Window { .. } | Region::SBall { .. } | Region::PseudoDiskD { .. } | Region::Annulus => Domain::Disk,
            Region::PseudoDiskH { .. } | Region::DyadicSquare(_) | Region::OmegaBox | Region::Rectangle(_) => {
                Domain::HalfPlane
            }
            Region::Whole(d) => *d,
            Region::LevelSet { map, .. } => map.domain(),
            Region::Intersect(parts) => parts.first().map_or(Domain::Plane, Region::ambient),
        }
    }

    pub fn contains(&self, z: &ComplexPoint) -> Result<bool> {
        let amb = self.ambient();
        if z.domain() != amb {
            return Err(mismatch(amb, z.domain()));
        }
        Ok(self.contains_raw(z.z()))
    }

    /// Membership for a point already known to lie in the ambient domain.
    pub fn contains_raw(&self, z: C64) -> bool {
        match self {
            Region::Window { xi, h } => {
                z.norm_sqr() >= (1.0 - h) * (1.0 - h) && {
                    let q = z * xi.conj();
                    fabs(atan2(q.im, q.re)) <= *h
                }
            }
            Region::SBall { xi, h } => (z - xi).norm_sqr() <= h * h,
            Region::PseudoDiskD { center, r } => pseudo_distance_disk(*center, z) < *r,
            Region::PseudoDiskH { center, r } => pseudo_distance_half(*center, z) < *r,
            Region::DyadicSquare(l) => l.bounds().contains(z),
            Region::OmegaBox => z.re > 0.0 && z.re < 2.0 && z.im > -1.0 && z.im < 1.0,
            Region::Annulus => {
                let r2 = z.norm_sqr();
                r2 > ANNULUS_INNER * ANNULUS_INNER && r2 < 1.0
            }
            Region::Rectangle(r) => r.contains(z),
            Region::Whole(d) => d.admits(z),
            Region::LevelSet { map, lambda } => map.eval_raw(z).norm_sqr() > lambda * lambda,
            Region::Intersect(parts) => parts.iter().all(|p| p.contains_raw(z)),
        }
    }

    /// A rectangle containing the region, for half-plane regions that are bounded.
    pub fn bounding_rect(&self) -> Option<Rect> {
        match self {
            Region::PseudoDiskH { center, r } => {
                let (c, rad) = pseudo_disk_euclidean(*center, *r);
                Some(Rect { x0: c.re - rad, x1: c.re + rad, y0: c.im - rad, y1: c.im + rad })
            }
            Region::DyadicSquare(l) => Some(l.bounds()),
            Region::OmegaBox => Some(Rect::omega()),
            Region::Rectangle(r) => Some(*r),
            Region::Intersect(parts) => {
                let mut acc: Option<Rect> = None;
                for p in parts {
                    if let Some(b) = p.bounding_rect() {
                        acc = Some(match acc {
                            None => b,
                            Some(a) => a.intersect(&b).unwrap_or(Rect { x0: a.x0, x1: a.x0, y0: a.y0, y1: a.y0 }),
                        });
                    }
                }
                acc
            }
            _ => None,
        }
    }

    /// Whether membership requires evaluating an analytic map.
    pub fn involves_map(&self) -> bool {
        match self {
            Region::LevelSet { .. } => true,
            Region::Intersect(parts) => parts.iter().any(Region::involves_map),
            _ => false,
        }
    }

    /// Polar description `(r0, r1, theta_center, half_angle)` for regions of the
    /// disk that are polar rectangles.
    pub(crate) fn polar_box(&self) -> Option<(f64, f64, f64, f64)> {
        match self {
            Region::Whole(Domain::Disk) => Some((0.0, 1.0, 0.0, PI)),
            Region::Annulus => Some((ANNULUS_INNER, 1.0, 0.0, PI)),
            Region::Window { xi, h } => Some((1.0 - h, 1.0, atan2(xi.im, xi.re), *h)),
            _ => None,
        }
    }
}

fn check_size(h: f64) -> Result<()> {
    if h > 0.0 && h < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(alloc::format!("size h = {h} not in (0,1)")))
    }
}

/// `e^(-2 pi)` computed at runtime, for tests.
pub fn annulus_inner_radius() -> f64 {
    exp(-2.0 * PI)
}

/// Largest pseudo-hyperbolic distance from the center of a dyadic square to
/// its points. Sub-level sets of `rho(., c)` are Euclidean disks, so the
/// maximum over a rectangle sits at a corner.
pub fn dyadic_pseudo_radius(l: &DyadicIndex) -> f64 {
    let b = l.bounds();
    let c = l.center();
    [C64::new(b.x0, b.y0), C64::new(b.x1, b.y0), C64::new(b.x0, b.y1), C64::new(b.x1, b.y1)]
        .iter()
        .map(|&z| if z.re <= 0.0 { 1.0 } else { pseudo_distance_half(c, z) })
        .fold(0.0, f64::max)
}

/// `sqrt(4/5)`: every square with `j >= 1` lies inside `Delta(c_l, s)`.
pub fn non_touching_radius() -> f64 {
    sqrt(0.8)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: C64, b: C64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn cayley_examples() {
        let z0 = ComplexPoint::disk(0.0, 0.0).unwrap();
        let w = cayley(&z0).unwrap();
        assert_eq!(w.domain(), Domain::HalfPlane);
        assert_eq!(w.z(), C64::new(1.0, 0.0));
        let one = ComplexPoint::half_plane(1.0, 0.0).unwrap();
        assert_eq!(cayley(&one).unwrap().z(), C64::new(0.0, 0.0));
        let p = ComplexPoint::disk(0.3, 0.1).unwrap();
        let back = cayley(&cayley(&p).unwrap()).unwrap();
        assert!(close(back.z(), p.z(), 1e-14));
        assert_eq!(back.domain(), Domain::Disk);
    }

    #[test]
    fn cayley_pole() {
        let p = ComplexPoint::plane(-1.0, 0.0);
        assert_eq!(cayley(&p), Err(Error::PoleAtMinusOne));
    }

    #[test]
    fn exp_and_log_examples() {
        let one = ComplexPoint::half_plane(1.0, 0.0).unwrap();
        let e = exp_map(&one).unwrap();
        assert!((e.re() - 0.043_213_918_263_772_25).abs() < 1e-15);
        assert!(e.im().abs() < 1e-18);
        let back = log_map(&e).unwrap();
        assert!(close(back.z(), C64::new(1.0, 0.0), 1e-14));

        let w = ComplexPoint::half_plane(0.5, 0.999).unwrap();
        let z = exp_map(&w).unwrap();
        assert!((z.z().norm() - (-PI / 2.0).exp()).abs() < 1e-15);
        assert!((z.z().arg() + 0.999 * PI).abs() < 1e-13);
        assert!(close(log_map(&z).unwrap().z(), w.z(), 1e-13));
    }

    #[test]
    fn log_errors() {
        let tiny = ComplexPoint::disk(1e-3, 0.0).unwrap();
        assert_eq!(log_map(&tiny), Err(Error::OutsideAnnulus));
        let slit = ComplexPoint::disk(-0.5, 0.0).unwrap();
        assert_eq!(log_map(&slit), Err(Error::OnBranchSlit));
        let hp = ComplexPoint::half_plane(0.5, 0.0).unwrap();
        assert!(matches!(log_map(&hp), Err(Error::DomainMismatch { .. })));
        assert!((annulus_inner_radius() - ANNULUS_INNER).abs() < 1e-18);
    }

    #[test]
    fn pseudo_distance_examples() {
        let zero = ComplexPoint::disk(0.0, 0.0).unwrap();
        let w = ComplexPoint::disk(0.3, -0.4).unwrap();
        assert!((pseudo_distance(&zero, &w).unwrap() - 0.5).abs() < 1e-15);
        let one = ComplexPoint::half_plane(1.0, 0.0).unwrap();
        let x = ComplexPoint::half_plane(3.0, 0.0).unwrap();
        assert!((pseudo_distance(&one, &x).unwrap() - 0.5).abs() < 1e-15);
        let e = ComplexPoint::disk((-PI).exp(), 0.0).unwrap();
        assert!((pseudo_distance(&e, &zero).unwrap() - (-PI).exp()).abs() < 1e-17);
        assert!(matches!(pseudo_distance(&zero, &one), Err(Error::DomainMismatch { .. })));
    }

    #[test]
    fn region_examples() {
        let xi = ComplexPoint::circle(0.0);
        let w = Region::window(&xi, 0.1).unwrap();
        assert!(w.contains(&ComplexPoint::disk(0.95, 0.0).unwrap()).unwrap());
        assert!(!w.contains(&ComplexPoint::disk(0.5, 0.0).unwrap()).unwrap());
        let c = ComplexPoint::half_plane(1.0, 0.0).unwrap();
        let pd = Region::pseudo_disk(&c, 0.25).unwrap();
        assert!(!pd.contains(&ComplexPoint::half_plane(2.0, 0.0).unwrap()).unwrap());
        assert!(pd.contains(&ComplexPoint::half_plane(1.2, 0.1).unwrap()).unwrap());
        assert!(matches!(w.contains(&ComplexPoint::half_plane(0.5, 0.0).unwrap()), Err(Error::DomainMismatch { .. })));
        assert!(Region::window(&xi, 1.0).is_err());
        assert!(Region::window(&ComplexPoint::disk(0.5, 0.0).unwrap(), 0.1).is_err());
    }

    #[test]
    fn dyadic_examples() {
        let root = DyadicIndex::new(0, 0, 0).unwrap();
        assert_eq!(root.bounds(), Rect::omega());
        assert_eq!(root.center(), C64::new(1.0, 0.0));
        let l = DyadicIndex::new(1, 1, 1).unwrap();
        assert_eq!(l.bounds(), Rect { x0: 1.0, x1: 2.0, y0: 0.0, y1: 1.0 });
        assert_eq!(l.center(), C64::new(1.5, 0.5));
        assert!(!l.touches_boundary());
        let kids = root.children();
        let area: f64 = kids.iter().map(|c| c.bounds().area()).sum();
        assert_eq!(area, 4.0);
        for a in &kids {
            for b in &kids {
                if a != b {
                    assert!(a.bounds().intersect(&b.bounds()).is_none());
                }
            }
            assert_eq!(a.parent(), Some(root));
            assert!(root.is_ancestor_of(a));
        }
        assert!(matches!(DyadicIndex::new(2, 4, 0), Err(Error::InvalidIndex { .. })));
    }

    #[test]
    fn containing_square() {
        let z = C64::new(0.1, 0.9);
        for n in 0..13 {
            let l = DyadicIndex::containing(z, n).unwrap();
            assert!(l.bounds().contains(z));
            assert_eq!(l.n, n);
        }
        assert!(!DyadicIndex::on_grid_line(C64::new(1.0, 0.3), 0));
        assert!(DyadicIndex::on_grid_line(C64::new(1.0, 0.3), 1));
        assert!(!DyadicIndex::on_grid_line(C64::new(0.1, 0.9), 12));
    }

    #[test]
    fn bounding_box_examples() {
        let c = ComplexPoint::half_plane(1.0, 0.0).unwrap();
        let b = pseudo_disk_bounding_box(&c, 0.25).unwrap();
        assert!((b.x0 - 0.6).abs() < 1e-15);
        assert!((b.x1 - 5.0 / 3.0).abs() < 1e-15);
        assert!((b.y1 - 8.0 / 9.0).abs() < 1e-15);
        assert!((b.y0 + 8.0 / 9.0).abs() < 1e-15);
        let d = pseudo_disk_bounding_box(&c, 0.0).unwrap();
        assert_eq!((d.x0, d.x1, d.y0, d.y1), (1.0, 1.0, 0.0, 0.0));
        let h = ComplexPoint::half_plane(0.3, 0.0).unwrap();
        let bh = pseudo_disk_bounding_box(&h, 0.25).unwrap();
        assert!((bh.x1 - 0.3 * b.x1).abs() < 1e-15 && (bh.y1 - 0.3 * b.y1).abs() < 1e-15);
    }

    #[test]
    fn pseudo_radius_of_non_touching_squares() {
        for n in 1..8 {
            for l in DyadicIndex::generation(n).filter(|l| l.j >= 1).take(50) {
                assert!(dyadic_pseudo_radius(&l) <= non_touching_radius());
            }
        }
        assert_eq!(dyadic_pseudo_radius(&DyadicIndex::root()), 1.0);
    }
}
