//! Certified analytic maps between the disk and the right half-plane.
//!
//! Only families whose codomain is guaranteed are constructible:
//!
//! | family | map | why the codomain holds |
//! |---|---|---|
//! | `Identity` | `z` | trivial |
//! | `Constant(c)` | `c` | `c` is checked against the codomain |
//! | `Monomial(k)` | `z^k` | `|z^k| <= |z|` |
//! | `Blaschke` | `u prod (z - a)/(1 - conj(a) z)` | each factor is a disk automorphism |
//! | `Polynomial` | `sum a_n z^n` with `sum |a_n| <= 1` | triangle inequality |
//! | `Lens(s)` | `T((T z)^s)` | `|arg (Tz)^s| < s pi/2` |
//! | `Affine(a, b)` | `a w + b`, `a > 0`, `Re b >= 0` | `Re(a w + b) > 0` |
//! | `Reciprocal` | `1/w` | `Re(1/w) = Re w / |w|^2` |
//! | `ExpQuartic` | `exp((T w)^4)` | `|Im (Tw)^4| < 1 < pi/2` |
//! | `Cayley` | `T` | conformal |
//! | `Exponential` | `exp(-pi w)` | `|exp(-pi w)| = exp(-pi Re w)` |
//!
//! plus `Composition` (type-checked, applied right to left) and
//! `CayleyConjugate(f) = T o f o T`.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{
    cayley_raw, exp_map_raw, half_plane_disk_point, mismatch, pseudo_distance_disk, pseudo_distance_half, ComplexPoint,
    Domain,
};
use crate::math::PI;
use crate::rng;
use crate::C64;

#[derive(Debug, Clone, PartialEq)]
pub enum MapKind {
    Identity,
    Constant(C64),
    Monomial(u32),
    Blaschke {
        zeros: Vec<C64>,
        rotation: f64,
    },
    Polynomial(Vec<C64>),
    Lens(f64),
    Affine {
        a: f64,
        b: C64,
    },
    Reciprocal,
    ExpQuartic,
    Cayley,
    Exponential,
    /// Applied right to left: the last map acts first.
    Composition(Vec<HoloMap>),
    CayleyConjugate(Box<HoloMap>),
}

/// An analytic map with a certified domain and codomain.
#[derive(Debug, Clone, PartialEq)]
pub struct HoloMap {
    kind: MapKind,
    domain: Domain,
    codomain: Domain,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TransferKind {
    /// `m o T`
    ComposeWithT,
    /// `m o E`, `E(w) = exp(-pi w)`
    ComposeWithE,
    /// `T o m o T`
    ConjugateByT,
}

fn open(d: Domain) -> Result<Domain> {
    match d {
        Domain::Disk | Domain::HalfPlane => Ok(d),
        other => Err(Error::InvalidParameter(format!("maps act on open domains, not the {}", other.name()))),
    }
}

impl HoloMap {
    fn make(kind: MapKind, domain: Domain, codomain: Domain) -> Self {
        Self { kind, domain, codomain }
    }

    pub fn identity(domain: Domain) -> Result<Self> {
        let d = open(domain)?;
        Ok(Self::make(MapKind::Identity, d, d))
    }

    /// Constant map. The codomain is `domain` when it contains `c`, else the other one.
    pub fn constant(c: C64, domain: Domain) -> Result<Self> {
        let d = open(domain)?;
        let codomain = if d.admits(c) {
            d
        } else if d.cayley_image().admits(c) {
            d.cayley_image()
        } else {
            return Err(Error::UnknownSymbol(format!("constant {c} lies in neither D nor Pi+")));
        };
        Ok(Self::make(MapKind::Constant(c), d, codomain))
    }

    pub fn constant_into(c: C64, domain: Domain, codomain: Domain) -> Result<Self> {
        let (d, cd) = (open(domain)?, open(codomain)?);
        if !cd.admits(c) {
            return Err(Error::UnknownSymbol(format!("constant {c} is not in the {}", cd.name())));
        }
        Ok(Self::make(MapKind::Constant(c), d, cd))
    }

    pub fn monomial(k: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::UnknownSymbol("monomial degree must be at least 1".into()));
        }
        Ok(Self::make(MapKind::Monomial(k), Domain::Disk, Domain::Disk))
    }

    /// Finite Blaschke product `e^(i rotation) prod (z - a)/(1 - conj(a) z)`.
    pub fn blaschke(zeros: Vec<C64>, rotation: f64) -> Result<Self> {
        if zeros.is_empty() {
            return Err(Error::UnknownSymbol("Blaschke product needs at least one zero".into()));
        }
        if let Some(bad) = zeros.iter().find(|a| !Domain::Disk.admits(**a)) {
            return Err(Error::UnknownSymbol(format!("Blaschke zero {bad} is outside the disk")));
        }
        if !rotation.is_finite() {
            return Err(Error::UnknownSymbol("rotation must be finite".into()));
        }
        Ok(Self::make(MapKind::Blaschke { zeros, rotation }, Domain::Disk, Domain::Disk))
    }

    /// Polynomial admitted under `sum |a_n| <= 1` (and not a unimodular constant).
    pub fn polynomial(coeffs: Vec<C64>) -> Result<Self> {
        let total: f64 = coeffs.iter().map(|a| a.norm()).sum();
        let higher = coeffs.iter().skip(1).any(|a| *a != C64::new(0.0, 0.0));
        let a0 = coeffs.first().map_or(0.0, |a| a.norm());
        if coeffs.is_empty() || !(total <= 1.0) || (!higher && a0 >= 1.0) {
            return Err(Error::UnknownSymbol(format!("polynomial not certified: sum of |coefficients| = {total}")));
        }
        Ok(Self::make(MapKind::Polynomial(coeffs), Domain::Disk, Domain::Disk))
    }

    pub fn lens(s: f64) -> Result<Self> {
        if !(s > 0.0 && s < 1.0) {
            return Err(Error::UnknownSymbol(format!("lens parameter {s} not in (0,1)")));
        }
        Ok(Self::make(MapKind::Lens(s), Domain::Disk, Domain::Disk))
    }

    pub fn affine(a: f64, b: C64) -> Result<Self> {
        if !(a > 0.0 && a.is_finite()) || !(b.re >= 0.0) || !b.im.is_finite() {
            return Err(Error::UnknownSymbol(format!("affine map {a} w + {b} does not preserve Pi+")));
        }
        Ok(Self::make(MapKind::Affine { a, b }, Domain::HalfPlane, Domain::HalfPlane))
    }

    pub fn reciprocal() -> Self {
        Self::make(MapKind::Reciprocal, Domain::HalfPlane, Domain::HalfPlane)
    }

    /// `exp((T w)^4)` on the half-plane.
    pub fn exp_quartic() -> Self {
        Self::make(MapKind::ExpQuartic, Domain::HalfPlane, Domain::HalfPlane)
    }

    /// `T` starting from `from`.
    pub fn cayley(from: Domain) -> Result<Self> {
        let d = open(from)?;
        Ok(Self::make(MapKind::Cayley, d, d.cayley_image()))
    }

    /// `E(w) = exp(-pi w)` from `Pi+` into `D`.
    pub fn exponential() -> Self {
        Self::make(MapKind::Exponential, Domain::HalfPlane, Domain::Disk)
    }

    /// Composition, applied right to left.
    pub fn compose(maps: Vec<HoloMap>) -> Result<Self> {
        if maps.is_empty() {
            return Err(Error::IncompatibleChain("empty composition".into()));
        }
        for pair in maps.windows(2) {
            let (outer, inner) = (&pair[0], &pair[1]);
            if inner.codomain != outer.domain {
                return Err(Error::IncompatibleChain(format!(
                    "{inner} lands in the {} but {outer} acts on the {}",
                    inner.codomain.name(),
                    outer.domain.name()
                )));
            }
        }
        let domain = maps.last().map(|m| m.domain).unwrap_or(Domain::Disk);
        let codomain = maps[0].codomain;
        if maps.len() == 1 {
            return Ok(maps.into_iter().next().expect("one map"));
        }
        Ok(Self::make(MapKind::Composition(maps), domain, codomain))
    }

    /// `outer o self`.
    pub fn then(self, outer: HoloMap) -> Result<Self> {
        Self::compose(alloc::vec![outer, self])
    }

    /// `c * self` for a half-plane valued map and `c > 0`.
    pub fn scaled(self, c: f64) -> Result<Self> {
        if self.codomain != Domain::HalfPlane {
            return Err(Error::IncompatibleChain("only half-plane valued maps can be scaled".into()));
        }
        self.then(HoloMap::affine(c, C64::new(0.0, 0.0))?)
    }

    /// `T o inner o T`.
    pub fn cayley_conjugate(inner: HoloMap) -> Self {
        let (d, cd) = (inner.domain.cayley_image(), inner.codomain.cayley_image());
        Self::make(MapKind::CayleyConjugate(Box::new(inner)), d, cd)
    }

    pub fn kind(&self) -> &MapKind {
        &self.kind
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn codomain(&self) -> Domain {
        self.codomain
    }

    /// Evaluate at a point assumed to lie in the domain.
    #[inline]
    pub fn eval_raw(&self, z: C64) -> C64 {
        let one = C64::new(1.0, 0.0);
        match &self.kind {
            MapKind::Identity => z,
            MapKind::Constant(c) => *c,
            MapKind::Monomial(k) => z.powu(*k),
            MapKind::Blaschke { zeros, rotation } => {
                let mut acc = C64::from_polar(1.0, *rotation);
                for a in zeros {
                    acc *= (z - a) / (one - a.conj() * z);
                }
                acc
            }
            MapKind::Polynomial(c) => c.iter().rev().fold(C64::new(0.0, 0.0), |acc, a| acc * z + a),
            MapKind::Lens(s) => cayley_raw(cayley_raw(z).powf(*s)),
            MapKind::Affine { a, b } => z * *a + b,
            MapKind::Reciprocal => one / z,
            MapKind::ExpQuartic => cayley_raw(z).powu(4).exp(),
            MapKind::Cayley => cayley_raw(z),
            MapKind::Exponential => exp_map_raw(z),
            MapKind::Composition(maps) => maps.iter().rev().fold(z, |acc, m| m.eval_raw(acc)),
            MapKind::CayleyConjugate(inner) => cayley_raw(inner.eval_raw(cayley_raw(z))),
        }
    }

    pub fn evaluate(&self, p: &ComplexPoint) -> Result<ComplexPoint> {
        let z = p.expect(self.domain)?;
        let w = self.eval_raw(z);
        if !(w.re.is_finite() && w.im.is_finite()) {
            return Err(Error::NumericOverflow);
        }
        ComplexPoint::new(w, self.codomain)
    }

    /// Modulus of `h(0)` where `h` is the disk self-map attached to `self`:
    /// `self` itself, `T o self`, `self o T` or `T o self o T`.
    /// Schwarz-Pick for `h` gives `|h(z)| <= (|z| + a)/(1 + a |z|)`.
    pub fn disk_center_modulus(&self) -> f64 {
        let base = if self.domain == Domain::Disk { C64::new(0.0, 0.0) } else { C64::new(1.0, 0.0) };
        let w = self.eval_raw(base);
        if self.codomain == Domain::Disk {
            w.norm()
        } else {
            cayley_raw(w).norm()
        }
    }

    /// Derived map obtained by composing with `T` or `E`.
    pub fn transfer(&self, kind: TransferKind) -> Result<HoloMap> {
        match kind {
            TransferKind::ComposeWithT => {
                let t = HoloMap::cayley(self.domain.cayley_image())?;
                HoloMap::compose(alloc::vec![self.clone(), t])
            }
            TransferKind::ComposeWithE => {
                if self.domain != Domain::Disk {
                    return Err(Error::IncompatibleChain("E lands in the disk; the map must act on D".into()));
                }
                HoloMap::compose(alloc::vec![self.clone(), HoloMap::exponential()])
            }
            TransferKind::ConjugateByT => Ok(HoloMap::cayley_conjugate(self.clone())),
        }
    }
}

fn fmt_c(z: C64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.re == 0.0 {
        format!("{}i", z.im)
    } else if z.im < 0.0 {
        format!("{}-{}i", z.re, -z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

fn dom_name(d: Domain) -> &'static str {
    if d == Domain::Disk {
        "disk"
    } else {
        "halfplane"
    }
}

impl fmt::Display for HoloMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            MapKind::Identity if self.domain == Domain::Disk => write!(f, "identity"),
            MapKind::Identity => write!(f, "identity:halfplane"),
            MapKind::Constant(c) => {
                write!(f, "constant:{},{},{}", fmt_c(*c), dom_name(self.domain), dom_name(self.codomain))
            }
            MapKind::Monomial(k) => write!(f, "monomial:{k}"),
            MapKind::Blaschke { zeros, rotation } => {
                let zs: Vec<String> = zeros.iter().map(|z| fmt_c(*z)).collect();
                write!(f, "blaschke:{}", zs.join(","))?;
                if *rotation != 0.0 {
                    write!(f, ";{rotation}")?;
                }
                Ok(())
            }
            MapKind::Polynomial(c) => {
                let cs: Vec<String> = c.iter().map(|z| fmt_c(*z)).collect();
                write!(f, "poly:{}", cs.join(","))
            }
            MapKind::Lens(s) => write!(f, "lens:{s}"),
            MapKind::Affine { a, b } => write!(f, "affine:{a},{}", fmt_c(*b)),
            MapKind::Reciprocal => write!(f, "reciprocal"),
            MapKind::ExpQuartic => write!(f, "expquartic"),
            MapKind::Cayley => write!(f, "cayley:{}", dom_name(self.domain)),
            MapKind::Exponential => write!(f, "exp"),
            MapKind::Composition(maps) => {
                let parts: Vec<String> = maps
                    .iter()
                    .map(|m| match m.kind {
                        MapKind::Composition(_) => format!("({m})"),
                        _ => m.to_string(),
                    })
                    .collect();
                write!(f, "{}", parts.join(" o "))
            }
            MapKind::CayleyConjugate(inner) => write!(f, "conj({inner})"),
        }
    }
}

/// Parse `a`, `bi`, `a+bi`, `a-bi`, `i`, `-i`.
pub fn parse_complex(s: &str) -> Result<C64> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::UnknownSymbol(format!("cannot parse complex number '{s}'"));
    if t.is_empty() {
        return Err(bad());
    }
    let num = |x: &str| -> Result<f64> {
        match x {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => x.parse::<f64>().map_err(|_| bad()),
        }
    };
    if let Some(body) = t.strip_suffix('i') {
        let bytes = body.as_bytes();
        let split = (1..bytes.len())
            .rev()
            .find(|&p| (bytes[p] == b'+' || bytes[p] == b'-') && !matches!(bytes[p - 1], b'e' | b'E'));
        match split {
            Some(p) => Ok(C64::new(num(&body[..p])?, num(&body[p..])?)),
            None => Ok(C64::new(0.0, num(body)?)),
        }
    } else {
        Ok(C64::new(num(&t)?, 0.0))
    }
}

fn parse_domain(s: &str) -> Result<Domain> {
    match s.trim() {
        "disk" | "d" => Ok(Domain::Disk),
        "halfplane" | "h" | "pi+" => Ok(Domain::HalfPlane),
        o => Err(Error::UnknownSymbol(format!("unknown domain '{o}'"))),
    }
}

fn parse_f64(s: &str) -> Result<f64> {
    s.trim().parse::<f64>().map_err(|_| Error::UnknownSymbol(format!("bad number '{s}'")))
}

fn split_top(s: &str, sep: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    let mut i = 0;
    let b = s.as_bytes();
    while i < b.len() {
        let c = b[i] as char;
        if c == '(' {
            depth += 1;
        } else if c == ')' {
            depth -= 1;
        }
        if depth == 0 && s[i..].starts_with(sep) {
            out.push(cur.clone());
            cur.clear();
            i += sep.len();
            continue;
        }
        cur.push(c);
        i += 1;
    }
    out.push(cur);
    out
}

fn parse_term(t: &str) -> Result<HoloMap> {
    let t = t.trim();
    if let Some(inner) = t.strip_prefix("conj(").and_then(|r| r.strip_suffix(')')) {
        return Ok(HoloMap::cayley_conjugate(inner.parse()?));
    }
    if let Some(inner) = t.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
        return inner.parse();
    }
    let (name, args) = match t.split_once(':') {
        Some((n, a)) => (n.trim(), Some(a.trim())),
        None => (t, None),
    };
    let list = |a: Option<&str>| -> Vec<String> {
        a.map(|a| a.split(',').map(|x| x.trim().to_string()).collect()).unwrap_or_default()
    };
    match (name, args) {
        ("identity", None) => HoloMap::identity(Domain::Disk),
        ("identity", Some(d)) => HoloMap::identity(parse_domain(d)?),
        ("constant", Some(a)) => {
            let parts = list(Some(a));
            let c = parse_complex(&parts[0])?;
            match parts.len() {
                1 => HoloMap::constant(c, Domain::Disk),
                2 => HoloMap::constant(c, parse_domain(&parts[1])?),
                3 => HoloMap::constant_into(c, parse_domain(&parts[1])?, parse_domain(&parts[2])?),
                _ => Err(Error::UnknownSymbol(format!("bad constant '{t}'"))),
            }
        }
        ("monomial", Some(k)) => {
            HoloMap::monomial(k.parse::<u32>().map_err(|_| Error::UnknownSymbol(format!("bad degree '{k}'")))?)
        }
        ("blaschke", Some(a)) => {
            let (zs, rot) = match a.split_once(';') {
                Some((z, r)) => (z, parse_f64(r)?),
                None => (a, 0.0),
            };
            let zeros = zs.split(',').map(parse_complex).collect::<Result<Vec<_>>>()?;
            HoloMap::blaschke(zeros, rot)
        }
        ("poly", Some(a)) => HoloMap::polynomial(a.split(',').map(parse_complex).collect::<Result<Vec<_>>>()?),
        ("lens", Some(s)) => HoloMap::lens(parse_f64(s)?),
        ("affine", Some(a)) => {
            let parts = list(Some(a));
            if parts.len() != 2 {
                return Err(Error::UnknownSymbol(format!("affine needs 'a,b', got '{a}'")));
            }
            HoloMap::affine(parse_f64(&parts[0])?, parse_complex(&parts[1])?)
        }
        ("reciprocal", None) => Ok(HoloMap::reciprocal()),
        ("expquartic", None) => Ok(HoloMap::exp_quartic()),
        ("cayley", None) => HoloMap::cayley(Domain::Disk),
        ("cayley", Some(d)) => HoloMap::cayley(parse_domain(d)?),
        ("exp", None) => Ok(HoloMap::exponential()),
        _ => Err(Error::UnknownSymbol(format!("unknown symbol '{t}'"))),
    }
}

impl FromStr for HoloMap {
    type Err = Error;

    /// Descriptor grammar: terms joined by ` o ` (leftmost acts last), e.g.
    /// `blaschke:0.5,0.3+0.1i`, `monomial:2`, `conj(expquartic)`,
    /// `affine:0.5,0 o expquartic`.
    fn from_str(s: &str) -> Result<Self> {
        let parts = split_top(s.trim(), " o ");
        let maps = parts.iter().map(|p| parse_term(p)).collect::<Result<Vec<_>>>()?;
        HoloMap::compose(maps)
    }
}

impl Serialize for HoloMap {
    fn serialize<S: serde::Serializer>(&self, s: S) -> core::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for HoloMap {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> core::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Outcome of a sampled audit: extreme ratios and where the maximum occurred.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditSample {
    pub samples: usize,
    pub min_ratio: f64,
    pub max_ratio: f64,
    pub worst_z: C64,
    pub worst_w: Option<C64>,
    /// Bounds the ratios are expected to respect.
    pub lower_bound: f64,
    pub upper_bound: f64,
}

impl AuditSample {
    pub fn within(&self, tol: f64) -> bool {
        self.min_ratio >= self.lower_bound - tol && self.max_ratio <= self.upper_bound + tol
    }
}

fn sample_point(domain: Domain, r: &mut rng::Stream) -> C64 {
    let z = rng::in_disk(r, 1.0);
    if domain == Domain::Disk {
        z
    } else {
        cayley_raw(z)
    }
}

fn rho_on(domain: Domain, a: C64, b: C64) -> f64 {
    if domain == Domain::Disk {
        pseudo_distance_disk(a, b)
    } else {
        pseudo_distance_half(a, b)
    }
}

/// Largest ratio `rho(m(z), m(w)) / rho(z, w)` over random pairs. Half-plane
/// valued maps are measured with the half-plane metric, which is the disk
/// metric after composing with `T`.
pub fn schwarz_pick_audit(m: &HoloMap, pair_count: usize, seed: u64) -> Result<AuditSample> {
    if pair_count == 0 {
        return Err(Error::InvalidParameter("pair_count must be positive".into()));
    }
    let mut r = rng::stream(seed, 0);
    let mut out = AuditSample {
        samples: 0,
        min_ratio: f64::INFINITY,
        max_ratio: 0.0,
        worst_z: C64::new(0.0, 0.0),
        worst_w: None,
        lower_bound: 0.0,
        upper_bound: 1.0,
    };
    while out.samples < pair_count {
        let z = sample_point(m.domain, &mut r);
        let w = sample_point(m.domain, &mut r);
        let d = rho_on(m.domain, z, w);
        if !(d > 1e-9) {
            continue;
        }
        let img = rho_on(m.codomain, m.eval_raw(z), m.eval_raw(w));
        let ratio = img / d;
        if !ratio.is_finite() {
            return Err(Error::NumericOverflow);
        }
        out.samples += 1;
        out.min_ratio = out.min_ratio.min(ratio);
        if ratio > out.max_ratio || out.worst_w.is_none() {
            out.max_ratio = out.max_ratio.max(ratio);
            out.worst_z = z;
            out.worst_w = Some(w);
        }
    }
    Ok(out)
}

/// Extremes of `|f(z)| / |f(c)|` over `Delta(c, s)` for `f: Pi+ -> Pi+`.
/// Harnack-type bound: the ratio lies in `[1/M_s, M_s]`, `M_s = (1+s)/(1-s)`.
pub fn harnack_audit(f: &HoloMap, c: &ComplexPoint, s: f64, sample_count: usize, seed: u64) -> Result<AuditSample> {
    if f.domain != Domain::HalfPlane || f.codomain != Domain::HalfPlane {
        return Err(mismatch(Domain::HalfPlane, if f.domain != Domain::HalfPlane { f.domain } else { f.codomain }));
    }
    let c = c.expect(Domain::HalfPlane)?;
    if !(0.0..1.0).contains(&s) {
        return Err(Error::InvalidParameter(format!("radius {s} not in [0,1)")));
    }
    let fc = f.eval_raw(c).norm();
    let m = crate::geometry::harnack_constant(s);
    let mut r = rng::stream(seed, 0);
    let mut out = AuditSample {
        samples: sample_count,
        min_ratio: f64::INFINITY,
        max_ratio: 0.0,
        worst_z: c,
        worst_w: None,
        lower_bound: 1.0 / m,
        upper_bound: m,
    };
    for _ in 0..sample_count {
        let z = half_plane_disk_point(c, rng::in_disk(&mut r, s));
        let ratio = f.eval_raw(z).norm() / fc;
        out.min_ratio = out.min_ratio.min(ratio);
        if ratio > out.max_ratio {
            out.max_ratio = ratio;
            out.worst_z = z;
        }
    }
    Ok(out)
}

/// `|g(e^-pi)| / |g(0)|` for `g: D -> Pi+`; Schwarz-Pick bounds it by `1 / tanh(pi)`.
pub fn growth_ratio(g: &HoloMap) -> Result<f64> {
    if g.domain != Domain::Disk || g.codomain != Domain::HalfPlane {
        return Err(Error::IncompatibleChain("growth bound needs g: D -> Pi+".into()));
    }
    let e = libm::exp(-PI);
    Ok(g.eval_raw(C64::new(e, 0.0)).norm() / g.eval_raw(C64::new(0.0, 0.0)).norm())
}

/// Families of the built-in test catalog.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CatalogFamily {
    /// Symbols `D -> D`.
    DiskSymbols,
    /// Test functions `D -> Pi+`.
    DiskToHalfPlane,
    /// Test functions `Pi+ -> Pi+`.
    HalfPlaneSelfMaps,
}

const DISK_SYMBOLS: &[&str] = &[
    "identity",
    "monomial:2",
    "blaschke:0.5",
    "blaschke:0.5,0.3+0.1i",
    "poly:0.2,0.5,0.3",
    "lens:0.5",
    "constant:0.3+0.2i",
    "conj(expquartic)",
];

const DISK_TO_HALF_PLANE: &[&str] =
    &["cayley", "cayley o monomial:2", "cayley o blaschke:0.5", "cayley o lens:0.5", "expquartic o cayley"];

const HALF_PLANE_SELF_MAPS: &[&str] =
    &["identity:halfplane", "reciprocal", "expquartic", "affine:0.5,0.2i", "conj(lens:0.5)", "conj(blaschke:0.5)"];

/// Descriptors of a catalog family.
pub fn catalog_descriptors(family: CatalogFamily) -> &'static [&'static str] {
    match family {
        CatalogFamily::DiskSymbols => DISK_SYMBOLS,
        CatalogFamily::DiskToHalfPlane => DISK_TO_HALF_PLANE,
        CatalogFamily::HalfPlaneSelfMaps => HALF_PLANE_SELF_MAPS,
    }
}

/// Parsed maps of a catalog family.
pub fn catalog(family: CatalogFamily) -> Vec<HoloMap> {
    catalog_descriptors(family).iter().map(|d| d.parse().expect("catalog descriptors parse")).collect()
}
