//! Orlicz functions and the finite-grid compactness test for composition
//! operators on weighted Bergman-Orlicz spaces.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::math::{log, pow};
use crate::pullback::CarlesonProfile;
use crate::stats::loglog_slope;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum OrliczFunction {
    /// `x^p`, `p > 1`.
    Power(f64),
    /// `exp(x^q) - 1`, `q >= 1`.
    ExpPower(f64),
    /// `x^p log(e - 1 + x)^a`, `p > 1`, `a >= 0`.
    PowerLog { p: f64, a: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    Forward,
    Inverse,
}

const E_MINUS_ONE: f64 = core::f64::consts::E - 1.0;

impl OrliczFunction {
    pub fn power(p: f64) -> Result<Self> {
        if !(p > 1.0 && p.is_finite()) {
            return Err(Error::InvalidParameter(alloc::format!("power exponent {p} must exceed 1")));
        }
        Ok(Self::Power(p))
    }

    pub fn exp_power(q: f64) -> Result<Self> {
        if !(q >= 1.0 && q.is_finite()) {
            return Err(Error::InvalidParameter(alloc::format!("exponential exponent {q} must be at least 1")));
        }
        Ok(Self::ExpPower(q))
    }

    pub fn power_log(p: f64, a: f64) -> Result<Self> {
        if !(p > 1.0 && p.is_finite() && a >= 0.0 && a.is_finite()) {
            return Err(Error::InvalidParameter(alloc::format!("power-log needs p > 1 and a >= 0, got {p}, {a}")));
        }
        Ok(Self::PowerLog { p, a })
    }

    fn forward(&self, x: f64) -> f64 {
        match *self {
            Self::Power(p) => pow(x, p),
            Self::ExpPower(q) => libm::expm1(pow(x, q)),
            Self::PowerLog { p, a } => pow(x, p) * pow(log(E_MINUS_ONE + x), a),
        }
    }

    fn inverse(&self, y: f64) -> f64 {
        if y == f64::INFINITY {
            return f64::INFINITY;
        }
        match *self {
            Self::Power(p) => pow(y, 1.0 / p),
            Self::ExpPower(q) => pow(libm::log1p(y), 1.0 / q),
            Self::PowerLog { .. } => self.bisect(y),
        }
    }

    fn bisect(&self, y: f64) -> f64 {
        if y == 0.0 {
            return 0.0;
        }
        let (mut lo, mut hi) = (0.0, 1.0);
        while self.forward(hi) < y {
            lo = hi;
            hi *= 2.0;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.forward(mid) < y {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }
}

/// `Psi(x)` or `Psi^-1(x)`.
pub fn psi(f: &OrliczFunction, x: f64, direction: Direction) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::NegativeInput(x));
    }
    Ok(match direction {
        Direction::Forward => f.forward(x),
        Direction::Inverse => f.inverse(x),
    })
}

fn fmt_num(v: f64) -> String {
    alloc::format!("{v}")
}

impl fmt::Display for OrliczFunction {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Self::Power(p) => write!(out, "power:{}", fmt_num(p)),
            Self::ExpPower(q) => write!(out, "exppower:{}", fmt_num(q)),
            Self::PowerLog { p, a } => write!(out, "powerlog:{},{}", fmt_num(p), fmt_num(a)),
        }
    }
}

impl FromStr for OrliczFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::UnknownSymbol(s.into());
        let (name, args) = s.split_once(':').ok_or_else(bad)?;
        let nums = args.split(',').map(|a| a.trim().parse::<f64>().map_err(|_| bad())).collect::<Result<Vec<_>>>()?;
        match (name.trim(), nums.as_slice()) {
            ("power", [p]) => Self::power(*p),
            ("exppower", [q]) => Self::exp_power(*q),
            ("powerlog", [p, a]) => Self::power_log(*p, *a),
            _ => Err(bad()),
        }
    }
}

impl TryFrom<String> for OrliczFunction {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<OrliczFunction> for String {
    fn from(f: OrliczFunction) -> String {
        alloc::string::ToString::to_string(&f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Variant {
    /// Built on the Carleson function `rho`.
    Necessary,
    /// Built on the running maximum `K`.
    Sufficient,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    CompactIndicated,
    NotCompactIndicated,
    Inconclusive,
}

/// Thresholds turning an indicator sequence into a verdict.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerdictRules {
    /// Required decrease factor from the first to the last value.
    pub decrease_factor: f64,
    /// Upper bound on the last value for a compact verdict.
    pub compact_below: f64,
    /// Lower bound over the last decade for a non-compact verdict.
    pub noncompact_above: f64,
    /// Relative error on `rho` at the smallest `h` beyond which the profile is too noisy.
    pub max_rel_error: f64,
}

impl Default for VerdictRules {
    fn default() -> Self {
        Self { decrease_factor: 10.0, compact_below: 0.05, noncompact_above: 0.2, max_rel_error: 0.25 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompactnessVerdict {
    pub variant: Variant,
    pub orlicz: OrliczFunction,
    pub alpha: f64,
    /// Decreasing, as in the profile.
    pub h: Vec<f64>,
    pub indicator: Vec<f64>,
    /// Log-log slope of the positive part of the sequence against `h`.
    pub trend_slope: Option<f64>,
    pub verdict: Verdict,
    /// Set when the small-`h` error bars forced the verdict.
    pub profile_too_noisy: bool,
    pub rules: VerdictRules,
}

/// Ratio `Psi^-1(1/h^(alpha+2)) / Psi^-1(1/m)` where `m` is `rho(h)` or `h^(alpha+2) K(h)`.
fn indicator_value(f: &OrliczFunction, scale: f64, mass: f64) -> f64 {
    if mass <= 0.0 {
        return 0.0;
    }
    f.inverse(1.0 / scale) / f.inverse(1.0 / mass)
}

/// Finite-grid reading of the compactness criterion.
pub fn compactness_indicator(
    f: &OrliczFunction,
    profile: &CarlesonProfile,
    variant: Variant,
    rules: &VerdictRules,
) -> Result<CompactnessVerdict> {
    let n = profile.h.len();
    if n < 2 || profile.rho.len() != n || profile.k.len() != n {
        return Err(Error::InvalidGrid("profile needs at least two consistent entries".into()));
    }
    let (h_max, h_min) = (profile.h[0], profile.h[n - 1]);
    if profile.h.windows(2).any(|w| !(w[0] > w[1])) {
        return Err(Error::InvalidGrid("profile sizes must be strictly decreasing".into()));
    }
    if h_max / h_min < 100.0 * (1.0 - 1e-12) {
        return Err(Error::InvalidGrid(alloc::format!(
            "h grid spans {:.3} decades, need 2",
            libm::log10(h_max / h_min)
        )));
    }
    let e = profile.alpha + 2.0;
    let indicator: Vec<f64> = (0..n)
        .map(|i| {
            let scale = pow(profile.h[i], e);
            let mass = match variant {
                Variant::Necessary => profile.rho[i].value,
                Variant::Sufficient => scale * profile.k[i],
            };
            indicator_value(f, scale, mass)
        })
        .collect();
    let (hs, vs): (Vec<f64>, Vec<f64>) =
        profile.h.iter().zip(&indicator).filter(|(_, v)| **v > 0.0).map(|(h, v)| (*h, *v)).unzip();
    let trend_slope = loglog_slope(&hs, &vs);

    let last_rho = &profile.rho[n - 1];
    let profile_too_noisy = last_rho.value > 0.0 && last_rho.error_bar > rules.max_rel_error * last_rho.value;
    let first = indicator[0];
    let last = indicator[n - 1];
    let decade_min = profile
        .h
        .iter()
        .zip(&indicator)
        .filter(|(h, _)| **h <= 10.0 * h_min * (1.0 + 1e-12))
        .map(|(_, v)| *v)
        .fold(f64::INFINITY, f64::min);
    let verdict = if profile_too_noisy {
        Verdict::Inconclusive
    } else if last < rules.compact_below && (last == 0.0 || first >= rules.decrease_factor * last) {
        Verdict::CompactIndicated
    } else if decade_min >= rules.noncompact_above {
        Verdict::NotCompactIndicated
    } else {
        Verdict::Inconclusive
    };
    Ok(CompactnessVerdict {
        variant,
        orlicz: *f,
        alpha: profile.alpha,
        h: profile.h.clone(),
        indicator,
        trend_slope,
        verdict,
        profile_too_noisy,
        rules: *rules,
    })
}

/// Both variants side by side, for the pull-back case where they should agree.
pub fn compare_variants(
    f: &OrliczFunction,
    profile: &CarlesonProfile,
    rules: &VerdictRules,
) -> Result<(CompactnessVerdict, CompactnessVerdict)> {
    Ok((
        compactness_indicator(f, profile, Variant::Necessary, rules)?,
        compactness_indicator(f, profile, Variant::Sufficient, rules)?,
    ))
}

/// `Psi(x) / x` on a growth grid, for checking superlinear growth.
pub fn growth_ratios(f: &OrliczFunction, xs: &[f64]) -> Vec<f64> {
    xs.iter().map(|x| f.forward(*x) / x).collect()
}
