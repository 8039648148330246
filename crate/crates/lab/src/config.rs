//! Experiment configuration: built-in defaults, then a TOML file, then flags.

use std::fmt;

use carleson_core::orlicz::{OrliczFunction, Variant};
use carleson_core::pullback::AuditKind;
use carleson_core::{HoloMap, IntegrationConfig, Method, WeightParameter};
use clap::{Args, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::error::LabError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Subcommand)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// Window scaling table around one boundary point.
    Scaling,
    /// Carleson function of a pull-back measure.
    Profile,
    /// Tail inequality audit.
    Tail,
    /// Calderon-Zygmund decomposition on Omega.
    Czd,
    /// Averages of exp((Tz)^4) below its value at 1.
    Remark,
    /// Compactness indicator for a Bergman-Orlicz space.
    Compact,
    /// Quick run of the invariant suite.
    Selftest,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Scaling => "scaling",
            Command::Profile => "profile",
            Command::Tail => "tail",
            Command::Czd => "czd",
            Command::Remark => "remark",
            Command::Compact => "compact",
            Command::Selftest => "selftest",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum MethodName {
    Montecarlo,
    Quadrature,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum VariantName {
    Necessary,
    Sufficient,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum AuditName {
    Starting,
    Global,
    Reduction,
    TheoClef,
}

impl AuditName {
    pub fn kind(self) -> AuditKind {
        match self {
            AuditName::Starting => AuditKind::Starting,
            AuditName::Global => AuditKind::Global,
            AuditName::Reduction => AuditKind::Reduction,
            AuditName::TheoClef => AuditKind::TheoClef,
        }
    }
}

/// Log-spaced grid `min .. max` with `count` points, increasing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl GridSpec {
    pub fn points(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.max];
        }
        let (a, b) = (self.min.ln(), self.max.ln());
        (0..self.count)
            .map(|i| {
                if i == 0 {
                    self.min
                } else if i + 1 == self.count {
                    self.max
                } else {
                    (a + (b - a) * i as f64 / (self.count - 1) as f64).exp()
                }
            })
            .collect()
    }

    fn validate(&self, name: &str) -> Result<(), LabError> {
        let ok = self.min > 0.0
            && self.max.is_finite()
            && self.min <= self.max
            && self.count >= 1
            && (self.count == 1 || self.min < self.max);
        if !ok {
            return Err(LabError::InvalidGrid(format!("{name} grid {self}")));
        }
        Ok(())
    }
}

impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}] x {}", self.min, self.max, self.count)
    }
}

/// Every setting as an optional value; one layer of the configuration.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize, Args)]
#[serde(deny_unknown_fields)]
pub struct PartialConfig {
    /// Bergman weight exponent, > -1.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    /// Symbol or test-function descriptor, e.g. "blaschke:0.5,0.3+0.1i".
    #[arg(long, global = true)]
    pub symbol: Option<String>,
    /// Smallest window size of the h grid (log-spaced).
    #[arg(long, global = true)]
    pub h_min: Option<f64>,
    #[arg(long, global = true)]
    pub h_max: Option<f64>,
    #[arg(long, global = true)]
    pub h_count: Option<usize>,
    /// Smallest shrink factor of the scaling experiment.
    #[arg(long, global = true)]
    pub eps_min: Option<f64>,
    #[arg(long, global = true)]
    pub eps_max: Option<f64>,
    #[arg(long, global = true)]
    pub eps_count: Option<usize>,
    /// Smallest tail level.
    #[arg(long, global = true)]
    pub lambda_min: Option<f64>,
    #[arg(long, global = true)]
    pub lambda_max: Option<f64>,
    #[arg(long, global = true)]
    pub lambda_count: Option<usize>,
    /// Smallest half-side of the squares around 1 (remark).
    #[arg(long, global = true)]
    pub t_min: Option<f64>,
    #[arg(long, global = true)]
    pub t_max: Option<f64>,
    #[arg(long, global = true)]
    pub t_count: Option<usize>,
    /// Boundary point of the scaling experiment, as an angle.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub xi_angle: Option<f64>,
    /// Probe count for the sup over the circle.
    #[arg(long, global = true)]
    pub xi_count: Option<usize>,
    /// Orlicz function, e.g. "power:2", "exppower:1", "powerlog:2,1".
    #[arg(long, global = true)]
    pub orlicz: Option<String>,
    #[arg(long, global = true, value_enum)]
    pub variant: Option<VariantName>,
    #[arg(long, global = true, value_enum)]
    pub audit: Option<AuditName>,
    /// Smallness bound on |f(1)| for the localized tail audit.
    #[arg(long, global = true)]
    pub c1: Option<f64>,
    /// Deepest dyadic generation.
    #[arg(long, global = true)]
    pub n_max: Option<u32>,
    /// Scaling ratios above this are flagged.
    #[arg(long, global = true)]
    pub alarm: Option<f64>,
    #[arg(long, global = true, value_enum)]
    pub method: Option<MethodName>,
    /// Monte Carlo sample count.
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    #[arg(long, global = true)]
    pub max_subdivisions: Option<usize>,
    #[arg(long, global = true)]
    pub rel_tol: Option<f64>,
    #[arg(long, global = true)]
    pub abs_tol: Option<f64>,
    /// Base seed of every random stream.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<String>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Worker threads; defaults to CARLESON_LAB_THREADS, then all cores.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

macro_rules! overlay_fields {
    ($base:expr, $top:expr, $($f:ident),*) => {
        PartialConfig { $($f: $top.$f.or($base.$f)),* }
    };
}

impl PartialConfig {
    /// Values of `top` win.
    pub fn overlay(self, top: PartialConfig) -> PartialConfig {
        overlay_fields!(
            self,
            top,
            alpha,
            symbol,
            h_min,
            h_max,
            h_count,
            eps_min,
            eps_max,
            eps_count,
            lambda_min,
            lambda_max,
            lambda_count,
            t_min,
            t_max,
            t_count,
            xi_angle,
            xi_count,
            orlicz,
            variant,
            audit,
            c1,
            n_max,
            alarm,
            method,
            samples,
            max_subdivisions,
            rel_tol,
            abs_tol,
            seed,
            out,
            format,
            threads
        )
    }
}

/// Fully resolved configuration, echoed in every report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub command: Command,
    pub alpha: f64,
    pub symbol: String,
    pub h: GridSpec,
    pub eps: GridSpec,
    pub lambda: GridSpec,
    pub t: GridSpec,
    pub xi_angle: f64,
    pub xi_count: Option<usize>,
    pub orlicz: String,
    pub variant: VariantName,
    pub audit: AuditName,
    pub c1: f64,
    pub n_max: u32,
    pub alarm: f64,
    pub method: MethodName,
    pub samples: usize,
    pub max_subdivisions: usize,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub seed: u64,
    pub out: Option<String>,
    pub format: Format,
    pub threads: Option<usize>,
}

fn default_symbol(command: Command, audit: AuditName) -> &'static str {
    match command {
        Command::Tail => match audit {
            AuditName::Starting => "cayley o blaschke:0.5",
            AuditName::Reduction => "affine:0.1,0 o cayley",
            AuditName::Global => "reciprocal",
            AuditName::TheoClef => "affine:0.5,0 o reciprocal",
        },
        Command::Czd => "affine:0.3,0 o reciprocal",
        _ => "identity",
    }
}

/// Built-in defaults for a command.
pub fn defaults(command: Command) -> PartialConfig {
    let (h, samples, xi_count) = match command {
        Command::Scaling => ((0.05, 0.2, 3), 1 << 22, None),
        Command::Profile | Command::Compact => ((0.004, 0.4, 11), 1 << 22, Some(64)),
        _ => ((0.05, 0.2, 3), 1 << 20, None),
    };
    PartialConfig {
        alpha: Some(0.0),
        symbol: None,
        h_min: Some(h.0),
        h_max: Some(h.1),
        h_count: Some(h.2),
        eps_min: Some(0.05),
        eps_max: Some(1.0),
        eps_count: Some(8),
        lambda_min: Some(2.0),
        lambda_max: Some(100.0),
        lambda_count: Some(8),
        t_min: Some(0.05),
        t_max: Some(0.5),
        t_count: Some(10),
        xi_angle: Some(0.0),
        xi_count,
        orlicz: Some("power:2".into()),
        variant: Some(VariantName::Necessary),
        audit: Some(AuditName::Global),
        c1: Some(carleson_core::pullback::default_c1()),
        n_max: Some(12),
        alarm: Some(1e3),
        method: Some(MethodName::Montecarlo),
        samples: Some(samples),
        max_subdivisions: Some(20_000),
        rel_tol: Some(1e-9),
        abs_tol: Some(1e-12),
        seed: Some(20_240_601),
        out: None,
        format: Some(Format::Json),
        threads: None,
    }
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].bytes().filter(|b| *b == b'\n').count() + 1
}

/// Parse one TOML layer, reporting the line and key of the first problem.
pub fn parse_layer(text: &str) -> Result<PartialConfig, LabError> {
    toml::from_str::<PartialConfig>(text).map_err(|e| {
        let message = e.message().to_string();
        let line = e.span().map(|s| line_of(text, s.start));
        // Unknown fields are named in the message; otherwise take the key of the offending line.
        let key = message.split('`').nth(1).map(str::to_string).or_else(|| {
            let l = text.lines().nth(line? - 1)?;
            l.split_once('=').map(|(k, _)| k.trim().to_string())
        });
        LabError::Parse { line, key, message }
    })
}

/// `defaults < text < flags`, resolved and validated.
pub fn parse_config(command: Command, text: &str, flags: PartialConfig) -> Result<ExperimentConfig, LabError> {
    let layered = defaults(command).overlay(parse_layer(text)?).overlay(flags);
    resolve(command, layered)
}

fn resolve(command: Command, p: PartialConfig) -> Result<ExperimentConfig, LabError> {
    let missing =
        |k: &str| LabError::Parse { line: None, key: Some(k.into()), message: format!("missing value for {k}") };
    macro_rules! take {
        ($f:ident) => {
            p.$f.clone().ok_or_else(|| missing(stringify!($f)))?
        };
    }
    let audit = take!(audit);
    let cfg = ExperimentConfig {
        command,
        alpha: take!(alpha),
        symbol: p.symbol.clone().unwrap_or_else(|| default_symbol(command, audit).into()),
        h: GridSpec { min: take!(h_min), max: take!(h_max), count: take!(h_count) },
        eps: GridSpec { min: take!(eps_min), max: take!(eps_max), count: take!(eps_count) },
        lambda: GridSpec { min: take!(lambda_min), max: take!(lambda_max), count: take!(lambda_count) },
        t: GridSpec { min: take!(t_min), max: take!(t_max), count: take!(t_count) },
        xi_angle: take!(xi_angle),
        xi_count: p.xi_count,
        orlicz: take!(orlicz),
        variant: take!(variant),
        audit,
        c1: take!(c1),
        n_max: take!(n_max),
        alarm: take!(alarm),
        method: take!(method),
        samples: take!(samples),
        max_subdivisions: take!(max_subdivisions),
        rel_tol: take!(rel_tol),
        abs_tol: take!(abs_tol),
        seed: take!(seed),
        out: p.out.clone(),
        format: take!(format),
        threads: p.threads,
    };
    cfg.validate()?;
    Ok(cfg)
}

impl ExperimentConfig {
    /// Check that descriptors resolve and grids are usable.
    pub fn validate(&self) -> Result<(), LabError> {
        self.weight()?;
        self.map()?;
        self.orlicz_function()?;
        self.h.validate("h")?;
        self.eps.validate("eps")?;
        self.lambda.validate("lambda")?;
        self.t.validate("t")?;
        self.integration().validate()?;
        if self.threads == Some(0) {
            return Err(LabError::InvalidGrid("thread count must be positive".into()));
        }
        Ok(())
    }

    pub fn weight(&self) -> Result<WeightParameter, LabError> {
        Ok(WeightParameter::new(self.alpha)?)
    }

    pub fn map(&self) -> Result<HoloMap, LabError> {
        Ok(self.symbol.parse()?)
    }

    pub fn orlicz_function(&self) -> Result<OrliczFunction, LabError> {
        Ok(self.orlicz.parse()?)
    }

    pub fn variant(&self) -> Variant {
        match self.variant {
            VariantName::Necessary => Variant::Necessary,
            VariantName::Sufficient => Variant::Sufficient,
        }
    }

    pub fn integration(&self) -> IntegrationConfig {
        IntegrationConfig {
            method: match self.method {
                MethodName::Montecarlo => Method::MonteCarlo,
                MethodName::Quadrature => Method::AdaptiveQuadrature,
            },
            sample_count: self.samples,
            max_subdivisions: self.max_subdivisions,
            rel_tol: self.rel_tol,
            abs_tol: self.abs_tol,
            seed: self.seed,
        }
    }
}
