//! Command execution.

use carleson_core::czdecomp::{cz_decompose, remark_counterexample, CzConfig};
use carleson_core::orlicz::compare_variants;
use carleson_core::orlicz::VerdictRules;
use carleson_core::pullback::{carleson_profile, scaling_experiment, tail_inequality_audit};
use carleson_core::ComplexPoint;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{Command, ExperimentConfig};
use crate::error::LabError;
use crate::report::{Check, Report};
use crate::selftest;

/// Tolerance on the summed quadrature error of a decomposition.
pub const CZ_TOTAL_ERROR_LIMIT: f64 = 1e-3;

fn value<T: Serialize>(t: &T) -> Result<Value, LabError> {
    Ok(serde_json::to_value(t)?)
}

/// Run one command: audited checks and the payload.
pub fn execute(cfg: &ExperimentConfig) -> Result<(Vec<Check>, Value), LabError> {
    let alpha = cfg.weight()?;
    let ic = cfg.integration();
    match cfg.command {
        Command::Scaling => {
            let phi = cfg.map()?;
            let xi = ComplexPoint::circle(cfg.xi_angle);
            let r = scaling_experiment(&phi, alpha, &xi, &cfg.h.points(), &cfg.eps.points(), &ic, cfg.alarm)?;
            let mut checks = vec![Check::new(
                "no-alarms",
                r.alarms.is_empty(),
                format!("{} ratios above {}", r.alarms.len(), r.alarm),
            )];
            let floor = cfg.alpha + 2.0 - 0.15;
            for (h, s) in r.h.iter().zip(&r.slope) {
                if let Some(s) = s {
                    checks.push(Check::new(
                        &format!("slope(h={h:.4})"),
                        *s >= floor,
                        format!("{s:.4} vs floor {floor:.4}"),
                    ));
                }
            }
            Ok((checks, value(&r)?))
        }
        Command::Profile => {
            let p = carleson_profile(&cfg.map()?, alpha, &cfg.h.points(), cfg.xi_count, &ic)?;
            Ok((Vec::new(), value(&p)?))
        }
        Command::Tail => {
            let r = tail_inequality_audit(cfg.audit.kind(), &cfg.map()?, alpha, &cfg.lambda.points(), &ic, cfg.c1)?;
            let detail = match r.trend_slope {
                Some(s) => format!("slope {s:.4}"),
                None => "no resolved levels".into(),
            };
            Ok((vec![Check::new("bounded-trend", !r.growth_flag, detail)], value(&r)?))
        }
        Command::Czd => {
            let cz_cfg = CzConfig { n_max: cfg.n_max, ..CzConfig::default() };
            let r = cz_decompose(&cfg.map()?, &cz_cfg)?;
            let tol = r.total_error;
            let bad = r.squares.iter().filter(|s| s.average < 1.0 - tol || s.average > 4.0 + tol).count();
            let checks = vec![
                Check::new("averages-in-[1,4]", bad == 0, format!("{bad} of {} outside", r.squares.len())),
                Check::new("quadrature-error", tol <= CZ_TOTAL_ERROR_LIMIT, format!("{tol:e}")),
            ];
            Ok((checks, value(&r)?))
        }
        Command::Remark => {
            let r = remark_counterexample(&cfg.t.points())?;
            let checks = vec![
                Check::new(
                    "polynomial-identity",
                    (r.polynomial_integral + 1.0 / 60.0).abs() <= 1e-10,
                    format!("{:e}", r.polynomial_integral),
                ),
                Check::new("negative-derivative", r.tau_prime_fd < 0.0, format!("{:e}", r.tau_prime_fd)),
                Check::new("witness", r.witness.is_some(), format!("{:?}", r.witness)),
            ];
            Ok((checks, value(&r)?))
        }
        Command::Compact => {
            let p = carleson_profile(&cfg.map()?, alpha, &cfg.h.points(), cfg.xi_count, &ic)?;
            let (nec, suf) = compare_variants(&cfg.orlicz_function()?, &p, &VerdictRules::default())?;
            let ordered = nec.indicator.iter().zip(&suf.indicator).all(|(a, b)| *a <= *b * (1.0 + 1e-12));
            let selected = match cfg.variant() {
                carleson_core::orlicz::Variant::Necessary => &nec,
                carleson_core::orlicz::Variant::Sufficient => &suf,
            };
            let payload = json!({
                "verdict": value(&selected.verdict)?,
                "selected": value(selected)?,
                "necessary": value(&nec)?,
                "sufficient": value(&suf)?,
                "profile": value(&p)?,
            });
            Ok((vec![Check::new("necessary<=sufficient", ordered, "pointwise on the grid")], payload))
        }
        Command::Selftest => {
            let (checks, payload) = selftest::run(cfg)?;
            Ok((checks, payload))
        }
    }
}

/// Execute and wrap into a report; errors become error reports.
pub fn run_to_report(cfg: &ExperimentConfig) -> Result<Report, LabError> {
    match execute(cfg) {
        Ok((checks, payload)) => Report::new(cfg.command, Some(cfg.clone()), checks, payload, None),
        Err(e) => Report::new(cfg.command, Some(cfg.clone()), Vec::new(), Value::Null, Some((&e).into())),
    }
}
