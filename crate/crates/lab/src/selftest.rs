//! Reduced invariant suite, sized to run in well under a minute.

use carleson_core::czdecomp::{brute_force_stopping_squares, cz_decompose, remark_counterexample, CzConfig};
use carleson_core::measures::{integrate, window_measure_closed_form};
use carleson_core::orlicz::{compactness_indicator, psi, Direction, OrliczFunction, Variant, Verdict, VerdictRules};
use carleson_core::pullback::{carleson_profile, level_set_measure, pullback_window_measure, sigma_distance};
use carleson_core::selfmaps::{catalog, growth_ratio, harnack_audit, schwarz_pick_audit, CatalogFamily};
use carleson_core::{ComplexPoint, Domain, HoloMap, IntegrationConfig, MeasureKind, Region, WeightParameter, C64};
use serde_json::{json, Value};

use crate::config::ExperimentConfig;
use crate::error::LabError;
use crate::report::Check;

fn w(a: f64) -> WeightParameter {
    WeightParameter::new(a).expect("valid weight")
}

pub fn run(cfg: &ExperimentConfig) -> Result<(Vec<Check>, Value), LabError> {
    let seed = cfg.seed;
    let mc = |n: usize, salt: u64| IntegrationConfig::monte_carlo(n, seed.wrapping_add(salt));
    let mut checks = Vec::new();
    let mut values = serde_json::Map::new();

    let quad = IntegrationConfig::quadrature(1e-10, 1e-13);
    let mut worst = 0.0f64;
    for a in [-0.5, 0.0, 1.0, 2.5] {
        let e = integrate(&MeasureKind::BergmanA(w(a)), &Region::Whole(Domain::Disk), &quad)?;
        worst = worst.max((e.value - 1.0).abs());
    }
    checks.push(Check::new("bergman-normalization", worst <= 1e-6, format!("{worst:e}")));
    values.insert("bergman_normalization_gap".into(), json!(worst));

    let tau = integrate(&MeasureKind::TauT(w(1.0)), &Region::Whole(Domain::HalfPlane), &mc(100_000, 1))?;
    checks.push(Check::new("tau-normalization", (tau.value - 1.0).abs() <= 1e-2, format!("{}", tau.value)));
    values.insert("tau_mass".into(), json!(tau.value));

    let id = HoloMap::identity(Domain::Disk)?;
    let one = ComplexPoint::circle(0.0);
    let mut window_sigma = 0.0f64;
    for (i, (a, h)) in [(0.0, 0.1), (1.0, 0.2), (-0.5, 0.05)].into_iter().enumerate() {
        let e = pullback_window_measure(
            &id,
            w(a),
            &one,
            h,
            &IntegrationConfig { rel_tol: 0.5, ..mc(1 << 20, 10 + i as u64) },
        )?;
        let exact = window_measure_closed_form(w(a), h)?;
        window_sigma = window_sigma.max((e.value - exact).abs() / e.error_bar);
    }
    checks.push(Check::new("window-oracle", window_sigma <= 4.0, format!("{window_sigma:.3} sigma")));
    values.insert("window_sigma".into(), json!(window_sigma));

    let mut sp = 0.0f64;
    for (i, m) in catalog(CatalogFamily::DiskSymbols).iter().enumerate() {
        sp = sp.max(schwarz_pick_audit(m, 10_000, seed.wrapping_add(100 + i as u64))?.max_ratio);
    }
    checks.push(Check::new("schwarz-pick", sp <= 1.0 + 1e-12, format!("max contraction {sp}")));
    values.insert("schwarz_pick_max".into(), json!(sp));

    let c = ComplexPoint::half_plane(1.0, 0.0)?;
    let mut harnack = (f64::INFINITY, 0.0f64);
    for (i, f) in catalog(CatalogFamily::HalfPlaneSelfMaps).iter().enumerate() {
        let a = harnack_audit(f, &c, 0.25, 1000, seed.wrapping_add(200 + i as u64))?;
        harnack = (harnack.0.min(a.min_ratio), harnack.1.max(a.max_ratio));
    }
    let ok = harnack.0 >= 0.6 - 1e-9 && harnack.1 <= 5.0 / 3.0 + 1e-9;
    checks.push(Check::new("harnack-quarter", ok, format!("[{}, {}]", harnack.0, harnack.1)));

    let growth = catalog(CatalogFamily::DiskToHalfPlane)
        .iter()
        .map(growth_ratio)
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .fold(0.0f64, f64::max);
    let bound = 1.0 / std::f64::consts::PI.tanh();
    checks.push(Check::new("growth-bound", growth <= bound + 1e-12, format!("{growth} vs {bound}")));

    let remark = remark_counterexample(&[0.5, 0.25, 0.1])?;
    checks.push(Check::new(
        "remark",
        (remark.polynomial_integral + 1.0 / 60.0).abs() < 1e-10
            && remark.tau_prime_fd < 0.0
            && remark.witness.is_some(),
        format!("tau'(0) ~ {}", remark.tau_prime_fd),
    ));
    values.insert("tau_prime_fd".into(), json!(remark.tau_prime_fd));

    let f: HoloMap = "affine:0.3,0 o reciprocal".parse()?;
    let cz_cfg = CzConfig { n_max: 6, ..CzConfig::default() };
    let cz = cz_decompose(&f, &cz_cfg)?;
    let brute = brute_force_stopping_squares(&f, &cz_cfg)?;
    let lazy: Vec<_> = cz.squares.iter().map(|s| s.index).collect();
    let tol = cz.total_error;
    let in_range = cz.squares.iter().all(|s| s.average >= 1.0 - tol && s.average <= 4.0 + tol);
    checks.push(Check::new("cz-brute-force", lazy == brute && in_range, format!("{} squares", lazy.len())));
    values.insert("cz_squares".into(), json!(lazy.len()));

    let mut inverse_gap = 0.0f64;
    for d in ["power:2", "exppower:1", "powerlog:2,1"] {
        let o: OrliczFunction = d.parse()?;
        let y = psi(&o, 3.0, Direction::Forward)?;
        inverse_gap = inverse_gap.max((psi(&o, y, Direction::Inverse)? - 3.0).abs() / 3.0);
    }
    checks.push(Check::new("orlicz-inverse", inverse_gap <= 1e-10, format!("{inverse_gap:e}")));

    let h: Vec<f64> = (0..=4).map(|i| 0.4 * 10f64.powf(-(i as f64) / 2.0)).collect();
    let constant = HoloMap::constant(C64::new(0.3, 0.2), Domain::Disk)?;
    let p = carleson_profile(&constant, w(0.0), &h, Some(16), &mc(1 << 16, 300))?;
    let v = compactness_indicator(&OrliczFunction::Power(2.0), &p, Variant::Necessary, &VerdictRules::default())?;
    checks.push(Check::new("constant-compact", v.verdict == Verdict::CompactIndicated, format!("{:?}", v.verdict)));

    let g: HoloMap = "reciprocal".parse()?;
    let disk_side = g.transfer(carleson_core::selfmaps::TransferKind::ComposeWithT)?;
    let a = level_set_measure(
        &disk_side,
        &MeasureKind::BergmanA(w(0.0)),
        2.0,
        &Region::Whole(Domain::Disk),
        &mc(1 << 18, 400),
    )?;
    let b =
        level_set_measure(&g, &MeasureKind::TauT(w(0.0)), 2.0, &Region::Whole(Domain::HalfPlane), &mc(1 << 18, 401))?;
    let d = sigma_distance(&a, &b);
    checks.push(Check::new("transfer-identity", d <= 4.0, format!("{d:.3} sigma")));
    values.insert("transfer_sigma".into(), json!(d));

    Ok((checks, Value::Object(values)))
}
