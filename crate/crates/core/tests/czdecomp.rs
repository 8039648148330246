use carleson_core::czdecomp::*;
use carleson_core::geometry::{DyadicIndex, Rect};
use carleson_core::measures::integrate;
use carleson_core::pullback::sigma_distance;
use carleson_core::rng;
use carleson_core::selfmaps::{catalog, CatalogFamily};
use carleson_core::{
    ComplexPoint, Domain, Error, HoloMap, IntegrationConfig, MeasureKind, Region, WeightParameter, C64,
};
use std::f64::consts::PI;

const SCALED_EXP_QUARTIC: &str = "affine:0.42,0 o expquartic";

fn map(d: &str) -> HoloMap {
    d.parse().unwrap()
}

fn shallow(n_max: u32) -> CzConfig {
    CzConfig { n_max, ..CzConfig::default() }
}

/// Midpoint rule with `m x m` cells: an oracle independent of the Gauss code path.
fn midpoint_average(f: &HoloMap, b: &Rect, m: usize) -> f64 {
    let (dx, dy) = ((b.x1 - b.x0) / m as f64, (b.y1 - b.y0) / m as f64);
    let mut s = 0.0;
    for i in 0..m {
        for k in 0..m {
            s += f.eval_raw(C64::new(b.x0 + (i as f64 + 0.5) * dx, b.y0 + (k as f64 + 0.5) * dy)).norm();
        }
    }
    s / (m * m) as f64
}

fn sample_omega(r: &mut rng::Stream) -> C64 {
    C64::new(2.0 * rng::uniform(r), -1.0 + 2.0 * rng::uniform(r))
}

#[test]
fn tower_property() {
    // |f| is smooth on the closed box for these maps, so the error estimates are reliable.
    for d in [SCALED_EXP_QUARTIC, "conj(lens:0.5)", "affine:0.5,0.2"] {
        let f = map(d);
        let tables: Vec<_> = (0..=5).map(|n| conditional_expectation(&f, n, &shallow(5)).unwrap()).collect();
        for n in 1..tables.len() {
            let defect = tower_defect(&tables[n - 1], &tables[n]);
            assert!(defect <= 1e-12, "{d} generation {n}: {defect}");
        }
    }
}

#[test]
fn exp_quartic_generation_three_matches_a_dense_grid() {
    let f = HoloMap::exp_quartic();
    let t = conditional_expectation(&f, 3, &shallow(3)).unwrap();
    for l in DyadicIndex::generation(3) {
        let oracle = midpoint_average(&f, &l.bounds(), 256);
        assert!((t.value(l.j, l.k) - oracle).abs() < 1e-4, "{l:?}: {} vs {oracle}", t.value(l.j, l.k));
    }
}

#[test]
fn maximal_function_is_the_largest_containing_average() {
    let f = map(SCALED_EXP_QUARTIC);
    let z = C64::new(0.1, 0.9);
    let got = maximal_function(&f, &ComplexPoint::half_plane(z.re, z.im).unwrap(), 12, &CzConfig::default()).unwrap();
    let oracle = (0..=12)
        .map(|n| midpoint_average(&f, &DyadicIndex::containing(z, n).unwrap().bounds(), 512))
        .fold(0.0, f64::max);
    assert!((got - oracle).abs() < 1e-5, "{got} vs {oracle}");
    let root = conditional_expectation(&f, 0, &shallow(0)).unwrap().values[0];
    assert!(got >= root);
}

#[test]
fn level_set_above_one_lies_in_the_maximal_set() {
    let f = map(SCALED_EXP_QUARTIC);
    let cfg = CzConfig::default();
    let mut r = rng::stream(31, 0);
    let mut checked = 0;
    while checked < 10_000 {
        let z = sample_omega(&mut r);
        if f.eval_raw(z).norm() <= 1.1 {
            continue;
        }
        let m = maximal_function(&f, &ComplexPoint::half_plane(z.re, z.im).unwrap(), 12, &cfg).unwrap();
        assert!(m > 1.0, "Mf({z}) = {m}");
        checked += 1;
    }
}

#[test]
fn stopping_squares_match_brute_force() {
    for d in [SCALED_EXP_QUARTIC, "affine:0.3,0 o reciprocal", "affine:0.9,0 o conj(lens:0.5)"] {
        let f = map(d);
        let cfg = shallow(6);
        let Ok(cz) = cz_decompose(&f, &cfg) else { panic!("{d}: root exceeds one") };
        let lazy: Vec<DyadicIndex> = cz.squares.iter().map(|s| s.index).collect();
        let mut brute = brute_force_stopping_squares(&f, &cfg).unwrap();
        brute.sort();
        assert!(!lazy.is_empty(), "{d}");
        assert_eq!(lazy, brute, "{d}");
    }
}

#[test]
fn decomposition_of_exp_quartic_near_the_threshold() {
    let eq = HoloMap::exp_quartic();
    let e0 = conditional_expectation(&eq, 0, &shallow(0)).unwrap().values[0];
    let c = 0.9 / e0;
    let f = map(&format!("affine:{c},0 o expquartic"));
    let cz = cz_decompose(&f, &CzConfig::default()).unwrap();
    assert!((cz.root_average - 0.9).abs() < 1e-8);
    assert!(!cz.squares.is_empty());
    let tol = cz.avg_tol;
    for s in &cz.squares {
        assert!(s.average >= 1.0 - tol && s.average <= 4.0 + tol, "{s:?}");
        assert!(s.center_value <= CENTER_BOUND + 1e-9);
    }
    for (i, a) in cz.squares.iter().enumerate() {
        for b in &cz.squares[i + 1..] {
            assert!(!a.index.is_ancestor_of(&b.index) && !b.index.is_ancestor_of(&a.index));
            assert_ne!(a.index, b.index);
        }
    }
    assert!(cz.total_error < 1e-3);
}

#[test]
fn degenerate_decompositions() {
    let half = HoloMap::constant(C64::new(0.5, 0.0), Domain::HalfPlane).unwrap();
    let cz = cz_decompose(&half, &CzConfig::default()).unwrap();
    assert!(cz.squares.is_empty());
    assert_eq!(cz.residual.suspect_leaves, 0);
    let two = HoloMap::constant(C64::new(2.0, 0.0), Domain::HalfPlane).unwrap();
    assert!(matches!(cz_decompose(&two, &CzConfig::default()), Err(Error::RootAverageExceedsOne(_))));
    let disk = HoloMap::identity(Domain::Disk).unwrap();
    assert!(matches!(cz_decompose(&disk, &CzConfig::default()), Err(Error::IncompatibleChain(_))));
}

#[test]
fn homogeneity_transport() {
    let f = map(SCALED_EXP_QUARTIC);
    for (i, h) in [0.5, 0.25].into_iter().enumerate() {
        for alpha in [0.0, 1.0] {
            let mu = MeasureKind::MuX(WeightParameter::new(alpha).unwrap());
            let lhs_region = Region::intersect(vec![
                Region::level_set(f.clone(), 1.0).unwrap(),
                Region::rectangle(Rect::omega().scaled(h)).unwrap(),
            ])
            .unwrap();
            let fh = map(&format!("{SCALED_EXP_QUARTIC} o affine:{h},0"));
            let rhs_region = Region::intersect(vec![Region::level_set(fh, 1.0).unwrap(), Region::OmegaBox]).unwrap();
            let seed = 40 + 2 * i as u64;
            let lhs = integrate(&mu, &lhs_region, &IntegrationConfig::monte_carlo(1 << 19, seed)).unwrap();
            let rhs = integrate(&mu, &rhs_region, &IntegrationConfig::monte_carlo(1 << 19, seed + 1)).unwrap();
            let scale = h.powf(alpha + 2.0);
            let scaled = carleson_core::Estimate { value: scale * rhs.value, error_bar: scale * rhs.error_bar, ..rhs };
            assert!(lhs.value > 0.0);
            assert!(sigma_distance(&lhs, &scaled) < 4.0, "h {h} alpha {alpha}: {lhs:?} vs {scaled:?}");
        }
    }
}

#[test]
fn area_bound_on_the_tails() {
    let mu = MeasureKind::MuX(WeightParameter::new(0.0).unwrap());
    for (i, f) in catalog(CatalogFamily::HalfPlaneSelfMaps).iter().enumerate() {
        let f1 = f.eval_raw(C64::new(1.0, 0.0)).norm();
        let mut worst = 0.0f64;
        for (k, l) in [2.0, 5.0, 10.0, 30.0, 100.0].into_iter().enumerate() {
            let region = Region::intersect(vec![Region::level_set(f.clone(), l).unwrap(), Region::OmegaBox]).unwrap();
            let m =
                integrate(&mu, &region, &IntegrationConfig::monte_carlo(1 << 17, 100 * i as u64 + k as u64)).unwrap();
            worst = worst.max((m.value + 4.0 * m.error_bar) * l * l / (f1 * f1));
        }
        assert!(worst < 10.0, "{f}: {worst}");
    }
}

#[test]
fn precision_regions_of_a_decomposition() {
    let f = map(SCALED_EXP_QUARTIC);
    let cz = cz_decompose(&f, &CzConfig::default()).unwrap();
    let rep =
        precision_regions(&f, &cz, WeightParameter::new(0.0).unwrap(), &IntegrationConfig::monte_carlo(1 << 16, 3))
            .unwrap();
    assert_eq!(rep.regions.len(), cz.squares.len());
    // mu_0(Delta(1, 1/4)) / mu_0(Omega): the pseudo-disk is the Euclidean disk of center 17/15, radius 8/15.
    let exact = PI * (8.0f64 / 15.0).powi(2) / 4.0;
    assert!((rep.c_axis.value - exact).abs() < 4.0 * rep.c_axis.error_bar, "{:?} vs {exact}", rep.c_axis);
    let mut axis = 0;
    for r in &rep.regions {
        match r.shape {
            PrecisionShape::Square => {
                assert_eq!(r.ratio, 1.0);
                assert!(r.inside);
            }
            PrecisionShape::PseudoDisk { radius } => {
                axis += 1;
                assert_eq!(radius, AXIS_RADIUS);
                assert!((r.delta0 - 0.6).abs() < 1e-12);
                assert!(r.ratio > 0.0);
            }
        }
        assert!(r.min_sampled_ratio >= r.delta0, "{r:?}");
    }
    assert!(axis > 0);
    assert!(rep.c_emp.unwrap() > 0.0);
}

#[test]
fn axis_pseudo_disk_keeps_three_fifths() {
    let one = ComplexPoint::half_plane(1.0, 0.0).unwrap();
    let mut r = rng::stream(77, 0);
    for f in catalog(CatalogFamily::HalfPlaneSelfMaps) {
        let f1 = f.eval_raw(one.z()).norm();
        for _ in 0..10_000 {
            let z = carleson_core::geometry::half_plane_disk_point(one.z(), rng::in_disk(&mut r, AXIS_RADIUS));
            assert!(f.eval_raw(z).norm() > 0.6 * f1 * (1.0 - 1e-12), "{f} at {z}");
        }
    }
}

#[test]
fn mean_value_audits() {
    let cfg = CzConfig::default();
    let c = HoloMap::constant(C64::new(0.3, 0.4), Domain::HalfPlane).unwrap();
    let a = mean_value_audit(&c, &Rect::omega(), &cfg).unwrap();
    assert!((a.ratio - 4.0 / PI).abs() < 1e-9 && a.lower_ok);

    // Mean of |w| on [0,2] x [-1,1], from the closed form of int_0^a int_0^b r.
    let corner = |a: f64, b: f64| {
        let d = (a * a + b * b).sqrt();
        (2.0 * a * b * d + a.powi(3) * ((b + d) / a).ln() + b.powi(3) * ((a + d) / b).ln()) / 6.0
    };
    let exact = 2.0 * corner(2.0, 1.0) / 4.0;
    let id = map("affine:1,0");
    let a = mean_value_audit(&id, &Rect::omega(), &cfg).unwrap();
    assert!((a.average - exact).abs() < 1e-8, "{} vs {exact}", a.average);
    assert!((a.ratio - exact / (PI / 4.0)).abs() < 1e-8);

    let t = 0.1;
    let q = Rect::new(1.0 - t, 1.0 + t, -t, t).unwrap();
    let a = mean_value_audit(&HoloMap::exp_quartic(), &q, &cfg).unwrap();
    assert!(a.average < 1.0 && a.ratio < 4.0 / PI);
}

#[test]
fn remark_values() {
    let rep = remark_counterexample(&[0.5, 0.2, 0.1, 0.05, 0.01]).unwrap();
    assert!((rep.tau_prime_fd + 1.0 / 60.0).abs() < 0.05 / 60.0);
    assert!((rep.polynomial_integral + 1.0 / 60.0).abs() < 1e-12);
    assert!((rep.sigma[0] - 1.0).abs() < 1e-7);
    assert!(rep.sigma.windows(2).all(|w| w[0] >= w[1]));
    assert_eq!(rep.witness, Some(0.01));
    assert!(remark_counterexample(&[0.7]).is_err());
}

#[test]
fn chain_audits() {
    let quick = IntegrationConfig::monte_carlo(1 << 18, 9);
    let alpha = WeightParameter::new(0.0).unwrap();
    let half = HoloMap::constant(C64::new(0.5, 0.0), Domain::HalfPlane).unwrap();
    let rep = theo_clef_chain_audit(&half, alpha, &[1.0, 2.0], &CzConfig::default(), &quick).unwrap();
    assert_eq!(rep.stopping_squares, 0);
    assert!(rep.lhs.iter().all(|e| e.value == 0.0));
    assert!(rep.upper_constants.iter().all(Option::is_none));

    let f = map(SCALED_EXP_QUARTIC);
    let rep = theo_clef_chain_audit(&f, alpha, &[1.0, 1.05, 1.1], &CzConfig::default(), &quick).unwrap();
    assert!(rep.stopping_squares > 0 && rep.center_bound_ok);
    let cz = cz_decompose(&f, &CzConfig::default()).unwrap();
    let prec = precision_regions(&f, &cz, alpha, &IntegrationConfig::monte_carlo(1 << 16, 10)).unwrap();
    let floor = prec.c_emp.unwrap() * rep.tau_stopping;
    assert!(rep.tau_delta1.value + 4.0 * rep.tau_delta1.error_bar >= floor, "{:?} vs {floor}", rep.tau_delta1);
    assert!(rep.upper_constants.iter().all(|c| c.is_some_and(f64::is_finite)));
}
