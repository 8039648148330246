use carleson_core::orlicz::*;
use carleson_core::pullback::{carleson_profile, CarlesonProfile};
use carleson_core::{rng, Domain, Estimate, HoloMap, IntegrationConfig, Method, WeightParameter, C64};
use proptest::prelude::*;

fn catalog() -> Vec<OrliczFunction> {
    ["power:1.5", "power:2", "power:4", "exppower:1", "exppower:2", "powerlog:2,1", "powerlog:1.2,3"]
        .iter()
        .map(|s| s.parse().unwrap())
        .collect()
}

fn grid() -> Vec<f64> {
    (0..=16).map(|i| 0.4 * 10f64.powf(-(i as f64) / 8.0)).collect()
}

/// Profile from given `rho` values, with `K` as the running maximum from below.
fn synthetic(alpha: f64, h: &[f64], rho: &[f64]) -> CarlesonProfile {
    let e = alpha + 2.0;
    let mut k = vec![0.0; h.len()];
    let mut run = 0.0f64;
    for i in (0..h.len()).rev() {
        run = run.max(rho[i] / h[i].powf(e));
        k[i] = run;
    }
    CarlesonProfile {
        alpha,
        symbol: "synthetic".into(),
        h: h.to_vec(),
        rho: rho
            .iter()
            .map(|v| Estimate { value: *v, error_bar: 0.0, samples_used: 1, method: Method::MonteCarlo })
            .collect(),
        argmax_angle: vec![0.0; h.len()],
        hits: vec![1000; h.len()],
        k,
        xi_count: 64,
        eventually_zero: false,
        under_resolved: Vec::new(),
    }
}

fn measured(symbol: &str, alpha: f64, seed: u64) -> CarlesonProfile {
    let phi: HoloMap = symbol.parse().unwrap();
    let cfg = IntegrationConfig { rel_tol: 0.5, ..IntegrationConfig::monte_carlo(1 << 18, seed) };
    carleson_profile(&phi, WeightParameter::new(alpha).unwrap(), &grid(), Some(32), &cfg).unwrap()
}

#[test]
fn power_indicator_is_a_root_of_the_normalized_profile() {
    let prof = measured("identity", 1.0, 1);
    for p in [1.5, 2.0, 3.0] {
        let v = compactness_indicator(
            &OrliczFunction::power(p).unwrap(),
            &prof,
            Variant::Necessary,
            &VerdictRules::default(),
        )
        .unwrap();
        let via_powerlog = compactness_indicator(
            &OrliczFunction::power_log(p, 0.0).unwrap(),
            &prof,
            Variant::Necessary,
            &VerdictRules::default(),
        )
        .unwrap();
        for ((got, general), n) in v.indicator.iter().zip(&via_powerlog.indicator).zip(prof.normalized()) {
            let closed = n.powf(1.0 / p);
            assert!((got - closed).abs() <= 1e-10 * closed, "{got} vs {closed}");
            assert!((general - closed).abs() <= 1e-10 * closed, "{general} vs {closed}");
        }
    }
}

#[test]
fn necessary_never_exceeds_sufficient() {
    for (i, s) in ["identity", "monomial:2", "blaschke:0.5", "lens:0.5"].iter().enumerate() {
        let prof = measured(s, 0.0, 10 + i as u64);
        for f in catalog() {
            let (nec, suf) = compare_variants(&f, &prof, &VerdictRules::default()).unwrap();
            for (a, b) in nec.indicator.iter().zip(&suf.indicator) {
                assert!(*a <= *b * (1.0 + 1e-12), "{s} {f}: {a} > {b}");
            }
        }
    }
}

#[test]
fn catalog_is_convex_and_superlinear() {
    let mut r = rng::stream(5, 0);
    for f in catalog() {
        assert_eq!(psi(&f, 0.0, Direction::Forward).unwrap(), 0.0);
        assert_eq!(psi(&f, 0.0, Direction::Inverse).unwrap(), 0.0);
        assert!(psi(&f, -1.0, Direction::Forward).is_err());
        for _ in 0..1000 {
            let (x, y, t) = (5.0 * rng::uniform(&mut r), 5.0 * rng::uniform(&mut r), rng::uniform(&mut r));
            let mid = psi(&f, t * x + (1.0 - t) * y, Direction::Forward).unwrap();
            let chord =
                t * psi(&f, x, Direction::Forward).unwrap() + (1.0 - t) * psi(&f, y, Direction::Forward).unwrap();
            assert!(mid <= chord * (1.0 + 1e-12) + 1e-300, "{f} at {x}, {y}, {t}");
        }
        let xs: Vec<f64> = (0..12).map(|i| 2f64.powi(i)).collect();
        let g = growth_ratios(&f, &xs);
        assert!(g.windows(2).all(|w| w[1] >= w[0]), "{f}: {g:?}");
        assert!(g[g.len() - 1] > 10.0 * g[0], "{f}: {g:?}");
    }
}

#[test]
fn identity_symbol_is_not_compact() {
    let prof = measured("identity", 0.0, 20);
    let v = compactness_indicator(
        &OrliczFunction::power(2.0).unwrap(),
        &prof,
        Variant::Necessary,
        &VerdictRules::default(),
    )
    .unwrap();
    assert_eq!(v.verdict, Verdict::NotCompactIndicated, "{:?}", v.indicator);
}

#[test]
fn constant_symbol_is_compact() {
    let c = HoloMap::constant(C64::new(0.3, 0.0), Domain::Disk).unwrap();
    let cfg = IntegrationConfig::monte_carlo(1 << 16, 21);
    let prof = carleson_profile(&c, WeightParameter::new(0.0).unwrap(), &grid(), Some(32), &cfg).unwrap();
    assert!(prof.eventually_zero);
    for f in catalog() {
        for variant in [Variant::Necessary, Variant::Sufficient] {
            let v = compactness_indicator(&f, &prof, variant, &VerdictRules::default()).unwrap();
            assert!(v.indicator.iter().all(|x| *x == 0.0));
            assert_eq!(v.verdict, Verdict::CompactIndicated);
        }
    }
}

proptest! {
    #[test]
    fn inverse_undoes_forward(x in 0.0f64..50.0, which in 0usize..7) {
        let f = catalog()[which];
        let y = psi(&f, x, Direction::Forward).unwrap();
        prop_assume!(y.is_finite());
        let back = psi(&f, y, Direction::Inverse).unwrap();
        prop_assert!((back - x).abs() <= 1e-9 * (1.0 + x), "{} at {}: {}", f, x, back);
    }

    #[test]
    fn ordering_holds_on_random_profiles(values in prop::collection::vec(1e-9f64..1.0, 17), which in 0usize..7) {
        let h = grid();
        let prof = synthetic(0.5, &h, &values);
        let (nec, suf) = compare_variants(&catalog()[which], &prof, &VerdictRules::default()).unwrap();
        for (a, b) in nec.indicator.iter().zip(&suf.indicator) {
            prop_assert!(*a <= *b * (1.0 + 1e-12));
        }
    }
}
