use carleson_core::geometry::{cayley_raw, log_map_raw, ANNULUS_INNER};
use carleson_core::measures::*;
use carleson_core::rng;
use carleson_core::stats::{chi_square_uniform, ks_uniform, mean_and_se};
use carleson_core::{
    ComplexPoint, Domain, Estimate, IntegrationConfig, MeasureKind, Rect, Region, WeightParameter, C64,
};
use std::f64::consts::PI;

fn w(a: f64) -> WeightParameter {
    WeightParameter::new(a).unwrap()
}

fn quad() -> IntegrationConfig {
    IntegrationConfig::quadrature(1e-11, 1e-14)
}

/// Binomial estimate of the fraction of `samples` satisfying `hit`.
fn fraction(samples: &[ComplexPoint], hit: impl Fn(C64) -> bool) -> (f64, f64) {
    let n = samples.len() as f64;
    let p = samples.iter().filter(|z| hit(z.z())).count() as f64 / n;
    (p, (p * (1.0 - p) / n).sqrt())
}

fn random_rect(r: &mut rng::Stream, x_max: f64, y_span: f64) -> Rect {
    let (a, b) = (rng::uniform(r) * x_max, rng::uniform(r) * x_max);
    let (c, d) = ((rng::uniform(r) - 0.5) * y_span, (rng::uniform(r) - 0.5) * y_span);
    Rect::new(a.min(b), a.max(b) + 1e-3, c.min(d), c.max(d) + 1e-3).unwrap()
}

#[test]
fn density_examples() {
    let z = ComplexPoint::disk(0.3, -0.4).unwrap();
    assert_eq!(density(&MeasureKind::BergmanA(w(0.0)), &z).unwrap(), 1.0);
    let p = ComplexPoint::half_plane(3.0, 7.0).unwrap();
    assert!((density(&MeasureKind::MuX(w(2.0)), &p).unwrap() - 9.0).abs() < 1e-12);
    let one = ComplexPoint::half_plane(1.0, 0.0).unwrap();
    assert!((density(&MeasureKind::TauT(w(0.0)), &one).unwrap() - 1.0 / (4.0 * PI)).abs() < 1e-15);
}

#[test]
fn bergman_sample_moments() {
    let s = sample(&MeasureKind::BergmanA(w(0.0)), 1_000_000, 11).unwrap();
    let r2: Vec<f64> = s.iter().map(|z| z.z().norm_sqr()).collect();
    let (m, se) = mean_and_se(&r2);
    assert!((m - 0.5).abs() < 3.0 * se, "{m} +- {se}");

    let s = sample(&MeasureKind::BergmanA(w(1.0)), 1_000_000, 12).unwrap();
    let u: Vec<f64> = s.iter().map(|z| 1.0 - (1.0 - z.z().norm_sqr()).powi(2)).collect();
    let d = ks_uniform(&u);
    assert!(d < 0.002, "KS distance {d}");

    let bins = 64;
    let mut counts = vec![0u64; bins];
    for z in &s {
        let t = (z.z().arg() + PI) / (2.0 * PI);
        counts[((t * bins as f64) as usize).min(bins - 1)] += 1;
    }
    // 99.9% quantile of chi-square with 63 degrees of freedom is about 103.4.
    let chi = chi_square_uniform(&counts);
    assert!(chi < 103.4, "chi-square {chi}");
}

#[test]
fn total_masses() {
    for a in [-0.5, 0.0, 1.0, 2.5] {
        let e = integrate(&MeasureKind::BergmanA(w(a)), &Region::Whole(Domain::Disk), &quad()).unwrap();
        assert!((e.value - 1.0).abs() < 1e-6, "alpha {a}: {}", e.value);
        let t = integrate(
            &MeasureKind::TauT(w(a)),
            &Region::Whole(Domain::HalfPlane),
            &IntegrationConfig::monte_carlo(1_000_000, 5),
        )
        .unwrap();
        assert!((t.value - 1.0).abs() < 1e-3, "alpha {a}: tau {}", t.value);
    }
    let mu = integrate(&MeasureKind::MuX(w(0.0)), &Region::OmegaBox, &quad()).unwrap();
    assert!((mu.value - 4.0).abs() < 1e-10);
    let s = integrate(&MeasureKind::SigmaL(w(1.0)), &Region::OmegaBox, &quad()).unwrap();
    let expected = (1.0 - (-4.0 * PI).exp()).powi(2);
    assert!((s.value - expected).abs() < 1e-9, "{} vs {expected}", s.value);
}

#[test]
fn window_closed_form_examples() {
    assert!((window_measure_closed_form(w(0.0), 1.0).unwrap() - 1.0 / PI).abs() < 1e-15);
    assert!((window_measure_closed_form(w(0.0), 0.1).unwrap() - 0.0060479).abs() < 1e-7);
    assert!((window_measure_closed_form(w(1.0), 0.5).unwrap() - 0.28125 / PI).abs() < 1e-15);
}

#[test]
fn windows_are_rotation_invariant() {
    for a in [-0.5, 0.0, 1.5] {
        for h in [0.03, 0.2, 0.7] {
            let exact = window_measure_closed_form(w(a), h).unwrap();
            for theta in [0.0, 1.0, -2.5, 3.1] {
                let r = Region::window(&ComplexPoint::circle(theta), h).unwrap();
                let e = integrate(&MeasureKind::BergmanA(w(a)), &r, &quad()).unwrap();
                assert!(
                    (e.value - exact).abs() <= 1e-9 * exact,
                    "alpha {a} h {h} theta {theta}: {} vs {exact}",
                    e.value
                );
            }
        }
    }
}

#[test]
fn monte_carlo_pseudo_disk_area() {
    // Delta(a, r) is the Euclidean disk of radius r (1 - |a|^2) / (1 - r^2 |a|^2).
    let (a, r) = (0.5f64, 0.3f64);
    let radius = r * (1.0 - a * a) / (1.0 - r * r * a * a);
    let region = Region::pseudo_disk(&ComplexPoint::disk(a, 0.0).unwrap(), r).unwrap();
    let e = integrate(&MeasureKind::BergmanA(w(0.0)), &region, &IntegrationConfig::monte_carlo(1 << 20, 3)).unwrap();
    assert!(e.error_bar > 0.0);
    assert!((e.value - radius * radius).abs() < 4.0 * e.error_bar, "{e:?} vs {}", radius * radius);
}

#[test]
fn tau_is_the_push_forward_of_bergman() {
    let mut r = rng::stream(77, 0);
    for a in [0.0, 1.0] {
        let samples = sample(&MeasureKind::BergmanA(w(a)), 400_000, 21 + a as u64).unwrap();
        for _ in 0..10 {
            let b = random_rect(&mut r, 2.5, 4.0);
            let q = integrate(&MeasureKind::TauT(w(a)), &Region::rectangle(b).unwrap(), &quad()).unwrap();
            let (p, se) = fraction(&samples, |z| b.contains(cayley_raw(z)));
            let s = (se * se + q.error_bar * q.error_bar).sqrt();
            assert!((q.value - p).abs() <= 4.0 * s.max(1e-12), "alpha {a} {b:?}: {} vs {p} +- {se}", q.value);
        }
    }
}

#[test]
fn sigma_is_the_log_image_of_bergman() {
    let mut r = rng::stream(78, 0);
    for a in [0.0, 2.0] {
        let samples = sample(&MeasureKind::BergmanA(w(a)), 400_000, 31 + a as u64).unwrap();
        for _ in 0..10 {
            let b = random_rect(&mut r, 1.0, 1.8).intersect(&Rect::omega()).unwrap();
            let q = integrate(&MeasureKind::SigmaL(w(a)), &Region::rectangle(b).unwrap(), &quad()).unwrap();
            let (p, se) =
                fraction(&samples, |z| z.norm() > ANNULUS_INNER && log_map_raw(z).is_some_and(|l| b.contains(l)));
            assert!((q.value - p).abs() <= 4.0 * se.max(1e-12), "alpha {a} {b:?}: {} vs {p} +- {se}", q.value);
        }
    }
}

#[test]
fn mu_scales_and_translates() {
    let mut r = rng::stream(79, 0);
    for a in [-0.5, 0.0, 1.0, 3.0] {
        let m = MeasureKind::MuX(w(a));
        for _ in 0..10 {
            let b = random_rect(&mut r, 3.0, 6.0);
            let base = integrate(&m, &Region::rectangle(b).unwrap(), &quad()).unwrap().value;
            for h in [0.5, 0.125, 3.0] {
                let s = integrate(&m, &Region::rectangle(b.scaled(h)).unwrap(), &quad()).unwrap().value;
                assert!((s - h.powf(a + 2.0) * base).abs() <= 1e-9 * s.abs().max(1e-300), "alpha {a} h {h}");
            }
            for dy in [-2.0, 0.7, 10.0] {
                let t = integrate(&m, &Region::rectangle(b.translated(dy)).unwrap(), &quad()).unwrap().value;
                assert!((t - base).abs() <= 1e-10 * base);
            }
        }
    }
}

#[test]
fn density_ratios_on_omega() {
    let grid = OmegaGrid::new(400, 400).unwrap();
    let (lo, hi) = equivalence_ratio(&MeasureKind::SigmaL(w(0.0)), &MeasureKind::MuX(w(0.0)), grid).unwrap();
    // Grid cells stop half a cell short of the edges.
    let dx = 2.0 / 400.0 / 2.0;
    assert!((hi - PI * (-2.0 * PI * dx).exp()).abs() < 1e-12);
    assert!((lo - PI * (-2.0 * PI * (2.0 - dx)).exp()).abs() < 1e-16);
    let (lo, hi) = equivalence_ratio(&MeasureKind::TauT(w(0.0)), &MeasureKind::MuX(w(0.0)), grid).unwrap();
    assert!(lo > 4.0 / PI / 100.0 && hi < 4.0 / PI);
    assert!((hi - 4.0 / PI / (1.0 + dx).powi(4)).abs() < 1e-3);
    let m = MeasureKind::TauT(w(1.0));
    assert_eq!(equivalence_ratio(&m, &m, grid).unwrap(), (1.0, 1.0));
}

#[test]
fn unbounded_regions_need_finite_mass() {
    let e = integrate(&MeasureKind::MuX(w(0.0)), &Region::Whole(Domain::HalfPlane), &quad());
    assert!(e.is_err());
    let est: Estimate = integrate(&MeasureKind::BergmanA(w(0.0)), &Region::OmegaBox.clone(), &quad())
        .err()
        .map(|_| Estimate::exact(0.0))
        .unwrap_or_else(|| Estimate::exact(1.0));
    assert_eq!(est.value, 0.0, "disk measures reject half-plane regions");
}
