use carleson_core::geometry::*;
use carleson_core::rng;
use carleson_core::{ComplexPoint, Domain, DyadicIndex, Region, C64};
use proptest::prelude::*;
use std::f64::consts::PI;

fn disk_point() -> impl Strategy<Value = C64> {
    (0.0..0.999f64, -PI..PI).prop_map(|(r, t)| C64::from_polar(r, t))
}

fn half_plane_point() -> impl Strategy<Value = C64> {
    (1e-3..50.0f64, -50.0..50.0f64).prop_map(|(x, y)| C64::new(x, y))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn cayley_is_an_involution_on_the_disk(z in disk_point()) {
        let back = cayley_raw(cayley_raw(z));
        prop_assert!((back - z).norm() < 1e-12);
    }

    #[test]
    fn cayley_is_an_involution_on_the_half_plane(w in half_plane_point()) {
        let back = cayley_raw(cayley_raw(w));
        prop_assert!((back - w).norm() < 1e-12 * (1.0 + w.norm()));
    }

    #[test]
    fn cayley_preserves_pseudo_distance(a in half_plane_point(), b in half_plane_point()) {
        let half = pseudo_distance_half(a, b);
        let disk = pseudo_distance_disk(cayley_raw(a), cayley_raw(b));
        prop_assert!((half - disk).abs() < 1e-12, "{half} vs {disk}");
    }

    #[test]
    fn windows_grow_with_h(z in disk_point(), h1 in 0.01..0.98f64, dh in 0.0..0.5f64, theta in -3.0..3.0f64) {
        let xi = ComplexPoint::circle(theta);
        let h2 = (h1 + dh).min(0.99);
        let small = Region::window(&xi, h1).unwrap();
        let big = Region::window(&xi, h2).unwrap();
        prop_assert!(!small.contains_raw(z) || big.contains_raw(z));
    }

    #[test]
    fn exp_and_log_are_inverse(x in 0.0..2.0f64, y in -0.999..0.999f64) {
        prop_assume!(x > 1e-9);
        let w = C64::new(x, y);
        let back = log_map_raw(exp_map_raw(w)).unwrap();
        prop_assert!((back - w).norm() < 1e-12);
    }

    #[test]
    fn points_fall_in_exactly_one_square(x in 1e-9..1.999f64, y in -0.999..0.999f64, n in 0u32..10) {
        let z = C64::new(x, y);
        let hits = DyadicIndex::generation(n).filter(|l| l.bounds().contains(z)).count();
        prop_assert_eq!(hits, 1);
        let l = DyadicIndex::containing(z, n).unwrap();
        prop_assert!(l.bounds().contains(z));
    }
}

#[test]
fn generations_tile_omega() {
    for n in 0..=10u32 {
        let squares: Vec<_> = DyadicIndex::generation(n).collect();
        assert_eq!(squares.len(), 1usize << (2 * n));
        let area: f64 = squares.iter().map(|l| l.bounds().area()).sum();
        assert!((area - 4.0).abs() < 1e-12, "generation {n}: {area}");
        // Squares on one generation sit on a lattice, so distinct indices
        // have disjoint interiors iff their lower-left corners differ.
        let side = 2.0 / (1u64 << n) as f64;
        let mut corners: Vec<(i64, i64)> = squares
            .iter()
            .map(|l| {
                let b = l.bounds();
                assert!((b.x1 - b.x0 - side).abs() < 1e-15 && (b.y1 - b.y0 - side).abs() < 1e-15);
                ((b.x0 / side).round() as i64, ((b.y0 + 1.0) / side).round() as i64)
            })
            .collect();
        corners.sort_unstable();
        corners.dedup();
        assert_eq!(corners.len(), squares.len());
    }
}

#[test]
fn children_partition_their_parent() {
    let parent = DyadicIndex::new(3, 2, 5).unwrap();
    let kids = parent.children();
    let area: f64 = kids.iter().map(|c| c.bounds().area()).sum();
    assert!((area - parent.bounds().area()).abs() < 1e-15);
    for c in kids {
        assert_eq!(c.parent(), Some(parent));
        assert!(parent.is_ancestor_of(&c));
    }
}

#[test]
fn non_touching_squares_are_pseudo_hyperbolically_small() {
    let mut r = rng::stream(0x5eed, 0);
    for _ in 0..1000 {
        let n = 1 + (rng::uniform(&mut r) * 12.0) as u32;
        let m = 1u64 << n;
        let j = 1 + ((rng::uniform(&mut r) * (m - 1) as f64) as u64).min(m - 2);
        let k = ((rng::uniform(&mut r) * m as f64) as u64).min(m - 1);
        let l = DyadicIndex::new(n, j, k).unwrap();
        assert!(!l.touches_boundary());
        let b = l.bounds();
        for _ in 0..100 {
            let mut pt =
                || C64::new(b.x0 + (b.x1 - b.x0) * rng::uniform(&mut r), b.y0 + (b.y1 - b.y0) * rng::uniform(&mut r));
            let (z, w) = (pt(), pt());
            let d = pseudo_distance_half(z, w);
            assert!(1.0 - d * d >= 0.2, "{l:?}: rho = {d}");
        }
    }
}

#[test]
fn quarter_pseudo_disk_at_one_sits_in_omega() {
    let t: f64 = 0.25;
    assert!((1.0 + t) / (1.0 - t) < 2.0);
    assert!(2.0 * t / ((1.0 - t) * (1.0 - t)) < 1.0);
    let one = C64::new(1.0, 0.0);
    let mut r = rng::stream(0xd15c, 0);
    let mut max_re = 0.0f64;
    let mut max_im = 0.0f64;
    for _ in 0..100_000 {
        let z = half_plane_disk_point(one, rng::in_disk(&mut r, t));
        assert!(z.re > 0.0 && z.re < 2.0 && z.im.abs() < 1.0, "{z}");
        assert!(pseudo_distance_half(one, z) < t + 1e-12);
        max_re = max_re.max(z.re);
        max_im = max_im.max(z.im.abs());
    }
    assert!(max_re <= (1.0 + t) / (1.0 - t) + 1e-12);
    assert!(max_im <= 8.0 / 9.0);
}

#[test]
fn bounding_box_of_the_quarter_disk() {
    let one = ComplexPoint::half_plane(1.0, 0.0).unwrap();
    let b = pseudo_disk_bounding_box(&one, 0.25).unwrap();
    assert!((b.x0 - 0.6).abs() < 1e-15 && (b.x1 - 5.0 / 3.0).abs() < 1e-15);
    assert!((b.y1 - 8.0 / 9.0).abs() < 1e-15 && (b.y0 + 8.0 / 9.0).abs() < 1e-15);
    let h = ComplexPoint::half_plane(0.125, 0.0).unwrap();
    let s = pseudo_disk_bounding_box(&h, 0.25).unwrap();
    assert!((s.x1 - 0.125 * b.x1).abs() < 1e-15 && (s.y1 - 0.125 * b.y1).abs() < 1e-15);
    assert!(ComplexPoint::disk(1.0, 0.0).is_err());
    assert_eq!(ComplexPoint::circle(0.0).domain(), Domain::Circle);
}
