use std::collections::HashSet;

use num_complex::Complex64;
use proptest::prelude::*;
use pruning_core::henon::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn dn_inside_hov() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut dn = 0;
    for _ in 0..10_000 {
        let a = rng.random_range(-20.0..40.0);
        let b = rng.random_range(-3.0..3.0);
        if b == 0.0 {
            continue;
        }
        let p = classify(a, b);
        if p.in_dn {
            dn += 1;
            assert!(p.in_hov, "({a}, {b})");
        }
        assert!(!(p.in_dn && p.in_emp));
    }
    assert!(dn > 100);
}

#[test]
fn interval_midpoints_and_ends() {
    for a in [5.3125, 5.390625, 5.46875] {
        assert!(classify(a, 1.0).in_i1);
    }
    for a in [2.21875, 2.2578125, 2.296875] {
        assert!(classify(a, 0.25).in_i2);
    }
    assert!(!classify(5.5, 1.0).in_i1);
    assert!(!classify(2.2578125, 0.3).in_i2);
}

proptest! {
    #[test]
    fn inverse_undoes_step(x in -10.0f64..10.0, y in -10.0f64..10.0, a in -2.0f64..10.0, b in 0.1f64..2.0) {
        let p = classify(a, b);
        let (u, v) = henon_inverse(&p, henon_step(&p, (x, y))).unwrap();
        prop_assert!((u - x).abs() < 1e-12 * (1.0 + x.abs()));
        prop_assert!((v - y).abs() < 1e-10 * (1.0 + y.abs() + x * x));
    }

    #[test]
    fn escaped_points_keep_growing(x in 3.6f64..50.0, ratio in 0.0f64..1.0, sx in any::<bool>(), sy in any::<bool>()) {
        let p = classify(5.4, 1.0);
        let x = if sx { x } else { -x };
        let y = if sy { x * ratio } else { -x * ratio };
        prop_assume!(is_escaped(&p, (x, y)));
        let z = henon_step(&p, (x, y));
        prop_assert!(z.0.abs() > x.abs());
        prop_assert!(is_escaped(&p, z));
    }
}

#[test]
fn full_horseshoe_census() {
    let c = census(&classify(10.0, 1.0), 8, &ContinuationConfig::default()).unwrap();
    for row in &c.counts {
        assert_eq!(row.points, 1 << row.n, "n={}", row.n);
    }
    assert!(c.orbits.iter().all(|o| o.is_alive() && o.residual < 1e-10 && !o.itinerary_mismatch));
    let itineraries: HashSet<_> = c.orbits.iter().map(|o| o.itinerary.clone().unwrap()).collect();
    assert_eq!(itineraries.len(), c.orbits.len());
    for o in &c.orbits {
        assert_eq!(o.itinerary.as_ref().unwrap().necklace(), o.necklace);
        assert!(o.multiplier.unwrap() > 1.0);
    }
}

/// Oracle for point counts: Σ_{d|n} d · (exact-period-d orbits).
#[test]
fn census_counts_are_consistent() {
    for (a, b) in [(5.4, 1.0), (2.25, 0.25), (1.0, 0.3)] {
        let c = census(&classify(a, b), 8, &ContinuationConfig::default()).unwrap();
        for row in &c.counts {
            let sum: u64 = c
                .counts
                .iter()
                .filter(|r| row.n % r.n == 0)
                .map(|r| r.n as u64 * r.exact_orbits)
                .sum();
            assert_eq!(row.points, sum);
            assert!(row.points <= 1 << row.n);
        }
    }
}

#[test]
fn orbits_satisfy_the_cyclic_relation() {
    let p = classify(5.4, 1.0);
    for o in find_periodic_orbits(&p, 6, &ContinuationConfig::default()).unwrap() {
        if !o.is_alive() {
            continue;
        }
        let n = o.points.len();
        for i in 0..n {
            let (x, y) = o.points[i];
            let (nx, ny) = henon_step(&p, (x, y));
            let next = o.points[(i + 1) % n];
            assert!((nx - next.0).abs() < 1e-10 && (ny - next.1).abs() < 1e-10);
        }
    }
}

#[test]
fn census_json_rows() {
    let c = census(&classify(10.0, 1.0), 2, &ContinuationConfig::default()).unwrap();
    let v = serde_json::to_value(&c).unwrap();
    let row = &v["orbits"][2];
    assert_eq!(row["necklace"], "01");
    assert_eq!(row["period"], 2);
    assert_eq!(row["status"], "alive");
    assert!(row.get("a_loss").is_none());
    assert_eq!(row["itinerary"], "(01)");
    assert_eq!(v["config"]["dedup_tolerance"], 1e-6);
}

#[test]
fn pruned_orbits_are_lost_below_the_horseshoe() {
    let c = census(&classify(5.4, 1.0), 6, &ContinuationConfig::default()).unwrap();
    let lost: Vec<_> = c.orbits.iter().filter(|o| !o.is_alive()).collect();
    assert!(!lost.is_empty());
    for o in lost {
        let a = o.a_loss.unwrap();
        assert!((5.4..=c.a_start).contains(&a));
    }
}

fn small(res: usize) -> SliceConfig {
    SliceConfig { resolution: res, radius: 2.0, ..SliceConfig::default() }
}

#[test]
fn slice_is_deterministic() {
    let a = Complex64::new(2.8187, 0.0119);
    let one = unstable_slice(a, 0.4, &small(96)).unwrap();
    let two = unstable_slice(a, 0.4, &small(96)).unwrap();
    assert_eq!(one.to_pgm(), two.to_pgm());
}

#[test]
fn conjugate_parameter_mirrors_the_slice() {
    let a = Complex64::new(2.8187, 0.0119);
    let img = unstable_slice(a, 0.4, &small(96)).unwrap();
    let bar = unstable_slice(a.conj(), 0.4, &small(96)).unwrap();
    for j in 0..96 {
        for i in 0..96 {
            assert_eq!(img.pixel(i, j), bar.pixel(i, 95 - j));
        }
    }
}

#[test]
fn real_parameter_slice_is_self_mirrored() {
    let img = unstable_slice(Complex64::new(5.4, 0.0), 1.0, &small(64)).unwrap();
    for j in 0..64 {
        for i in 0..64 {
            assert_eq!(img.pixel(i, j), img.pixel(i, 63 - j));
        }
    }
}

#[test]
fn horseshoe_slice_is_mostly_escaping() {
    let img = unstable_slice(Complex64::new(10.0, 0.0), 0.3, &small(512)).unwrap();
    let f = img.non_escaping_fraction();
    assert!(f < 0.05, "non-escaping fraction {f}");
}

#[test]
fn refinement_keeps_escape_status() {
    let a = Complex64::new(1.0, 0.0);
    let coarse = unstable_slice(a, 0.3, &small(128)).unwrap();
    let fine = unstable_slice(a, 0.3, &small(256)).unwrap();
    assert!(coarse.non_escaping_fraction() > 0.01);
    let mut agree = 0;
    for j in 0..128 {
        for i in 0..128 {
            let escaped = coarse.pixel(i, j) != 0;
            let children = [(0, 0), (1, 0), (0, 1), (1, 1)]
                .iter()
                .filter(|(di, dj)| fine.pixel(2 * i + di, 2 * j + dj) != 0)
                .count();
            let majority = match children {
                0 | 1 => Some(false),
                3 | 4 => Some(true),
                _ => None,
            };
            if majority.is_none_or(|m| m == escaped) {
                agree += 1;
            }
        }
    }
    let ratio = agree as f64 / (128.0 * 128.0);
    assert!(ratio >= 0.99, "agreement {ratio}");
}

#[test]
fn slice_metadata_echoes_parameters() {
    let a = Complex64::new(2.8187, 0.0119);
    let img = unstable_slice(a, 0.4, &small(8)).unwrap();
    assert_eq!(img.meta.a, a);
    assert_eq!(img.meta.b, 0.4);
    assert_eq!(img.meta.config.seed_depth, 24);
    assert_eq!(img.meta.config.budget, 200);
    assert!(img.to_pgm().lines().nth(1).unwrap().contains("a=2.8187 0.0119 b=0.4"));
}
