use pruning_core::henon::ContinuationConfig;
use pruning_core::sft::{pruning_region_hits, PruningParams};
use pruning_core::symbolic::{lyndon_words, PeriodicCode};
use pruning_core::verifier::*;

fn brute_points(disks: &[PruningParams], n: usize) -> u64 {
    (0u32..1 << n)
        .filter(|bits| {
            let block: Vec<u8> = (0..n).map(|i| ((bits >> i) & 1) as u8).collect();
            let s = PeriodicCode::new(block);
            disks.iter().all(|&p| !pruning_region_hits(p, &s))
        })
        .count() as u64
}

#[test]
fn theorem_parameters_match() {
    for (a, b, disk) in [(5.4, 1.0, PruningParams::new(2, 2)), (2.25, 0.25, PruningParams::new(0, 2))] {
        let r = census_vs_sft(a, b, &[disk], 8).unwrap();
        assert_eq!(r.verdict, ReportVerdict::Match, "{:?}", r.details);
        for row in &r.rows {
            assert_eq!(row.predicted, brute_points(&[disk], row.n));
        }
    }
}

#[test]
fn second_interval_predicts_22_at_period_five() {
    let r = census_vs_sft(2.25, 0.25, &[PruningParams::new(0, 2)], 5).unwrap();
    assert_eq!(r.row(5).unwrap().predicted, 22);
    assert_eq!(r.row(5).unwrap().observed, 22);
}

#[test]
fn full_shift_control() {
    let r = census_vs_sft(10.0, 1.0, &[], 8).unwrap();
    assert_eq!(r.verdict, ReportVerdict::Match);
    for row in &r.rows {
        assert_eq!(row.predicted, 1 << row.n);
        assert!(row.lost.is_empty());
    }
}

#[test]
fn lost_sets_are_the_region_hits() {
    let disk = PruningParams::new(2, 2);
    let r = census_vs_sft(5.4, 1.0, &[disk], 8).unwrap();
    for row in &r.rows {
        let hits: Vec<Vec<u8>> = lyndon_words(row.n)
            .into_iter()
            .filter(|w| pruning_region_hits(disk, &PeriodicCode::new(w.clone())))
            .collect();
        assert_eq!(row.lost, hits);
    }
}

#[test]
fn wrong_disk_is_a_mismatch() {
    let r = census_vs_sft(5.4, 1.0, &[PruningParams::new(0, 2)], 6).unwrap();
    assert_eq!(r.verdict, ReportVerdict::Mismatch);
    assert!(!r.details.is_empty());
}

#[test]
fn reports_are_reproducible() {
    let one = serde_json::to_string(&census_vs_sft(2.25, 0.25, &[PruningParams::new(0, 2)], 7).unwrap()).unwrap();
    let two = serde_json::to_string(&census_vs_sft(2.25, 0.25, &[PruningParams::new(0, 2)], 7).unwrap()).unwrap();
    assert_eq!(one, two);
    let v: serde_json::Value = serde_json::from_str(&one).unwrap();
    assert_eq!(v["params"]["a"], 2.25);
    assert_eq!(v["disks"][0]["N"], 0);
    assert_eq!(v["provenance"], "custom");
    assert_eq!(v["verdict"], "MATCH");
    assert!(v["rows"][4]["match"].as_bool().unwrap());
}

#[test]
fn suites_have_stable_order() {
    let names = |s: &str| presets(s).unwrap().iter().map(|p| (p.a, p.b)).collect::<Vec<_>>();
    assert_eq!(names("theorem"), vec![(5.4, 1.0), (2.25, 0.25)]);
    assert_eq!(names("section5"), vec![(3.5, 0.55), (2.766, 0.4), (2.887, 0.4), (2.345, 0.19)]);
    assert_eq!(names("all").len(), 6);
    assert!(matches!(presets("nope"), Err(VerifyError::UnknownPreset(_))));
    assert_eq!(presets("i2-mid").unwrap()[0].a, 2.2578125);
}

#[test]
fn conjectural_suite_completes() {
    let reports = preset_suite("section5", 8, &ContinuationConfig::default()).unwrap();
    assert_eq!(reports.len(), 4);
    for r in &reports {
        println!("({}, {}) {:?}: {}", r.params.a, r.params.b, r.disks, r.verdict);
    }
    assert!(suite_passes(&reports));
}

#[test]
fn interval_presets_report() {
    let reports = preset_suite("intervals", 8, &ContinuationConfig::default()).unwrap();
    for r in &reports {
        println!("({}, {}): {} {:?}", r.params.a, r.params.b, r.verdict, r.details);
    }
    let mid: Vec<_> = reports.iter().filter(|r| [5.390625, 2.2578125].contains(&r.params.a)).collect();
    assert_eq!(mid.len(), 2);
    assert!(mid.iter().all(|r| r.verdict == ReportVerdict::Match));
}

#[test]
fn rejects_bad_arguments() {
    assert!(matches!(census_vs_sft(5.4, 1.0, &[PruningParams::new(2, 2)], 11), Err(VerifyError::PeriodOutOfRange { .. })));
    assert!(matches!(census_vs_sft(5.4, 1.0, &[PruningParams::new(1, 1)], 4), Err(VerifyError::Sft(_))));
}
