//! End-to-end runs of every built-in suite: all rows pass, row lists are
//! deterministic across thread counts, and the report serialization is
//! stable.

use prym_core::report::Report;
use prym_core::suites;

fn assert_all_pass(rows: &[prym_core::report::CheckRow], name: &str) {
    let failures: Vec<_> = rows.iter().filter(|r| !r.pass).collect();
    assert!(
        failures.is_empty(),
        "{name}: {} failing rows, first: {:?}",
        failures.len(),
        failures.first()
    );
    assert!(!rows.is_empty(), "{name}: no rows produced");
}

#[test]
fn charsums_suite_passes() {
    assert_all_pass(&suites::charsums_suite(), "charsums");
}

#[test]
fn traces_exhaustive_suite_passes() {
    let rows = suites::traces_exhaustive_suite().unwrap();
    // Fields of size 7, 13, 19, 25, 31, one row per admissible parameter.
    assert_eq!(rows.len(), 5 + 11 + 17 + 23 + 29);
    assert_all_pass(&rows, "traces-exhaustive");
}

#[test]
fn traces_random_suite_passes() {
    let rows = suites::traces_random_suite(25, suites::DEFAULT_SEED).unwrap();
    assert_eq!(rows.len(), 25);
    assert_all_pass(&rows, "traces-random");
}

#[test]
fn trace_rows_single_field_has_expected_count() {
    let rows = suites::trace_rows_for_field(7, 1, None).unwrap();
    assert_eq!(rows.len(), 5);
    assert_all_pass(&rows, "traces-f7");
    let one = suites::trace_rows_for_field(7, 1, Some(3)).unwrap();
    assert_eq!(one.len(), 1);
    assert!(suites::trace_rows_for_field(7, 1, Some(7)).is_err());
    assert!(suites::trace_rows_for_field(7, 1, Some(1)).is_err());
}

#[test]
fn count_oracle_suite_passes() {
    assert_all_pass(&suites::count_oracle_suite().unwrap(), "count-oracle");
}

#[test]
fn zeta_suite_passes() {
    let rows = suites::zeta_suite().unwrap();
    assert_eq!(rows.len(), suites::ZETA_LAMBDAS.len());
    assert_all_pass(&rows, "zeta");
}

#[test]
fn ca_suite_passes() {
    assert_all_pass(&suites::ca_suite().unwrap(), "ca");
}

#[test]
fn periods_suite_passes() {
    assert_all_pass(&suites::periods_suite().unwrap(), "periods");
}

#[test]
fn bounds_suite_passes() {
    assert_all_pass(&suites::bounds_suite().unwrap(), "bounds");
}

#[test]
fn bounds_single_row() {
    let rows = suites::bounds_single(2, 1, 10.0, 1).unwrap();
    assert_eq!(rows.len(), 1);
    assert!(rows[0].pass);
    // dim_b must stay within 1..=g.
    assert!(suites::bounds_single(1, 1, 10.0, 2).is_err());
}

#[test]
fn dickson_suite_passes() {
    let rows = suites::dickson_suite();
    assert_eq!(rows.len(), 20);
    assert_all_pass(&rows, "dickson");
}

#[test]
fn fs_random_suite_passes() {
    let rows = suites::fs_random_suite(24, suites::DEFAULT_SEED);
    assert_eq!(rows.len(), 24);
    assert_all_pass(&rows, "fs-random");
}

#[test]
fn fs_special_rows_pass() {
    assert_all_pass(&suites::fs_special_rows(), "fs-special");
}

#[test]
fn calibration_is_unique() {
    let (cal, rows) = suites::run_calibration().unwrap();
    assert_all_pass(&rows, "calibrate");
    assert_eq!(cal.trace_unit, 0);
    assert_eq!(cal.period_twist, 0);
    assert_eq!(cal.qm_twist, 0);
}

#[test]
fn parse_ring_accepts_the_documented_forms() {
    assert_eq!(suites::parse_ring("F25").unwrap().element_count(), 25);
    assert_eq!(suites::parse_ring("Z/9").unwrap().element_count(), 9);
    let gr = suites::parse_ring("GR(9,2)").unwrap();
    assert_eq!((gr.ell, gr.m, gr.f), (3, 2, 2));
    assert!(suites::parse_ring("F6").is_err());
    assert!(suites::parse_ring("Z/12").is_err());
    assert!(suites::parse_ring("Q").is_err());
}

/// The full row list is identical at any rayon thread count, so reports
/// differ only in timing.
#[test]
fn all_rows_deterministic_across_thread_counts() {
    let samples = 12;
    let serial_pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let serial = serial_pool
        .install(|| suites::all_rows(samples, suites::DEFAULT_SEED))
        .unwrap();
    let parallel_pool = rayon::ThreadPoolBuilder::new().num_threads(8).build().unwrap();
    let parallel = parallel_pool
        .install(|| suites::all_rows(samples, suites::DEFAULT_SEED))
        .unwrap();
    assert_eq!(serial.len(), parallel.len());
    let a = Report::new("all", serial, 0).comparable_json();
    let b = Report::new("all", parallel, 0).comparable_json();
    assert_eq!(a, b);
}

#[test]
fn report_shape_is_stable() {
    let rows = vec![
        prym_core::report::CheckRow::new("b/two", "x=1", true, "d"),
        prym_core::report::CheckRow::new("a/one", "x=2", false, "d"),
        prym_core::report::CheckRow::new("a/one", "x=1", true, "d"),
    ];
    let rep = Report::new("demo", rows, 42);
    assert_eq!(rep.summary.passed, 2);
    assert_eq!(rep.summary.failed, 1);
    assert!(!rep.all_pass());
    // Sorted by id then inputs.
    assert_eq!(rep.rows[0].id, "a/one");
    assert_eq!(rep.rows[0].inputs, "x=1");
    assert_eq!(rep.rows[1].inputs, "x=2");
    let json = rep.to_json();
    assert!(json.ends_with('\n'));
    assert!(json.contains("\"schema\": 1"));
    assert!(json.contains("\"elapsed_ms\": 42"));
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["suite"], "demo");
    assert_eq!(v["rows"].as_array().unwrap().len(), 3);
    assert!(!rep.comparable_json().contains("elapsed_ms"));
}
