//! Acceptance gate: ten end-to-end criteria, one test each, every test
//! printing a single PASS/FAIL line. A criterion passes only when every row
//! of its suite passes at the stated tolerances.

use prym_core::report::CheckRow;
use prym_core::suites::{
    self, DEFAULT_SEED, RANDOM_TRACE_Q,
};

fn conclude(criterion: &str, rows: &[CheckRow]) {
    let failing: Vec<&CheckRow> = rows.iter().filter(|r| !r.pass).collect();
    if failing.is_empty() && !rows.is_empty() {
        println!("{criterion}: PASS ({} rows)", rows.len());
    } else {
        println!("{criterion}: FAIL ({} of {} rows)", failing.len(), rows.len());
        for row in failing.iter().take(5) {
            println!("  {} [{}] {}", row.id, row.inputs, row.detail);
        }
    }
    assert!(!rows.is_empty(), "{criterion}: produced no rows");
    assert!(failing.is_empty(), "{criterion}: {} failing rows", failing.len());
}

#[test]
fn a01_gauss_product_ratio_exact() {
    let rows: Vec<CheckRow> = suites::charsums_suite()
        .into_iter()
        .filter(|r| r.id == "charsums/jacobi-ratio")
        .collect();
    assert_eq!(rows.len(), 6);
    conclude("criterion 01 (Gauss product ratio, q in {7,13,19,31,37,43})", &rows);
}

#[test]
fn a02_reflection_and_sixth_power_all_arguments() {
    let rows: Vec<CheckRow> = suites::charsums_suite()
        .into_iter()
        .filter(|r| r.id == "charsums/reflection")
        .collect();
    assert_eq!(rows.len(), 6);
    conclude("criterion 02 (reflection + sixth-power identity, all x)", &rows);
}

#[test]
fn a03_trace_additivity_exhaustive_and_random() {
    let mut rows = suites::traces_exhaustive_suite().unwrap();
    assert_eq!(rows.len(), 85, "exhaustive lambda sweep over q <= 31");
    let random = suites::traces_random_suite(100, DEFAULT_SEED).unwrap();
    assert_eq!(random.len(), 100, "random lambda sample at q = {RANDOM_TRACE_Q}");
    rows.extend(random);
    conclude("criterion 03 (trace additivity, exhaustive + 100 random)", &rows);
}

#[test]
fn a04_count_oracle_and_zeta() {
    let mut rows = suites::count_oracle_suite().unwrap();
    assert_eq!(rows.len(), 13, "every admissible q <= 101");
    rows.extend(suites::zeta_suite().unwrap());
    conclude("criterion 04 (fiber counts vs naive; zeta Weil + stability)", &rows);
}

#[test]
fn a05_rationality_on_parameter_curves() {
    let rows: Vec<CheckRow> = suites::ca_suite()
        .unwrap()
        .into_iter()
        .filter(|r| r.id == "ca/sixth-power")
        .collect();
    assert_eq!(rows.len(), 6);
    conclude("criterion 05 (rational traces over C_a, q in {7,13,31}, a in {1,2})", &rows);
}

#[test]
fn a06_cover_identity() {
    let rows: Vec<CheckRow> = suites::ca_suite()
        .unwrap()
        .into_iter()
        .filter(|r| r.id == "ca/cover-identity")
        .collect();
    assert_eq!(rows.len(), 2);
    conclude("criterion 06 (cover identity, q in {7,31})", &rows);
}

#[test]
fn a07_period_lattice_and_qm() {
    let rows = suites::periods_suite().unwrap();
    for id in [
        "periods/mu4-zero",
        "periods/lattice-relations",
        "periods/lattice-rank",
        "periods/lattice-membership",
        "periods/m-squared",
        "periods/stabilization",
        "periods/beta-miracle",
        "periods/qm-calibration",
        "periods/quaternion",
        "periods/hilbert-symbol",
        "periods/schwarz-extension",
        "periods/schwarz-consistency",
    ] {
        assert!(rows.iter().any(|r| r.id == id), "missing row family {id}");
    }
    conclude("criterion 07 (period vectors, lattice, QM action, Schwarz)", &rows);
}

#[test]
fn a08_effective_bounds() {
    let rows = suites::bounds_suite().unwrap();
    for id in ["bounds/kappa-identity", "bounds/bost", "bounds/logscale-roundtrip"] {
        assert!(rows.iter().any(|r| r.id == id), "missing row family {id}");
    }
    conclude("criterion 08 (kappa identity, Bost constant, log-scale roundtrip)", &rows);
}

#[test]
fn a09_galois_image_machinery() {
    let mut rows = suites::fs_random_suite(100, DEFAULT_SEED);
    assert_eq!(rows.len(), 100, "randomized span/trace instances");
    rows.extend(suites::fs_special_rows());
    let dickson = suites::dickson_suite();
    assert_eq!(dickson.len(), 20, "curated classification battery");
    rows.extend(dickson);
    assert!(
        rows.iter().any(|r| r.id == "faltings-serre/taylor-wiles"),
        "perfectness/irreducibility row present"
    );
    conclude("criterion 09 (span rigidity x100, Dickson x20, perfectness)", &rows);
}

#[test]
fn a10_deterministic_across_parallelism() {
    use prym_core::report::Report;
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap();
        let rows = pool.install(|| suites::all_rows(24, DEFAULT_SEED)).unwrap();
        Report::new("acceptance", rows, 0).comparable_json()
    };
    let serial = run(1);
    let parallel = run(8);
    let same = serial == parallel;
    println!(
        "criterion 10 (serial vs 8-way parallel, byte-identical rows): {}",
        if same { "PASS" } else { "FAIL" }
    );
    assert!(same, "row stream differs across thread counts");
}
