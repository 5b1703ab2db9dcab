//! Acceptance criteria 1–10; each test prints one PASS/FAIL line.

use std::io::Write;

use num_bigint::BigInt;
use num_rational::BigRational;
use phimod::selftest::{run_criterion, CriterionReport};
use phimod::simples_ext::ramification_bounds;
use phimod::unitfilter::{filtrate, replay};

const SEED: u64 = 0;

/// Written past the test harness's capture so every run shows the line.
fn say(line: String) {
    let mut out = std::io::stdout().lock();
    writeln!(out, "{line}").and_then(|_| out.flush()).expect("stdout is writable");
}

fn report(id: u8) -> CriterionReport {
    let r = run_criterion(id, SEED).expect("criterion exists");
    say(format!("{} ({} ms)", r.line(), r.elapsed_ms));
    r
}

fn assert_passes(id: u8) {
    let r = report(id);
    assert!(r.passed, "{}", r.line());
}

#[test]
fn criterion_01_admissibility_constants() {
    assert_passes(1);
}

#[test]
fn criterion_02_ext_dimension_oracle() {
    assert_passes(2);
}

#[test]
fn criterion_03_decomposition_round_trips() {
    assert_passes(3);
}

#[test]
fn criterion_04_category_laws() {
    assert_passes(4);
}

#[test]
fn criterion_05_functor_round_trip() {
    assert_passes(5);
}

#[test]
fn criterion_06_splittings() {
    assert_passes(6);
}

#[test]
fn criterion_07_weight_one_scenario() {
    assert_passes(7);
}

/// The exact part of criterion 8; the quoted decimal is checked separately.
#[test]
fn criterion_08_exact_fractions() {
    let b = ramification_bounds(3);
    let r = |n: i64, d: i64| BigRational::new(BigInt::from(n), BigInt::from(d));
    assert_eq!(b.upper_v, r(5, 3));
    assert_eq!(b.different_bound, r(8, 3));
    assert!((b.disc_bound - 3f64.powf(8.0 / 3.0)).abs() < 1e-12);
    let line = report(8);
    say(format!("criterion 8 exact fractions: PASS: upper_v = 5/3, different = 8/3, disc = {}", b.disc_decimal()));
    assert!(line.known_deviation.is_some() || line.passed, "{}", line.line());
}

#[test]
#[ignore = "the quoted discriminant 18.96236 is not 3^(8/3) = 18.72075; see README"]
fn criterion_08_quoted_discriminant() {
    assert_passes(8);
}

/// Point `PHIMOD_K1_UNITS` at a unit file (same JSON as `phimod filtrate`).
#[test]
#[ignore = "needs externally computed K₁ units in PHIMOD_K1_UNITS"]
fn criterion_09_k1_units() {
    let path = std::env::var("PHIMOD_K1_UNITS").expect("PHIMOD_K1_UNITS is set");
    let text = std::fs::read_to_string(&path).expect("unit file is readable");
    let value: serde_json::Value = serde_json::from_str(&text).expect("unit file is JSON");
    let (field, units, p) = phimod::json::decode_unit_file(&value).expect("unit file decodes");
    let result = filtrate(&field, &units, p).expect("filtration terminates");
    let replayed = replay(&field, &units, p, &result.events).expect("transcript replays");
    assert_eq!(replayed, result.basis);
    assert!(result.af.windows(2).all(|w| w[0] < w[1]));
    say(format!("criterion 9 K₁ units: PASS: af {:?}, {} moves", result.af, result.transcript.len()));
}

#[test]
fn criterion_09_unit_filtration() {
    assert_passes(9);
}

#[test]
fn criterion_10_solvers() {
    assert_passes(10);
}
