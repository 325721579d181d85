//! Acceptance suite: every criterion below runs at full scale with its
//! tolerances pinned in code and prints one pass/fail line.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use std::time::{Duration, Instant};

use gog_core::selfcheck::{self, CheckReport};

const SEED: u64 = 0xACCE;

fn assert_criterion(index: usize, label: &str, report: CheckReport, budget: Option<Duration>, elapsed: Duration) {
    let status = if report.passed() { "PASS" } else { "FAIL" };
    println!(
        "criterion {index} ({label}): {status} — {} checks, {} failures, {:.2?}",
        report.checked, report.failed, elapsed
    );
    assert!(
        report.passed(),
        "criterion {index} ({label}) failed: {:?}",
        report.failures
    );
    assert!(report.checked > 0, "criterion {index} ran no checks");
    if let Some(b) = budget {
        assert!(
            elapsed < b,
            "criterion {index} took {elapsed:.2?}, budget {b:.2?}"
        );
    }
}

#[test]
fn criterion_1_word_problem_oracle_equivalence() {
    let t = Instant::now();
    let report = selfcheck::word_oracle(SEED, 1000);
    assert_criterion(
        1,
        "word problem matches the rewrite oracle",
        report,
        Some(Duration::from_secs(60)),
        t.elapsed(),
    );
}

#[test]
fn criterion_2_parabolic_intersection() {
    let t = Instant::now();
    let report = selfcheck::parabolic_intersection(SEED, 5000);
    assert_criterion(
        2,
        "intersection of standard subgroups",
        report,
        None,
        t.elapsed(),
    );
}

#[test]
fn criterion_3_retraction_homomorphism() {
    let t = Instant::now();
    let report = selfcheck::retraction_laws(SEED, 2000);
    assert_criterion(
        3,
        "retractions are homomorphisms and compose by intersection",
        report,
        None,
        t.elapsed(),
    );
}

#[test]
fn criterion_4_conjugacy_into_complete_carriers() {
    let t = Instant::now();
    let report = selfcheck::conjugacy_complete_carriers(SEED, 2000);
    assert_criterion(
        4,
        "conjugates landing in complete carriers stay in the intersection",
        report,
        None,
        t.elapsed(),
    );
}

#[test]
fn criterion_5_class_lattice_laws() {
    let t = Instant::now();
    let report = selfcheck::class_lattice(5);
    assert_criterion(
        5,
        "parabolic classes form the expected meet/join structure",
        report,
        None,
        t.elapsed(),
    );
}

#[test]
fn criterion_6_unique_factorization_at_desk_scale() {
    let t = Instant::now();
    let report = selfcheck::remak_krs(SEED, 10);
    assert_criterion(
        6,
        "Remak factors reconstruct groups and survive relabeling",
        report,
        None,
        t.elapsed(),
    );
}

#[test]
fn criterion_7_rigidity_round_trips() {
    let t = Instant::now();
    let report = selfcheck::rigidity_roundtrip(SEED, 200);
    assert_criterion(
        7,
        "certificates survive 200 seeded re-presentations",
        report,
        Some(Duration::from_secs(120)),
        t.elapsed(),
    );
}

#[test]
fn criterion_8_negative_controls() {
    let t = Instant::now();
    let report = selfcheck::negative_controls();
    assert_criterion(
        8,
        "distinct presentations get distinct certificates",
        report,
        None,
        t.elapsed(),
    );
}

#[test]
fn criterion_9_complete_graph_degenerate_cases() {
    let t = Instant::now();
    let report = selfcheck::direct_product_forms(SEED);
    assert_criterion(
        9,
        "complete and discrete products take their degenerate forms",
        report,
        None,
        t.elapsed(),
    );
}
