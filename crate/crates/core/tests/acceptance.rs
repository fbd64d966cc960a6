//! Acceptance gate: every identity in the suite at its pinned tolerance.
//! Each test prints a single PASS/FAIL line (visible with `--nocapture`).

use kaczeta::verify::{run_check, CheckOutcome, SuiteOptions};

fn gate(id: u32) {
    let started = std::time::Instant::now();
    let o: CheckOutcome = run_check(id, &SuiteOptions::default());
    println!(
        "[{}] criterion {:>2} {:<52} metric={:.3e} tol={:.1e} ({:.1}s) {}",
        if o.passed { "PASS" } else { "FAIL" },
        o.id,
        o.name,
        o.metric,
        o.tolerance,
        started.elapsed().as_secs_f64(),
        o.detail
    );
    assert!(o.passed, "criterion {id} failed: {}", o.detail);
}

#[test]
fn c01_trace_partition_identity() {
    gate(1);
}

#[test]
fn c02_closed_trace_coincidence() {
    gate(2);
}

#[test]
fn c03_truncated_matrix_traces() {
    gate(3);
}

#[test]
fn c04_zeta_at_beta_zero_and_series() {
    gate(4);
}

#[test]
fn c05_beta_zero_spectrum() {
    gate(5);
}

#[test]
fn c06_reality_and_positivity() {
    gate(6);
}

#[test]
fn c07_mehler_formula() {
    gate(7);
}

#[test]
fn c08_b_matrix_identities() {
    gate(8);
}

#[test]
fn c09_half_eigenfamily_and_trivial_zero() {
    gate(9);
}

#[test]
fn c10_model_reduction_equivalence() {
    gate(10);
}

#[test]
fn c11_binomial_identity_and_half_reduction() {
    gate(11);
}

#[test]
fn c12_large_beta_asymptotics() {
    gate(12);
}

#[test]
fn c13_eigenfunction_reconstruction_and_bargmann() {
    gate(13);
}

#[test]
fn c14_gaussian_identity() {
    gate(14);
}
