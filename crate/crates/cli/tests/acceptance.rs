//! Acceptance gate: one test per criterion, each printing its pass/fail
//! line. `cargo test --test acceptance -- --nocapture` shows the full table.

use recurprimes_cli::suites::run_criterion;

fn gate(index: usize) {
    let result = run_criterion(index);
    println!("{}", result.line());
    assert!(result.pass, "{}", result.line());
}

#[test]
fn criterion_01_prefix_omega_equality() {
    gate(1);
}

#[test]
fn criterion_02_prefix_omega_floor() {
    gate(2);
}

#[test]
fn criterion_03_valuation_exactness() {
    gate(3);
}

#[test]
fn criterion_04_rank_bounds() {
    gate(4);
}

#[test]
fn criterion_05_membership_oracle() {
    gate(5);
}

#[test]
fn criterion_06_shift_identity() {
    gate(6);
}

#[test]
fn criterion_07_root_bound() {
    gate(7);
}

#[test]
fn criterion_08_bound_sandwich() {
    gate(8);
}

#[test]
fn criterion_09_constructions() {
    gate(9);
}

#[test]
fn criterion_10_disjunction_fixtures() {
    gate(10);
}

#[test]
fn criterion_11_determinism() {
    gate(11);
}
