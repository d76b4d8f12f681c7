//! One test per acceptance criterion. Each prints its check table and a
//! final `PASS name` or `FAIL name` line; run with `--nocapture` to see them.

use spinorbit::verify::{run_criterion, VerifyOptions};

fn criterion(name: &'static str) {
    let report = run_criterion(name, &VerifyOptions::default());
    println!("{report}");
    assert!(report.passed(), "criterion {name} failed");
}

#[test]
fn c01_generators() {
    criterion("generators");
}

#[test]
fn c02_exp_closed_form() {
    criterion("exp_closed_form");
}

#[test]
fn c03_invariance() {
    criterion("invariance");
}

#[test]
fn c04_las() {
    criterion("las");
}

#[test]
fn c05_f1_values() {
    criterion("f1_values");
}

#[test]
fn c06_popu() {
    criterion("popu");
}

#[test]
fn c07_orbit_dims() {
    criterion("orbit_dims");
}

#[test]
fn c08_pi_flip() {
    criterion("pi_flip");
}

#[test]
fn c09_p_matrix() {
    criterion("p_matrix");
}

#[test]
fn c10_identity() {
    criterion("identity");
}

#[test]
fn c11_coherent_families() {
    criterion("coherent_families");
}

#[test]
fn c12_uncertainty() {
    criterion("uncertainty");
}

#[test]
fn c13_weyl() {
    criterion("weyl");
}

#[test]
fn c14_octant() {
    criterion("octant");
}
