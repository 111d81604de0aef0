//! Benchmark acceptance checks. Each test prints one `[PASS]`/`[FAIL]` line.
//!
//! The long runs (minutes in total) are built with optimizations through the
//! workspace test profile.

mod common;

use adaptive_euler::suite::{self, Outcome};

fn report(o: Outcome) {
    println!("{o}");
    assert!(o.passed, "{o}");
}

#[test]
fn criterion_1_accuracy_1d() {
    report(suite::accuracy_1d());
}

#[test]
fn criterion_2_accuracy_2d() {
    report(suite::accuracy_2d());
}

#[test]
fn criterion_3_conservation() {
    report(suite::conservation());
}

#[test]
fn criterion_4_robustness() {
    report(suite::robustness());
}

#[test]
fn criterion_5_blast_wave() {
    report(suite::blast_wave());
}

#[test]
fn criterion_6_forced_mask_equivalence() {
    report(suite::mode_equivalence());
}

#[test]
fn criterion_7_kernel_properties() {
    let checks: [(&str, fn() -> common::Check); 6] = [
        ("sbm symmetry and Minmod2", common::sbm_checks),
        ("omega annihilation", common::omega_annihilation),
        ("flux consistency", common::flux_consistency),
        ("characteristic basis", common::basis_diagonality),
        ("indicator scale invariance", common::indicator_scale_invariance),
        ("EOS round trip", common::eos_round_trip),
    ];
    let mut passed = true;
    let mut detail = Vec::new();
    for (name, check) in checks {
        match check() {
            Ok(msg) => detail.push(format!("{name}: {msg}")),
            Err(msg) => {
                passed = false;
                detail.push(format!("{name}: FAILED {msg}"));
            }
        }
    }
    report(Outcome { id: 7, title: "kernel unit properties".into(), passed, detail: detail.join("; ") });
}

#[test]
fn criterion_8_benchmarks_2d() {
    report(suite::benchmarks_2d());
}
