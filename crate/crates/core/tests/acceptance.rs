//! Acceptance gate: one test per numbered criterion.
//!
//! The two expensive scans are computed once and shared between the
//! criteria that read them. Each test prints its pass/fail line plus the
//! per-assertion detail table.

use std::sync::OnceLock;

use qutrit_rabi::scan::{PhaseScan, QptScan};
use qutrit_rabi::validate::{self, CriterionReport};

fn workers() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(2)
}

fn phase_scan() -> &'static PhaseScan {
    static SCAN: OnceLock<PhaseScan> = OnceLock::new();
    SCAN.get_or_init(|| validate::default_phase_scan(workers()).expect("phase scan"))
}

fn qpt_scan() -> &'static QptScan {
    static SCAN: OnceLock<QptScan> = OnceLock::new();
    SCAN.get_or_init(|| validate::default_qpt_scan(workers()).expect("qpt scan"))
}

fn report(r: CriterionReport) {
    println!("{}", r.summary_line());
    for d in &r.details {
        println!("{d}");
    }
    assert!(r.passed, "criterion {} ({}) failed", r.id, r.name);
}

#[test]
fn criterion_01_symmetry_conservation() {
    report(validate::criterion_1(workers()));
}

#[test]
fn criterion_02_block_equivalence() {
    report(validate::criterion_2(workers()));
}

#[test]
fn criterion_03_closed_form_eigenpairs() {
    report(validate::criterion_3(workers()));
}

#[test]
fn criterion_04_phase_observable_constants() {
    report(validate::criterion_4(workers()));
}

#[test]
fn criterion_05_phase_diagram_labels() {
    report(validate::criterion_5(phase_scan()));
}

#[test]
fn criterion_06_triple_points() {
    report(validate::criterion_6(phase_scan()));
}

#[test]
fn criterion_07_qpt_energy_curve() {
    report(validate::criterion_7(qpt_scan()));
}

#[test]
fn criterion_08_qpt_order_parameters() {
    report(validate::criterion_8(qpt_scan()));
}

#[test]
fn criterion_09_critical_point_convergence() {
    report(validate::criterion_9(workers()));
}

#[test]
fn criterion_10_normal_phase_gap() {
    report(validate::criterion_10(qpt_scan()));
}

#[test]
fn criterion_11_determinism() {
    report(validate::criterion_11());
}
