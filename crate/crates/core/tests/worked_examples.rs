use cnot_forge::aecm::{aecm, aecm_partial};
use cnot_forge::baseline::{algorithm1_synthesis, gaussian_synthesis};
use cnot_forge::fixtures::{self, REFERENCE_6_PERMUTATION};
use cnot_forge::mcg::{any_improving_pair, mcg, mcg_line_reordering, nonconvergence_census};
use cnot_forge::{AecmConfig, BitMatrix, McgConfig, TieBreak};

#[test]
fn stalled_descent_on_five_lines() {
    let m = fixtures::nonconvergent_5();
    assert!(!any_improving_pair(&m).unwrap());
    let r = mcg(&m, &McgConfig::default()).unwrap();
    assert_eq!(r.cost_trace, [20, 16, 11, 5, 0]);
    assert!(!r.convergent);
    assert_eq!(r.circuit.len(), 10);
    assert!(r.circuit.implements(&m));
}

#[test]
fn six_line_comparison() {
    let m = fixtures::reference_6();
    let mcg_count = mcg(&m, &McgConfig::default()).unwrap().circuit.len();
    let aecm_count = aecm(&m, &AecmConfig::default()).unwrap().len();
    let alg1 = algorithm1_synthesis(&m, 2).unwrap();
    assert_eq!(mcg_count, 12);
    assert_eq!(aecm_count, 13);
    assert!(alg1.implements(&m));
    assert!((13..=17).contains(&alg1.len()));
    assert!(gaussian_synthesis(&m).unwrap().implements(&m));
}

#[test]
fn six_line_reordering() {
    let m = fixtures::reference_6();
    let r = mcg_line_reordering(&m, &McgConfig::default()).unwrap();
    assert_eq!(r.circuit.len(), 8);
    assert_eq!(
        r.circuit.permutation.as_deref(),
        Some(&REFERENCE_6_PERMUTATION[..])
    );
    assert_eq!(r.circuit.gate_matrix(), fixtures::reference_6_reordered());
    assert!(r.circuit.implements(&m));
}

#[test]
fn reordering_a_permutation_needs_no_gates() {
    let p = BitMatrix::permutation(&[3, 0, 4, 1, 2]).unwrap();
    let r = mcg_line_reordering(&p, &McgConfig::default()).unwrap();
    assert!(r.circuit.is_empty());
    assert!(r.circuit.implements(&p));
}

#[test]
fn seeded_runs_repeat() {
    let m = fixtures::test_16();
    let cfg = McgConfig {
        tie_break: TieBreak::Seeded(42),
        ..Default::default()
    };
    let a = mcg(&m, &cfg).unwrap().circuit;
    let b = mcg(&m, &cfg).unwrap().circuit;
    assert_eq!(a, b);
    assert!(a.implements(&m));
}

#[test]
fn partial_aecm_stops_at_threshold() {
    let m = fixtures::test_16();
    let r = aecm_partial(&m, 30, &AecmConfig::default()).unwrap();
    assert!(r.residual_cost <= 30);
    assert!(r.circuit.is_none());
    assert!(r.state.is_consistent());
}

#[test]
fn eight_line_census_converges() {
    let stats = nonconvergence_census(8, 30, 3);
    assert_eq!(stats.trials, 30);
    assert_eq!(stats.nonconvergent, 0);
    assert!(stats.mean_gates > 10.0 && stats.mean_gates < 30.0);
}
