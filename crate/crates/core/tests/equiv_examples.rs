#![allow(clippy::approx_constant)]

mod common;

use common::*;
use quidd::circuit::generators::{
    grover_iteration, hamiltonian_zz, margolus, remote_epr, remote_epr_target, toffoli, EPR_PHASES,
};
use quidd::circuit::{build_operator, build_state, Circuit, Gate};
use quidd::dd::DdManager;
use quidd::equiv::*;
use quidd::linalg::{lift_gate, scalar_ops, QuIdd, ScalarMode};
use quidd::oracle::{dense_build_operator, dense_equiv, dense_operator_phases, Dense};

fn bell(mgr: &mut DdManager) -> QuIdd {
    let mut c = Circuit::new(2).with_initial(&[false, false]).unwrap();
    c.push(Gate::H(0)).unwrap();
    c.push(Gate::Cx {
        control: 0,
        target: 1,
    })
    .unwrap();
    build_state(mgr, &c).unwrap()
}

fn op(mgr: &mut DdManager, n: u32, gates: &[Gate]) -> QuIdd {
    let mut c = Circuit::new(n);
    for g in gates {
        c.push(g.clone()).unwrap();
    }
    build_operator(mgr, &c).unwrap()
}

fn cnot(mgr: &mut DdManager) -> QuIdd {
    op(
        mgr,
        2,
        &[Gate::Cx {
            control: 0,
            target: 1,
        }],
    )
}

fn swap(mgr: &mut DdManager) -> QuIdd {
    op(
        mgr,
        2,
        &[
            Gate::Cx {
                control: 0,
                target: 1,
            },
            Gate::Cx {
                control: 1,
                target: 0,
            },
            Gate::Cx {
                control: 0,
                target: 1,
            },
        ],
    )
}

fn mul(mgr: &mut DdManager, q: &QuIdd, f: C) -> QuIdd {
    scalar_ops(mgr, q, f, ScalarMode::Mul).unwrap()
}

fn global_phase(v: &EquivVerdict) -> C {
    match v.outcome {
        Outcome::GlobalPhase(p) => p,
        ref o => panic!("expected a global phase, got {o:?}"),
    }
}

fn assert_close(a: C, b: C) {
    assert!((a - b).norm() <= 1e-9, "{a} vs {b}");
}

#[test]
fn exact_equal_examples() {
    let mut m = DdManager::new();
    let a = bell(&mut m);
    assert_eq!(
        exact_equal(&mut m, &a, &a).unwrap().outcome,
        Outcome::ExactEqual
    );
    let neg = mul(&mut m, &a, c(-1.0, 0.0));
    assert_eq!(
        exact_equal(&mut m, &a, &neg).unwrap().outcome,
        Outcome::NotEquivalent
    );

    let zero = Circuit::new(1).with_initial(&[false]).unwrap();
    let mut hh = zero.clone();
    hh.push(Gate::H(0)).unwrap().push(Gate::H(0)).unwrap();
    let x = build_state(&mut m, &zero).unwrap();
    let y = build_state(&mut m, &hh).unwrap();
    assert_eq!(
        exact_equal(&mut m, &x, &y).unwrap().outcome,
        Outcome::ExactEqual
    );
}

#[test]
fn exact_equal_rejects_mixed_kinds() {
    let mut m = DdManager::new();
    let s = bell(&mut m);
    let u = cnot(&mut m);
    assert!(exact_equal(&mut m, &s, &u).is_err());
}

#[test]
fn node_count_filter_examples() {
    let mut m = DdManager::new();
    let a = bell(&mut m);
    let b = mul(&mut m, &a, c(0.3, -0.4));
    assert_eq!(
        node_count_filter(&mut m, &b, &a).unwrap().outcome,
        Outcome::FilterPassed
    );

    let e0 = QuIdd::basis_state(&mut m, &[false, false]).unwrap();
    let e1 = QuIdd::basis_state(&mut m, &[false, true]).unwrap();
    assert_eq!(
        node_count_filter(&mut m, &e0, &e1).unwrap().outcome,
        Outcome::FilterPassed
    );
    assert_eq!(
        gprc(&mut m, &e0, &e1).unwrap().outcome,
        Outcome::NotEquivalent
    );

    let z = QuIdd::basis_state(&mut m, &[false]).unwrap();
    let mut h = Circuit::new(1).with_initial(&[false]).unwrap();
    h.push(Gate::H(0)).unwrap();
    let plus = build_state(&mut m, &h).unwrap();
    assert_eq!(
        node_count_filter(&mut m, &z, &plus).unwrap().outcome,
        Outcome::FilterFailed
    );
}

#[test]
fn inner_product_examples() {
    let mut m = DdManager::new();
    let psi = build_state(&mut m, &grover_iteration(5).unwrap()).unwrap();
    let phased = mul(&mut m, &psi, polar(0.345));
    let v = global_inner_product(&mut m, &phased, &psi).unwrap();
    assert_close(global_phase(&v), polar(0.345));
    let v = global_inner_product(&mut m, &psi, &psi).unwrap();
    assert_close(global_phase(&v), c(1.0, 0.0));

    let mut perturbed = grover_iteration(5).unwrap();
    perturbed.push(Gate::H(2)).unwrap();
    let phi = build_state(&mut m, &perturbed).unwrap();
    let dense_v = dense_equiv(&dense(&m, &phi), &dense(&m, &psi), Level::Global).unwrap();
    assert!(!dense_v.equivalent);
    assert_eq!(
        global_inner_product(&mut m, &phi, &psi).unwrap().outcome,
        Outcome::NotEquivalent
    );
}

#[test]
fn inner_product_needs_states() {
    let mut m = DdManager::new();
    let u = cnot(&mut m);
    assert!(global_inner_product(&mut m, &u, &u).is_err());
}

#[test]
fn matrix_product_examples() {
    let mut m = DdManager::new();
    let u = cnot(&mut m);
    let iu = mul(&mut m, &u, c(0.0, 1.0));
    let p = global_phase(&global_matrix_product(&mut m, &iu, &u).unwrap());
    assert_close(p, c(0.0, 1.0));
    let p = global_phase(&global_matrix_product(&mut m, &u, &iu).unwrap());
    assert_close(p, c(0.0, -1.0));
    let p = global_phase(&global_matrix_product(&mut m, &u, &u).unwrap());
    assert_close(p, c(1.0, 0.0));
    let s = swap(&mut m);
    assert_eq!(
        global_matrix_product(&mut m, &u, &s).unwrap().outcome,
        Outcome::NotEquivalent
    );
}

#[test]
fn gprc_examples() {
    let mut m = DdManager::new();
    let psi = build_state(&mut m, &grover_iteration(6).unwrap()).unwrap();
    let phased = mul(&mut m, &psi, polar(0.345));
    let v = gprc(&mut m, &phased, &psi).unwrap();
    assert_close(global_phase(&v), polar(0.345));
    assert!(v.stats.visited.unwrap() <= v.stats.nodes_a + v.stats.nodes_b);

    // Zero out one amplitude of a 2-qubit state and renormalize.
    let amps = [c(0.5, 0.0), c(0.5, 0.0), c(0.5, 0.0), c(0.5, 0.0)];
    let a = QuIdd::from_amplitudes(&mut m, &amps).unwrap();
    let t = 1.0 / 3f64.sqrt();
    let b =
        QuIdd::from_amplitudes(&mut m, &[c(t, 0.0), c(t, 0.0), c(t, 0.0), c(0.0, 0.0)]).unwrap();
    assert_eq!(
        gprc(&mut m, &a, &b).unwrap().outcome,
        Outcome::NotEquivalent
    );
    assert!(
        !dense_equiv(&dense(&m, &a), &dense(&m, &b), Level::Global)
            .unwrap()
            .equivalent
    );
}

#[test]
fn gprc_on_operators() {
    let mut m = DdManager::new();
    let u = build_operator(&mut m, &margolus()).unwrap();
    let w = mul(&mut m, &u, polar(-1.2));
    assert_close(global_phase(&gprc(&mut m, &w, &u).unwrap()), polar(-1.2));
    let t = build_operator(&mut m, &toffoli()).unwrap();
    assert_eq!(
        gprc(&mut m, &u, &t).unwrap().outcome,
        Outcome::NotEquivalent
    );
}

fn twisted_alternating(mgr: &mut DdManager) -> (QuIdd, QuIdd) {
    let s = 0.707107;
    let base = [c(s, 0.0), c(-s, 0.0), c(s, 0.0), c(-s, 0.0)];
    let thetas = [0.0, 0.3, 0.7, 1.1];
    let twisted: Vec<C> = base.iter().zip(thetas).map(|(a, t)| a * polar(t)).collect();
    let psi = QuIdd::from_amplitudes(mgr, &base).unwrap();
    let phi = QuIdd::from_amplitudes(mgr, &twisted).unwrap();
    (phi, psi)
}

#[test]
fn mod_inner_examples() {
    let mut m = DdManager::new();
    // The printed vector has norm sqrt(2); normalize before the inner product.
    let (phi, psi) = twisted_alternating(&mut m);
    let k = c(1.0 / 2f64.sqrt() / 0.707107, 0.0);
    let phi_n = mul(&mut m, &phi, k);
    let psi_n = mul(&mut m, &psi, k);
    assert!(rel_mod_inner(&mut m, &phi_n, &psi_n).unwrap().is_positive());
    assert!(rel_mod_inner(&mut m, &psi_n, &psi_n).unwrap().is_positive());
    let (a, b) = merge_counterexample(&mut m);
    assert_eq!(
        rel_mod_inner(&mut m, &a, &b).unwrap().outcome,
        Outcome::NotEquivalent
    );
}

#[test]
fn mod_matrix_examples() {
    let mut m = DdManager::new();
    let base = vec![
        Gate::H(0),
        Gate::Cx {
            control: 0,
            target: 1,
        },
        Gate::Ry(1, 0.4),
    ];
    let mut twisted = base.clone();
    twisted.extend([Gate::Rz(0, 0.2), Gate::Phase(1, 1.3)]);
    let u = op(&mut m, 2, &base);
    let du = op(&mut m, 2, &twisted);
    assert_eq!(
        rel_mod_matrix(&mut m, &du, &u).unwrap().outcome,
        Outcome::FilterPassed
    );
    assert_eq!(
        rel_mod_matrix(&mut m, &u, &u).unwrap().outcome,
        Outcome::FilterPassed
    );
    let (x, s) = (cnot(&mut m), swap(&mut m));
    assert_eq!(
        rel_mod_matrix(&mut m, &x, &s).unwrap().outcome,
        Outcome::FilterFailed
    );
}

#[test]
fn elementwise_division_on_remote_epr() {
    let mut m = DdManager::new();
    let n = 6;
    let built = build_state(&mut m, &remote_epr(n).unwrap()).unwrap();
    let target = remote_epr_target(&mut m, n, EPR_PHASES).unwrap();
    let v = elementwise_div_states(&mut m, &target, &built).unwrap();
    let Outcome::RelativePhase {
        phases: Some(p),
        side: Side::State,
        ..
    } = v.outcome
    else {
        panic!("{:?}", v.outcome)
    };
    assert_close(amp(&m, &p, 0), polar(EPR_PHASES.0));
    assert_close(amp(&m, &p, (1 << (n - 1)) | 1), polar(EPR_PHASES.1));
    // Both-zero entries divide to 1.
    assert_close(amp(&m, &p, 1), c(1.0, 0.0));
}

#[test]
fn elementwise_division_examples() {
    let mut m = DdManager::new();
    let a = bell(&mut m);
    let v = elementwise_div_states(&mut m, &a, &a).unwrap();
    let Outcome::RelativePhase {
        phases: Some(p), ..
    } = v.outcome
    else {
        panic!()
    };
    assert_eq!(p.root, m.one());
    let (x, y) = merge_counterexample(&mut m);
    assert_eq!(
        elementwise_div_states(&mut m, &x, &y).unwrap().outcome,
        Outcome::NotEquivalent
    );
}

fn left_phases(v: &EquivVerdict) -> (QuIdd, Side, bool) {
    match v.outcome {
        Outcome::RelativePhase {
            phases: Some(p),
            side,
            both_sides,
        } => (p, side, both_sides),
        ref o => panic!("expected relative phases, got {o:?}"),
    }
}

#[test]
fn rp_div_margolus_toffoli() {
    let mut m = DdManager::new();
    let u = build_operator(&mut m, &margolus()).unwrap();
    let v = build_operator(&mut m, &toffoli()).unwrap();
    let verdict = rp_div_operators(&mut m, &u, &v).unwrap();
    let (w, side, _) = left_phases(&verdict);
    assert_eq!(side, Side::Left);
    let du = dense_build_operator(&margolus()).unwrap();
    let dv = dense_build_operator(&toffoli()).unwrap();
    let prod = du.mul_adjoint(&dv);
    for j in 0..8 {
        for k in 0..8 {
            if j == k {
                assert_close(prod.get(j, j), entry(&m, &w, j, 0));
                assert!((prod.get(j, j).norm() - 1.0).abs() < 1e-9);
            } else {
                assert!(prod.get(j, k).norm() < 1e-9);
            }
        }
    }
}

#[test]
fn rp_div_recovers_random_left_diagonal() {
    let mut m = DdManager::new();
    let base = vec![
        Gate::H(0),
        Gate::Cx {
            control: 0,
            target: 2,
        },
        Gate::Ry(1, 0.9),
        Gate::Ccx {
            c1: 2,
            c2: 1,
            target: 0,
        },
    ];
    let diag = [0.2, -1.1, 2.5, 0.05, 1.7, -2.9, 0.8, 3.0];
    let v = op(&mut m, 3, &base);
    let d = QuIdd::operator_from_fn(&mut m, 3, |r, col| {
        if r == col {
            polar(diag[r])
        } else {
            c(0.0, 0.0)
        }
    })
    .unwrap();
    let u = quidd::linalg::matmul(&mut m, &d, &v).unwrap();
    let (w, side, _) = left_phases(&rp_div_operators(&mut m, &u, &v).unwrap());
    assert_eq!(side, Side::Left);
    for (j, &t) in diag.iter().enumerate() {
        assert_close(entry(&m, &w, j, 5), polar(t));
    }
}

#[test]
fn rp_div_with_cancelling_zero_blocks() {
    // CX with the target above the control puts zeros in different column
    // blocks of each row; a left diagonal must still be found.
    let mut m = DdManager::new();
    let v = op(
        &mut m,
        2,
        &[Gate::Cx {
            control: 1,
            target: 0,
        }],
    );
    let diag = [0.4, -0.7, 1.9, 2.2];
    let d = QuIdd::operator_from_fn(&mut m, 2, |r, col| {
        if r == col {
            polar(diag[r])
        } else {
            c(0.0, 0.0)
        }
    })
    .unwrap();
    let u = quidd::linalg::matmul(&mut m, &d, &v).unwrap();
    let (w, side, both) = left_phases(&rp_div_operators(&mut m, &u, &v).unwrap());
    assert_eq!((side, both), (Side::Left, true));
    for (j, &t) in diag.iter().enumerate() {
        assert_close(entry(&m, &w, j, 0), polar(t));
    }
}

#[test]
fn rp_div_right_side() {
    let mut m = DdManager::new();
    let base = vec![
        Gate::H(1),
        Gate::Cx {
            control: 1,
            target: 0,
        },
        Gate::Ry(0, 1.1),
    ];
    let mut pre = vec![Gate::Rz(0, 0.35), Gate::Phase(1, -0.6)];
    pre.extend(base.clone());
    let v = op(&mut m, 2, &base);
    let u = op(&mut m, 2, &pre);
    let (w, side, _) = left_phases(&rp_div_operators(&mut m, &u, &v).unwrap());
    assert_eq!(side, Side::Right);
    let du = dense_build_operator(&{
        let mut c = Circuit::new(2);
        pre.iter().for_each(|g| {
            c.push(g.clone()).unwrap();
        });
        c
    })
    .unwrap();
    let dv = match dense(&m, &v) {
        Dense::Operator(o) => o,
        _ => unreachable!(),
    };
    let right = dense_operator_phases(&du, &dv, false).unwrap();
    for (k, p) in right.iter().enumerate() {
        assert_close(entry(&m, &w, 0, k), *p);
    }
}

#[test]
fn rp_div_cnot_swap() {
    let mut m = DdManager::new();
    let (x, s) = (cnot(&mut m), swap(&mut m));
    assert_eq!(
        rp_div_operators(&mut m, &x, &s).unwrap().outcome,
        Outcome::NotEquivalent
    );
}

#[test]
fn nonzero_merge_examples() {
    let mut m = DdManager::new();
    let (a, b) = merge_counterexample(&mut m);
    assert_eq!(
        non_zero_terminal_merge(&mut m, &a, &b).unwrap().outcome,
        Outcome::FilterPassed
    );
    assert_eq!(
        mod_dd_compare(&mut m, &a, &b).unwrap().outcome,
        Outcome::NotEquivalent
    );
    let psi = bell(&mut m);
    let phased = mul(&mut m, &psi, polar(0.9));
    assert_eq!(
        non_zero_terminal_merge(&mut m, &phased, &psi)
            .unwrap()
            .outcome,
        Outcome::FilterPassed
    );
    let e0 = QuIdd::basis_state(&mut m, &[false, false]).unwrap();
    let e1 = QuIdd::basis_state(&mut m, &[false, true]).unwrap();
    assert_eq!(
        non_zero_terminal_merge(&mut m, &e0, &e1).unwrap().outcome,
        Outcome::FilterFailed
    );
}

#[test]
fn mod_dd_compare_examples() {
    let mut m = DdManager::new();
    let (phi, psi) = twisted_alternating(&mut m);
    assert!(matches!(
        mod_dd_compare(&mut m, &phi, &psi).unwrap().outcome,
        Outcome::RelativePhase {
            phases: None,
            side: Side::State,
            ..
        }
    ));
    let u = build_operator(&mut m, &hamiltonian_zz(4, 0.3).unwrap()).unwrap();
    let v = build_operator(&mut m, &hamiltonian_zz(4, 0.9).unwrap()).unwrap();
    assert_eq!(
        mod_dd_compare(&mut m, &u, &v).unwrap().outcome,
        Outcome::FilterPassed
    );
    assert!(rp_div_operators(&mut m, &u, &v).unwrap().is_positive());
}

#[test]
fn auto_check_pipeline() {
    let mut m = DdManager::new();
    let e0 = QuIdd::basis_state(&mut m, &[false, false]).unwrap();
    let e1 = QuIdd::basis_state(&mut m, &[false, true]).unwrap();
    let v = auto_check(&mut m, &e0, &e1, Level::Relative).unwrap();
    assert_eq!(v.outcome, Outcome::NotEquivalent);
    assert_eq!(v.stats.stages, vec![Method::Exact, Method::NonzeroMerge]);

    let v = auto_check(&mut m, &e0, &e0, Level::Exact).unwrap();
    assert_eq!(v.outcome, Outcome::ExactEqual);

    let psi = bell(&mut m);
    let phased = mul(&mut m, &psi, polar(2.0));
    let v = auto_check(&mut m, &phased, &psi, Level::Global).unwrap();
    assert_close(global_phase(&v), polar(2.0));
    assert_eq!(
        v.stats.stages,
        vec![Method::Exact, Method::NodeCount, Method::Gprc]
    );

    let u = build_operator(&mut m, &margolus()).unwrap();
    let t = build_operator(&mut m, &toffoli()).unwrap();
    assert!(!auto_check(&mut m, &u, &t, Level::Global)
        .unwrap()
        .is_positive());
    let v = auto_check(&mut m, &u, &t, Level::Relative).unwrap();
    assert_eq!(v.method, Method::RpDiv);
    assert!(v.is_positive());
}

#[test]
fn method_names_round_trip() {
    for mth in Method::ALL {
        assert_eq!(mth.name().parse::<Method>().unwrap(), mth);
    }
    assert!("fastest".parse::<Method>().is_err());
    assert_eq!("relative".parse::<Level>().unwrap(), Level::Relative);
}

#[test]
fn lifted_gate_phase_multiple() {
    let mut m = DdManager::new();
    let z = lift_gate(&mut m, &Gate::Z(1), 3).unwrap();
    let rz = lift_gate(&mut m, &Gate::Rz(1, std::f64::consts::FRAC_PI_2), 3).unwrap();
    // Rz(pi/2) = diag(-i, i) = -i Z.
    let p = global_phase(&gprc(&mut m, &rz, &z).unwrap());
    assert_close(p, c(0.0, -1.0));
}
