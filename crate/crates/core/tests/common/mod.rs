#![allow(dead_code)]

use num_complex::Complex64;
use quidd::circuit::{build_operator, build_state, Circuit, Gate};
use quidd::dd::DdManager;
use quidd::linalg::QuIdd;
use quidd::oracle::{dense_from_dd, Dense};
use rand::Rng;

pub type C = Complex64;

pub fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

pub fn polar(theta: f64) -> C {
    C::from_polar(1.0, theta)
}

fn angle<R: Rng>(rng: &mut R) -> f64 {
    rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI)
}

fn distinct<R: Rng>(rng: &mut R, n: u32, k: usize) -> Vec<u32> {
    let mut qs: Vec<u32> = (0..n).collect();
    for i in 0..k {
        let j = rng.gen_range(i..qs.len());
        qs.swap(i, j);
    }
    qs.truncate(k);
    qs
}

/// A gate drawn from the full gate set.
pub fn random_gate<R: Rng>(rng: &mut R, n: u32) -> Gate {
    let pick = rng.gen_range(
        0..if n >= 3 {
            10
        } else if n == 2 {
            9
        } else {
            7
        },
    );
    let q = rng.gen_range(0..n);
    match pick {
        0 => Gate::X(q),
        1 => Gate::Y(q),
        2 => Gate::Z(q),
        3 => Gate::H(q),
        4 => Gate::Ry(q, angle(rng)),
        5 => Gate::Rz(q, angle(rng)),
        6 => Gate::Phase(q, angle(rng)),
        7 => {
            let qs = distinct(rng, n, 2);
            Gate::Cx {
                control: qs[0],
                target: qs[1],
            }
        }
        8 => {
            let k = rng.gen_range(1..=n as usize);
            Gate::Cps(distinct(rng, n, k))
        }
        _ => {
            let qs = distinct(rng, n, 3);
            Gate::Ccx {
                c1: qs[0],
                c2: qs[1],
                target: qs[2],
            }
        }
    }
}

/// A diagonal gate.
pub fn random_diagonal_gate<R: Rng>(rng: &mut R, n: u32) -> Gate {
    let q = rng.gen_range(0..n);
    match rng.gen_range(0..4) {
        0 => Gate::Rz(q, angle(rng)),
        1 => Gate::Phase(q, angle(rng)),
        2 => Gate::Z(q),
        _ => {
            let k = rng.gen_range(1..=n as usize);
            Gate::Cps(distinct(rng, n, k))
        }
    }
}

/// A gate that moves amplitude between basis states.
pub fn random_mixing_gate<R: Rng>(rng: &mut R, n: u32) -> Gate {
    let q = rng.gen_range(0..n);
    match rng.gen_range(0..3) {
        0 => Gate::H(q),
        1 => Gate::X(q),
        _ => Gate::Ry(q, rng.gen_range(0.5..std::f64::consts::TAU - 0.5)),
    }
}

pub fn random_circuit<R: Rng>(rng: &mut R, n: u32, len: usize, state: bool) -> Circuit {
    let mut c = Circuit::new(n);
    if state {
        let bits: Vec<bool> = (0..n).map(|_| rng.gen()).collect();
        c = c.with_initial(&bits).unwrap();
    }
    for _ in 0..len {
        c.push(random_gate(rng, n)).unwrap();
    }
    c
}

pub fn with_gates(base: &Circuit, before: &[Gate], after: &[Gate]) -> Circuit {
    let mut c = Circuit {
        gates: Vec::new(),
        ..base.clone()
    };
    for g in before.iter().chain(&base.gates).chain(after) {
        c.push(g.clone()).unwrap();
    }
    c
}

pub fn build(mgr: &mut DdManager, c: &Circuit) -> QuIdd {
    if c.explicit_init {
        build_state(mgr, c).unwrap()
    } else {
        build_operator(mgr, c).unwrap()
    }
}

pub fn dense(mgr: &DdManager, q: &QuIdd) -> Dense {
    dense_from_dd(mgr, q).unwrap()
}

pub fn merge_counterexample(mgr: &mut DdManager) -> (QuIdd, QuIdd) {
    let t = 1.0 / 3f64.sqrt();
    let psi = QuIdd::from_amplitudes(mgr, &[c(0.0, 0.0), c(t, 0.0), c(t, 0.0), c(t, 0.0)]).unwrap();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let phi =
        QuIdd::from_amplitudes(mgr, &[c(0.0, 0.0), c(0.5, 0.0), c(h, 0.0), c(0.5, 0.0)]).unwrap();
    (psi, phi)
}

/// Value of an operator diagram at `(row, col)`.
pub fn entry(mgr: &DdManager, q: &QuIdd, row: usize, col: usize) -> C {
    let n = q.n_qubits;
    mgr.evaluate(q.root, |v| {
        let idx = match v.kind {
            quidd::dd::VarKind::Row => row,
            quidd::dd::VarKind::Col => col,
        };
        (idx >> (n - 1 - v.qubit)) & 1 == 1
    })
}

/// Value of a state diagram at basis index `index`.
pub fn amp(mgr: &DdManager, q: &QuIdd, index: usize) -> C {
    entry(mgr, q, index, 0)
}

/// A pair `(A, B)` drawn from a mix of relations: identical, rebuilt by a
/// different gate route, global phase, diagonal twist (either side for
/// operators), an extra mixing gate, or unrelated.
pub fn random_pair<R: Rng>(
    mgr: &mut DdManager,
    rng: &mut R,
    n: u32,
    state: bool,
) -> (QuIdd, QuIdd) {
    let len = rng.gen_range(1..=3 * n as usize + 2);
    let base = random_circuit(rng, n, len, state);
    let b = build(mgr, &base);
    let diag = |rng: &mut R| -> Vec<Gate> {
        (0..rng.gen_range(1..=3))
            .map(|_| random_diagonal_gate(rng, n))
            .collect()
    };
    let a = match rng.gen_range(0..8) {
        0 => b,
        1 => {
            let q = rng.gen_range(0..n);
            build(mgr, &with_gates(&base, &[], &[Gate::H(q), Gate::H(q)]))
        }
        2 => quidd::linalg::scalar_ops(mgr, &b, polar(angle(rng)), quidd::linalg::ScalarMode::Mul)
            .unwrap(),
        3 => {
            let d = diag(rng);
            build(mgr, &with_gates(&base, &[], &d))
        }
        4 if !state => {
            let d = diag(rng);
            build(mgr, &with_gates(&base, &d, &[]))
        }
        5 => {
            let g = random_mixing_gate(rng, n);
            build(mgr, &with_gates(&base, &[], &[g]))
        }
        6 => {
            let d = diag(rng);
            let twisted = build(mgr, &with_gates(&base, &[], &d));
            quidd::linalg::scalar_ops(
                mgr,
                &twisted,
                polar(angle(rng)),
                quidd::linalg::ScalarMode::Mul,
            )
            .unwrap()
        }
        _ => {
            let mut other = random_circuit(rng, n, len, state);
            other.initial = base.initial.clone();
            build(mgr, &other)
        }
    };
    (a, b)
}
