//! Dense reference implementation used to validate the diagrams.
//!
//! Everything here works on flat vectors and row-major matrices and shares
//! no arithmetic with the diagram code. Index bit `n - 1 - q` holds qubit
//! `q`, so qubit 0 is the most significant.

use num_complex::Complex64;

use crate::circuit::{Circuit, Gate};
use crate::dd::{DdManager, DdNode, NodeRef, VarKind};
use crate::equiv::Level;
use crate::error::{Error, Result};
use crate::linalg::{QuIdd, QuIddKind};

type C = Complex64;

pub const MAX_DENSE_STATE_QUBITS: u32 = 12;
pub const MAX_DENSE_OPERATOR_QUBITS: u32 = 8;

/// Tolerance of the dense deciders.
pub const DENSE_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct DenseState {
    pub n: u32,
    pub amps: Vec<C>,
}

/// Row-major `2^n x 2^n` matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseOperator {
    pub n: u32,
    pub m: Vec<C>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Dense {
    State(DenseState),
    Operator(DenseOperator),
}

impl DenseOperator {
    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn get(&self, row: usize, col: usize) -> C {
        self.m[row * self.dim() + col]
    }

    /// `self · other†`.
    pub fn mul_adjoint(&self, other: &DenseOperator) -> DenseOperator {
        let d = self.dim();
        let mut m = vec![C::new(0.0, 0.0); d * d];
        for i in 0..d {
            for j in 0..d {
                let mut s = C::new(0.0, 0.0);
                for k in 0..d {
                    s += self.get(i, k) * other.get(j, k).conj();
                }
                m[i * d + j] = s;
            }
        }
        DenseOperator { n: self.n, m }
    }

    /// `max |U U† - I|`.
    pub fn unitarity_error(&self) -> f64 {
        let p = self.mul_adjoint(self);
        let d = self.dim();
        (0..d * d)
            .map(|idx| {
                let id = if idx / d == idx % d { 1.0 } else { 0.0 };
                (p.m[idx] - C::new(id, 0.0)).norm()
            })
            .fold(0.0, f64::max)
    }
}

impl Dense {
    pub fn data(&self) -> &[C] {
        match self {
            Dense::State(s) => &s.amps,
            Dense::Operator(o) => &o.m,
        }
    }

    pub fn n(&self) -> u32 {
        match self {
            Dense::State(s) => s.n,
            Dense::Operator(o) => o.n,
        }
    }
}

fn gate_matrix(g: &Gate) -> Option<[[C; 2]; 2]> {
    let z = C::new(0.0, 0.0);
    let one = C::new(1.0, 0.0);
    let h = C::new(0.5f64.sqrt(), 0.0);
    Some(match *g {
        Gate::X(_) => [[z, one], [one, z]],
        Gate::Y(_) => [[z, C::new(0.0, -1.0)], [C::new(0.0, 1.0), z]],
        Gate::Z(_) => [[one, z], [z, -one]],
        Gate::H(_) => [[h, h], [h, -h]],
        Gate::Ry(_, t) => {
            let (s, c) = (t / 2.0).sin_cos();
            [
                [C::new(c, 0.0), C::new(-s, 0.0)],
                [C::new(s, 0.0), C::new(c, 0.0)],
            ]
        }
        Gate::Rz(_, t) => [
            [C::new(t.cos(), -t.sin()), z],
            [z, C::new(t.cos(), t.sin())],
        ],
        Gate::Phase(_, t) => [[one, z], [z, C::new(t.cos(), t.sin())]],
        _ => return None,
    })
}

fn apply_gate(amps: &mut [C], n: u32, g: &Gate) {
    let mask = |q: u32| 1usize << (n - 1 - q);
    if let Some(m) = gate_matrix(g) {
        let t = mask(g.qubits()[0]);
        for i in 0..amps.len() {
            if i & t == 0 {
                let (a0, a1) = (amps[i], amps[i | t]);
                amps[i] = m[0][0] * a0 + m[0][1] * a1;
                amps[i | t] = m[1][0] * a0 + m[1][1] * a1;
            }
        }
        return;
    }
    match g {
        Gate::Cx { control, target } => {
            let (c, t) = (mask(*control), mask(*target));
            for i in 0..amps.len() {
                if i & c != 0 && i & t == 0 {
                    amps.swap(i, i | t);
                }
            }
        }
        Gate::Ccx { c1, c2, target } => {
            let (c, t) = (mask(*c1) | mask(*c2), mask(*target));
            for i in 0..amps.len() {
                if i & c == c && i & t == 0 {
                    amps.swap(i, i | t);
                }
            }
        }
        Gate::Cps(qs) => {
            let all: usize = qs.iter().map(|&q| mask(q)).sum();
            for (i, a) in amps.iter_mut().enumerate() {
                if i & all != 0 {
                    *a = -*a;
                }
            }
        }
        _ => unreachable!("single-qubit gates handled above"),
    }
}

fn run(c: &Circuit, start: usize) -> Vec<C> {
    let mut amps = vec![C::new(0.0, 0.0); 1 << c.n_qubits];
    amps[start] = C::new(1.0, 0.0);
    for g in &c.gates {
        apply_gate(&mut amps, c.n_qubits, g);
    }
    amps
}

pub fn dense_build_state(c: &Circuit) -> Result<DenseState> {
    c.validate()?;
    if c.n_qubits > MAX_DENSE_STATE_QUBITS {
        return Err(Error::SizeLimit(format!(
            "dense state limited to {MAX_DENSE_STATE_QUBITS} qubits"
        )));
    }
    let start = c
        .initial
        .iter()
        .fold(0usize, |acc, &b| (acc << 1) | usize::from(b));
    Ok(DenseState {
        n: c.n_qubits,
        amps: run(c, start),
    })
}

pub fn dense_build_operator(c: &Circuit) -> Result<DenseOperator> {
    c.validate()?;
    if c.n_qubits > MAX_DENSE_OPERATOR_QUBITS {
        return Err(Error::SizeLimit(format!(
            "dense operator limited to {MAX_DENSE_OPERATOR_QUBITS} qubits"
        )));
    }
    let d = 1usize << c.n_qubits;
    let mut m = vec![C::new(0.0, 0.0); d * d];
    for col in 0..d {
        for (row, v) in run(c, col).into_iter().enumerate() {
            m[row * d + col] = v;
        }
    }
    Ok(DenseOperator { n: c.n_qubits, m })
}

/// A state when the circuit names its initial state, else an operator.
pub fn dense_build(c: &Circuit) -> Result<Dense> {
    if c.explicit_init {
        dense_build_state(c).map(Dense::State)
    } else {
        dense_build_operator(c).map(Dense::Operator)
    }
}

/// Expands a diagram by walking every path; a variable skipped along a
/// path fans out to both of its values.
pub fn dense_from_dd(mgr: &DdManager, q: &QuIdd) -> Result<Dense> {
    let n = q.n_qubits;
    let (nvars, cap) = match q.kind {
        QuIddKind::Operator => (2 * n, MAX_DENSE_OPERATOR_QUBITS),
        _ => (n, MAX_DENSE_STATE_QUBITS),
    };
    if n > cap {
        return Err(Error::SizeLimit(format!(
            "dense expansion limited to {cap} qubits"
        )));
    }
    // Position of a variable in the flat index, most significant first.
    let slot = |kind: VarKind, qubit: u32| -> u32 {
        match (q.kind, kind) {
            (QuIddKind::Operator, VarKind::Row) => qubit,
            (QuIddKind::Operator, VarKind::Col) => n + qubit,
            _ => qubit,
        }
    };
    let mut out = vec![C::new(0.0, 0.0); 1 << nvars];
    // Variables in diagram order: R0, C0, R1, ... for operators.
    let order: Vec<(VarKind, u32)> = match q.kind {
        QuIddKind::Operator => (0..n)
            .flat_map(|k| [(VarKind::Row, k), (VarKind::Col, k)])
            .collect(),
        _ => (0..n).map(|k| (VarKind::Row, k)).collect(),
    };
    #[allow(clippy::too_many_arguments)]
    fn walk(
        mgr: &DdManager,
        r: NodeRef,
        depth: usize,
        index: usize,
        order: &[(VarKind, u32)],
        slot: &dyn Fn(VarKind, u32) -> u32,
        nvars: u32,
        out: &mut [C],
    ) {
        if depth == order.len() {
            match mgr.node(r) {
                DdNode::Terminal(v) => out[index] = v,
                DdNode::Internal { .. } => unreachable!("variable outside the diagram's range"),
            }
            return;
        }
        let (kind, qubit) = order[depth];
        let bit = 1usize << (nvars - 1 - slot(kind, qubit));
        let (t, e) = match mgr.node(r) {
            DdNode::Internal { var, then, else_ } if var.kind == kind && var.qubit == qubit => {
                (then, else_)
            }
            _ => (r, r),
        };
        walk(mgr, e, depth + 1, index, order, slot, nvars, out);
        walk(mgr, t, depth + 1, index | bit, order, slot, nvars, out);
    }
    walk(mgr, q.root, 0, 0, &order, &slot, nvars, &mut out);
    Ok(match q.kind {
        QuIddKind::Operator => Dense::Operator(DenseOperator { n, m: out }),
        _ => Dense::State(DenseState { n, amps: out }),
    })
}

/// Largest entrywise difference between a diagram and a dense value.
pub fn cross_check(mgr: &DdManager, q: &QuIdd, d: &Dense) -> Result<f64> {
    let e = dense_from_dd(mgr, q)?;
    if e.data().len() != d.data().len() {
        return Err(Error::InvalidArgument("dimension mismatch".into()));
    }
    Ok(e.data()
        .iter()
        .zip(d.data())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max))
}

fn is_zero(x: C) -> bool {
    x.norm() <= DENSE_TOL
}

fn is_unit(x: C) -> bool {
    (x.norm() - 1.0).abs() <= DENSE_TOL
}

/// `p` with `a = p b`, |p| = 1, when it exists.
pub fn dense_global_phase(a: &[C], b: &[C]) -> Option<C> {
    let (k, bk) = b
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.norm().total_cmp(&y.1.norm()))?;
    if is_zero(*bk) {
        return None;
    }
    let p = a[k] / bk;
    if !is_unit(p) {
        return None;
    }
    a.iter()
        .zip(b)
        .all(|(x, y)| (x - p * y).norm() <= DENSE_TOL)
        .then_some(p)
}

/// Per-entry phases `a_k / b_k`, with 1 where both are zero.
pub fn dense_state_phases(a: &[C], b: &[C]) -> Option<Vec<C>> {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| match (is_zero(x), is_zero(y)) {
            (true, true) => Some(C::new(1.0, 0.0)),
            (false, false) => Some(x / y).filter(|&q| is_unit(q)),
            _ => None,
        })
        .collect()
}

/// Diagonal `d` with `u = diag(d) v` (`left`) or `u = v diag(d)`.
pub fn dense_operator_phases(u: &DenseOperator, v: &DenseOperator, left: bool) -> Option<Vec<C>> {
    let d = u.dim();
    let at = |m: &DenseOperator, line: usize, k: usize| {
        if left {
            m.get(line, k)
        } else {
            m.get(k, line)
        }
    };
    (0..d)
        .map(|line| {
            let k =
                (0..d).max_by(|&x, &y| at(v, line, x).norm().total_cmp(&at(v, line, y).norm()))?;
            let p = if is_zero(at(v, line, k)) {
                C::new(1.0, 0.0)
            } else {
                at(u, line, k) / at(v, line, k)
            };
            let ok = is_unit(p)
                && (0..d).all(|j| (at(u, line, j) - p * at(v, line, j)).norm() <= DENSE_TOL);
            ok.then_some(p)
        })
        .collect()
}

/// Reference verdict. Phases follow `A = phase · B`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct DenseVerdict {
    pub equivalent: bool,
    pub global_phase: Option<C>,
    pub state_phases: Option<Vec<C>>,
    pub left_phases: Option<Vec<C>>,
    pub right_phases: Option<Vec<C>>,
}

pub fn dense_equiv(a: &Dense, b: &Dense, level: Level) -> Result<DenseVerdict> {
    if a.n() != b.n() || a.data().len() != b.data().len() {
        return Err(Error::InvalidArgument("dimension mismatch".into()));
    }
    let mut v = DenseVerdict::default();
    match level {
        Level::Exact => {
            v.equivalent = a
                .data()
                .iter()
                .zip(b.data())
                .all(|(x, y)| (x - y).norm() <= DENSE_TOL);
        }
        Level::Global => {
            v.global_phase = dense_global_phase(a.data(), b.data());
            v.equivalent = v.global_phase.is_some();
        }
        Level::Relative => match (a, b) {
            (Dense::State(x), Dense::State(y)) => {
                v.state_phases = dense_state_phases(&x.amps, &y.amps);
                v.equivalent = v.state_phases.is_some();
            }
            (Dense::Operator(x), Dense::Operator(y)) => {
                v.left_phases = dense_operator_phases(x, y, true);
                v.right_phases = dense_operator_phases(x, y, false);
                v.equivalent = v.left_phases.is_some() || v.right_phases.is_some();
            }
            _ => {
                return Err(Error::InvalidArgument(
                    "state compared with operator".into(),
                ))
            }
        },
    }
    Ok(v)
}
