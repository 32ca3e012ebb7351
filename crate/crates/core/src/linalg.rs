//! Vectors and matrices as decision diagrams.
//!
//! A state over `n` qubits uses the row variables `R0..R(n-1)`; an operator
//! uses the interleaved `R0, C0, ..., R(n-1), C(n-1)`. Products work on
//! 2x2 blocks one qubit at a time. A qubit level absent from both operands
//! stands for `2^k` identical summands, which is folded in as a power-of-two
//! scale factor.

use std::f64::consts::FRAC_1_SQRT_2;

use rustc_hash::FxHashMap;

use crate::circuit::Gate;
use crate::dd::{BinaryOp, ComplexValue, DdManager, DdNode, NodeRef, OpTag, UnaryOp, VarId};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum QuIddKind {
    /// Column vector over row variables.
    State,
    /// Conjugate-transposed state; still indexed by row variables.
    Bra,
    Operator,
}

impl QuIddKind {
    pub fn name(self) -> &'static str {
        match self {
            QuIddKind::State => "state",
            QuIddKind::Bra => "bra",
            QuIddKind::Operator => "operator",
        }
    }
}

/// A rooted diagram tagged with its qubit count and role.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QuIdd {
    pub root: NodeRef,
    pub n_qubits: u32,
    pub kind: QuIddKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModulusMode {
    Modulus,
    CeilModulus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScalarMode {
    Mul,
    Div,
}

pub(crate) fn expect_kind(q: &QuIdd, kind: QuIddKind) -> Result<()> {
    if q.kind == kind {
        Ok(())
    } else {
        Err(Error::WrongKind {
            expected: kind.name(),
            found: q.kind.name(),
        })
    }
}

pub(crate) fn same_shape(a: &QuIdd, b: &QuIdd) -> Result<()> {
    if a.kind != b.kind {
        return Err(Error::KindMismatch {
            left: a.kind.name(),
            right: b.kind.name(),
        });
    }
    if a.n_qubits != b.n_qubits {
        return Err(Error::QubitMismatch {
            left: a.n_qubits,
            right: b.n_qubits,
        });
    }
    Ok(())
}

fn c(re: f64, im: f64) -> ComplexValue {
    ComplexValue::new(re, im)
}

impl QuIdd {
    pub fn state(root: NodeRef, n_qubits: u32) -> Self {
        Self {
            root,
            n_qubits,
            kind: QuIddKind::State,
        }
    }

    pub fn operator(root: NodeRef, n_qubits: u32) -> Self {
        Self {
            root,
            n_qubits,
            kind: QuIddKind::Operator,
        }
    }

    /// The computational basis state `|bits>`; `bits[0]` is qubit 0.
    pub fn basis_state(mgr: &mut DdManager, bits: &[bool]) -> Result<Self> {
        Self::basis_term(mgr, bits, c(1.0, 0.0)).map(|root| Self::state(root, bits.len() as u32))
    }

    /// `amp * |bits>` as a bare node.
    pub(crate) fn basis_term(
        mgr: &mut DdManager,
        bits: &[bool],
        amp: ComplexValue,
    ) -> Result<NodeRef> {
        let zero = mgr.zero();
        let mut node = mgr.terminal(amp)?;
        for (q, &b) in bits.iter().enumerate().rev() {
            let var = VarId::row(q as u32);
            node = if b {
                mgr.ite_unchecked(var, node, zero)
            } else {
                mgr.ite_unchecked(var, zero, node)
            };
        }
        Ok(node)
    }

    /// Builds a state from `f(index)` over all `2^n` indices. Fails on a
    /// zero vector.
    pub fn state_from_fn(
        mgr: &mut DdManager,
        n: u32,
        mut f: impl FnMut(usize) -> ComplexValue,
    ) -> Result<Self> {
        fn build(
            mgr: &mut DdManager,
            n: u32,
            q: u32,
            index: usize,
            f: &mut impl FnMut(usize) -> ComplexValue,
        ) -> Result<NodeRef> {
            if q == n {
                return mgr.terminal(f(index));
            }
            let e = build(mgr, n, q + 1, index << 1, f)?;
            let t = build(mgr, n, q + 1, (index << 1) | 1, f)?;
            Ok(mgr.ite_unchecked(VarId::row(q), t, e))
        }
        let root = build(mgr, n, 0, 0, &mut f)?;
        if root == mgr.zero() {
            return Err(Error::ZeroState);
        }
        Ok(Self::state(root, n))
    }

    pub fn from_amplitudes(mgr: &mut DdManager, amps: &[ComplexValue]) -> Result<Self> {
        if !amps.len().is_power_of_two() {
            return Err(Error::InvalidArgument(format!(
                "vector length {} is not a power of two",
                amps.len()
            )));
        }
        let n = amps.len().trailing_zeros();
        Self::state_from_fn(mgr, n, |i| amps[i])
    }

    /// Builds an operator from `f(row, col)` over all `4^n` entries.
    pub fn operator_from_fn(
        mgr: &mut DdManager,
        n: u32,
        mut f: impl FnMut(usize, usize) -> ComplexValue,
    ) -> Result<Self> {
        fn build(
            mgr: &mut DdManager,
            n: u32,
            q: u32,
            row: usize,
            col: usize,
            f: &mut impl FnMut(usize, usize) -> ComplexValue,
        ) -> Result<NodeRef> {
            if q == n {
                return mgr.terminal(f(row, col));
            }
            let mut halves = [mgr.zero(); 2];
            for (r, half) in halves.iter_mut().enumerate() {
                let e = build(mgr, n, q + 1, (row << 1) | r, col << 1, f)?;
                let t = build(mgr, n, q + 1, (row << 1) | r, (col << 1) | 1, f)?;
                *half = mgr.ite_unchecked(VarId::col(q), t, e);
            }
            Ok(mgr.ite_unchecked(VarId::row(q), halves[1], halves[0]))
        }
        let root = build(mgr, n, 0, 0, 0, &mut f)?;
        Ok(Self::operator(root, n))
    }

    pub fn identity(mgr: &mut DdManager, n: u32) -> Result<Self> {
        kron_chain(mgr, n, &[], c(1.0, 0.0)).map(|root| Self::operator(root, n))
    }
}

type Mat2 = [[ComplexValue; 2]; 2];

const ID2: Mat2 = [[c_const(1.0), c_const(0.0)], [c_const(0.0), c_const(1.0)]];
const P0: Mat2 = [[c_const(1.0), c_const(0.0)], [c_const(0.0), c_const(0.0)]];
const P1: Mat2 = [[c_const(0.0), c_const(0.0)], [c_const(0.0), c_const(1.0)]];
const PAULI_X: Mat2 = [[c_const(0.0), c_const(1.0)], [c_const(1.0), c_const(0.0)]];

const fn c_const(re: f64) -> ComplexValue {
    ComplexValue::new(re, 0.0)
}

/// `coef * (M_0 ⊗ M_1 ⊗ ... ⊗ M_{n-1})` where unlisted qubits carry the
/// identity. Built bottom-up so identity tails are shared between calls.
fn kron_chain(
    mgr: &mut DdManager,
    n: u32,
    factors: &[(u32, Mat2)],
    coef: ComplexValue,
) -> Result<NodeRef> {
    let zero = mgr.zero();
    let mut node = mgr.terminal(coef)?;
    if node == zero {
        return Ok(zero);
    }
    for q in (0..n).rev() {
        let m = factors
            .iter()
            .find(|(fq, _)| *fq == q)
            .map_or(ID2, |(_, m)| *m);
        let mut rows = [zero; 2];
        for (r, row) in rows.iter_mut().enumerate() {
            let mut cols = [zero; 2];
            for (col, slot) in cols.iter_mut().enumerate() {
                let v = m[r][col];
                *slot = if v == c(0.0, 0.0) {
                    zero
                } else if v == c(1.0, 0.0) {
                    node
                } else {
                    mgr.scale(node, v)?
                };
            }
            *row = mgr.ite_unchecked(VarId::col(q), cols[1], cols[0]);
        }
        node = mgr.ite_unchecked(VarId::row(q), rows[1], rows[0]);
    }
    Ok(node)
}

/// 2x2 matrix of a single-qubit gate.
pub fn single_qubit_matrix(g: &Gate) -> Option<Mat2> {
    let s = FRAC_1_SQRT_2;
    Some(match *g {
        Gate::X(_) => PAULI_X,
        Gate::Y(_) => [[c(0.0, 0.0), c(0.0, -1.0)], [c(0.0, 1.0), c(0.0, 0.0)]],
        Gate::Z(_) => [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-1.0, 0.0)]],
        Gate::H(_) => [[c(s, 0.0), c(s, 0.0)], [c(s, 0.0), c(-s, 0.0)]],
        Gate::Ry(_, theta) => {
            let (sn, cs) = (theta / 2.0).sin_cos();
            [[c(cs, 0.0), c(-sn, 0.0)], [c(sn, 0.0), c(cs, 0.0)]]
        }
        Gate::Rz(_, theta) => [
            [ComplexValue::from_polar(1.0, -theta), c(0.0, 0.0)],
            [c(0.0, 0.0), ComplexValue::from_polar(1.0, theta)],
        ],
        Gate::Phase(_, theta) => [
            [c(1.0, 0.0), c(0.0, 0.0)],
            [c(0.0, 0.0), ComplexValue::from_polar(1.0, theta)],
        ],
        _ => return None,
    })
}

/// The gate as a sum of Kronecker-product terms.
fn gate_terms(g: &Gate) -> Vec<(ComplexValue, Vec<(u32, Mat2)>)> {
    let one = c(1.0, 0.0);
    if let Some(m) = single_qubit_matrix(g) {
        return vec![(one, vec![(g.qubits()[0], m)])];
    }
    match g {
        Gate::Cx { control, target } => vec![
            (one, vec![(*control, P0)]),
            (one, vec![(*control, P1), (*target, PAULI_X)]),
        ],
        Gate::Ccx { c1, c2, target } => {
            let x_minus_i = [[c(-1.0, 0.0), one], [one, c(-1.0, 0.0)]];
            vec![
                (one, vec![]),
                (one, vec![(*c1, P1), (*c2, P1), (*target, x_minus_i)]),
            ]
        }
        // 2|0..0><0..0| - I on the listed qubits.
        Gate::Cps(qs) => vec![
            (c(-1.0, 0.0), vec![]),
            (c(2.0, 0.0), qs.iter().map(|&q| (q, P0)).collect()),
        ],
        _ => unreachable!("single-qubit gates handled above"),
    }
}

/// `g` on its qubits, identity elsewhere, as an `n`-qubit operator.
pub fn lift_gate(mgr: &mut DdManager, g: &Gate, n: u32) -> Result<QuIdd> {
    g.validate(n)?;
    let mut acc = mgr.zero();
    for (coef, factors) in gate_terms(g) {
        let term = kron_chain(mgr, n, &factors, coef)?;
        acc = mgr.add(acc, term)?;
    }
    Ok(QuIdd::operator(acc, n))
}

fn pow2(k: u32) -> ComplexValue {
    c(2f64.powi(k as i32), 0.0)
}

/// Matrix-matrix or matrix-vector product `a · b`.
pub fn matmul(mgr: &mut DdManager, a: &QuIdd, b: &QuIdd) -> Result<QuIdd> {
    expect_kind(a, QuIddKind::Operator)?;
    if b.kind == QuIddKind::Bra {
        return Err(Error::WrongKind {
            expected: "operator or state",
            found: "bra",
        });
    }
    if a.n_qubits != b.n_qubits {
        return Err(Error::QubitMismatch {
            left: a.n_qubits,
            right: b.n_qubits,
        });
    }
    let n = a.n_qubits;
    let vector = b.kind == QuIddKind::State;
    let mut mm = MatMul { n, vector };
    let root = mm.scaled(mgr, a.root, b.root, 0)?;
    Ok(QuIdd {
        root,
        n_qubits: n,
        kind: b.kind,
    })
}

struct MatMul {
    n: u32,
    vector: bool,
}

impl MatMul {
    fn tag(&self) -> OpTag {
        if self.vector {
            OpTag::MatVec { n: self.n }
        } else {
            OpTag::MatMul { n: self.n }
        }
    }

    /// Product of `a` and `b` regarded as matrices over qubits `from..n`.
    fn scaled(
        &mut self,
        mgr: &mut DdManager,
        a: NodeRef,
        b: NodeRef,
        from: u32,
    ) -> Result<NodeRef> {
        let top = mgr.top_qubit(a, self.n).min(mgr.top_qubit(b, self.n));
        let r = self.at_top(mgr, a, b, top)?;
        if top > from && r != mgr.zero() {
            mgr.scale(r, pow2(top - from))
        } else {
            Ok(r)
        }
    }

    fn at_top(&mut self, mgr: &mut DdManager, a: NodeRef, b: NodeRef, t: u32) -> Result<NodeRef> {
        let zero = mgr.zero();
        if a == zero || b == zero {
            return Ok(zero);
        }
        if t == self.n {
            return mgr.apply_binary(a, b, BinaryOp::Mul);
        }
        let tag = self.tag();
        if let Some(r) = mgr.cache_get(tag, a, b) {
            return Ok(r);
        }
        let (rv, cv) = (VarId::row(t), VarId::col(t));
        let blocks = |mgr: &DdManager, x: NodeRef| -> [[NodeRef; 2]; 2] {
            let (x1, x0) = mgr.cofactors(x, rv);
            let (x11, x10) = mgr.cofactors(x1, cv);
            let (x01, x00) = mgr.cofactors(x0, cv);
            [[x00, x01], [x10, x11]]
        };
        let ab = blocks(mgr, a);
        let r = if self.vector {
            let (b1, b0) = mgr.cofactors(b, rv);
            let bv = [b0, b1];
            let mut out = [zero; 2];
            for (row, slot) in out.iter_mut().enumerate() {
                let p0 = self.scaled(mgr, ab[row][0], bv[0], t + 1)?;
                let p1 = self.scaled(mgr, ab[row][1], bv[1], t + 1)?;
                *slot = mgr.add(p0, p1)?;
            }
            mgr.ite_unchecked(rv, out[1], out[0])
        } else {
            let bb = blocks(mgr, b);
            let mut rows = [zero; 2];
            for (row, rslot) in rows.iter_mut().enumerate() {
                let mut cols = [zero; 2];
                for (col, cslot) in cols.iter_mut().enumerate() {
                    let p0 = self.scaled(mgr, ab[row][0], bb[0][col], t + 1)?;
                    let p1 = self.scaled(mgr, ab[row][1], bb[1][col], t + 1)?;
                    *cslot = mgr.add(p0, p1)?;
                }
                *rslot = mgr.ite_unchecked(cv, cols[1], cols[0]);
            }
            mgr.ite_unchecked(rv, rows[1], rows[0])
        };
        mgr.cache_put(tag, a, b, r);
        Ok(r)
    }
}

fn transpose_rec(mgr: &mut DdManager, a: NodeRef, conj: bool) -> Result<NodeRef> {
    let tag = if conj {
        OpTag::ConjTranspose
    } else {
        OpTag::Transpose
    };
    let var = match mgr.node(a) {
        DdNode::Terminal(v) => return mgr.terminal(if conj { v.conj() } else { v }),
        DdNode::Internal { var, .. } => var,
    };
    if let Some(r) = mgr.cache_get(tag, a, a) {
        return Ok(r);
    }
    let (rv, cv) = (VarId::row(var.qubit), VarId::col(var.qubit));
    let (a1, a0) = mgr.cofactors(a, rv);
    let (a11, a10) = mgr.cofactors(a1, cv);
    let (a01, a00) = mgr.cofactors(a0, cv);
    // Result block (r, c) is the transpose of input block (c, r).
    let g00 = transpose_rec(mgr, a00, conj)?;
    let g11 = transpose_rec(mgr, a11, conj)?;
    let g01 = transpose_rec(mgr, a10, conj)?;
    let g10 = transpose_rec(mgr, a01, conj)?;
    let r1 = mgr.ite_unchecked(cv, g11, g10);
    let r0 = mgr.ite_unchecked(cv, g01, g00);
    let r = mgr.ite_unchecked(rv, r1, r0);
    mgr.cache_put(tag, a, a, r);
    Ok(r)
}

/// Adjoint. For an operator this swaps the row and column role of every
/// qubit and conjugates; a state becomes a bra and vice versa.
pub fn conj_transpose(mgr: &mut DdManager, a: &QuIdd) -> Result<QuIdd> {
    match a.kind {
        QuIddKind::Operator => Ok(QuIdd {
            root: transpose_rec(mgr, a.root, true)?,
            ..*a
        }),
        QuIddKind::State | QuIddKind::Bra => {
            let root = mgr.apply_unary(a.root, UnaryOp::Conjugate)?;
            let kind = if a.kind == QuIddKind::State {
                QuIddKind::Bra
            } else {
                QuIddKind::State
            };
            Ok(QuIdd { root, kind, ..*a })
        }
    }
}

/// Plain transpose of an operator.
pub fn transpose(mgr: &mut DdManager, a: &QuIdd) -> Result<QuIdd> {
    expect_kind(a, QuIddKind::Operator)?;
    Ok(QuIdd {
        root: transpose_rec(mgr, a.root, false)?,
        ..*a
    })
}

/// `<a|b> = Σ conj(a_i) b_i`, summed over node pairs without building the
/// product diagram, so no intermediate value is snapped to the terminal
/// grid. A pair that skips `k` variables counts `2^k` times.
pub fn inner_product(mgr: &mut DdManager, a: &QuIdd, b: &QuIdd) -> Result<ComplexValue> {
    fn rec(
        mgr: &DdManager,
        a: NodeRef,
        b: NodeRef,
        n: u32,
        memo: &mut FxHashMap<(NodeRef, NodeRef), ComplexValue>,
    ) -> ComplexValue {
        if a == mgr.zero() || b == mgr.zero() {
            return c(0.0, 0.0);
        }
        if let (Some(x), Some(y)) = (mgr.value(a), mgr.value(b)) {
            return x.conj() * y;
        }
        if let Some(&v) = memo.get(&(a, b)) {
            return v;
        }
        let var = mgr.top_var(a, b);
        let (a1, a0) = mgr.cofactors(a, var);
        let (b1, b0) = mgr.cofactors(b, var);
        let mut v = c(0.0, 0.0);
        for (x, y) in [(a1, b1), (a0, b0)] {
            let top = mgr.top_qubit(x, n).min(mgr.top_qubit(y, n));
            v += rec(mgr, x, y, n, memo) * 2f64.powi((top - var.qubit - 1) as i32);
        }
        memo.insert((a, b), v);
        v
    }
    expect_kind(a, QuIddKind::State)?;
    same_shape(a, b)?;
    mgr.check(a.root)?;
    mgr.check(b.root)?;
    let n = a.n_qubits;
    let top = mgr.top_qubit(a.root, n).min(mgr.top_qubit(b.root, n));
    let mut memo = FxHashMap::default();
    Ok(rec(mgr, a.root, b.root, n, &mut memo) * 2f64.powi(top as i32))
}

pub fn modulus_map(mgr: &mut DdManager, a: &QuIdd, mode: ModulusMode) -> Result<QuIdd> {
    let op = match mode {
        ModulusMode::Modulus => UnaryOp::Modulus,
        ModulusMode::CeilModulus => UnaryOp::CeilModulus,
    };
    Ok(QuIdd {
        root: mgr.apply_unary(a.root, op)?,
        ..*a
    })
}

pub fn scalar_ops(
    mgr: &mut DdManager,
    a: &QuIdd,
    factor: ComplexValue,
    mode: ScalarMode,
) -> Result<QuIdd> {
    let op = match mode {
        ScalarMode::Mul => UnaryOp::ScalarMul(factor),
        ScalarMode::Div => UnaryOp::ScalarDiv(factor),
    };
    Ok(QuIdd {
        root: mgr.apply_unary(a.root, op)?,
        ..*a
    })
}

#[cfg(test)]
#[allow(clippy::approx_constant)]
mod tests {
    use super::*;

    fn entry(mgr: &DdManager, q: &QuIdd, row: usize, col: usize) -> ComplexValue {
        let n = q.n_qubits;
        mgr.evaluate(q.root, |v| {
            let idx = match v.kind {
                crate::dd::VarKind::Row => row,
                crate::dd::VarKind::Col => col,
            };
            (idx >> (n - 1 - v.qubit)) & 1 == 1
        })
    }

    #[test]
    fn cnot_matrix_entries() {
        let mut m = DdManager::new();
        let cx = lift_gate(
            &mut m,
            &Gate::Cx {
                control: 0,
                target: 1,
            },
            2,
        )
        .unwrap();
        let expect = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]];
        for (r, row) in expect.iter().enumerate() {
            for (col, &v) in row.iter().enumerate() {
                assert_eq!(entry(&m, &cx, r, col), c(v as f64, 0.0));
            }
        }
        let support = m.stats(cx.root).support;
        assert_eq!(support.len(), 4);
        // Real symmetric, so its adjoint is itself.
        assert_eq!(conj_transpose(&mut m, &cx).unwrap().root, cx.root);
    }

    #[test]
    fn hadamard_entries() {
        let mut m = DdManager::new();
        let h = lift_gate(&mut m, &Gate::H(0), 1).unwrap();
        assert_eq!(entry(&m, &h, 0, 0).re, 0.7071067811865476);
        assert_eq!(entry(&m, &h, 1, 1).re, -0.7071067811865476);
    }

    #[test]
    fn identity_and_self_inverse() {
        let mut m = DdManager::new();
        let id = QuIdd::identity(&mut m, 2).unwrap();
        let cx = lift_gate(
            &mut m,
            &Gate::Cx {
                control: 0,
                target: 1,
            },
            2,
        )
        .unwrap();
        assert_eq!(matmul(&mut m, &id, &cx).unwrap().root, cx.root);
        assert_eq!(matmul(&mut m, &cx, &cx).unwrap().root, id.root);
        let psi = QuIdd::basis_state(&mut m, &[true, false]).unwrap();
        assert_eq!(matmul(&mut m, &id, &psi).unwrap().root, psi.root);
    }

    #[test]
    fn diagonal_adjoint() {
        let mut m = DdManager::new();
        let d = QuIdd::operator_from_fn(&mut m, 1, |r, col| match (r, col) {
            (0, 0) => c(0.0, 1.0),
            (1, 1) => c(0.0, -1.0),
            _ => c(0.0, 0.0),
        })
        .unwrap();
        let e = QuIdd::operator_from_fn(&mut m, 1, |r, col| match (r, col) {
            (0, 0) => c(0.0, -1.0),
            (1, 1) => c(0.0, 1.0),
            _ => c(0.0, 0.0),
        })
        .unwrap();
        let dt = conj_transpose(&mut m, &d).unwrap();
        assert_eq!(dt.root, e.root);
        assert_eq!(conj_transpose(&mut m, &dt).unwrap().root, d.root);
    }

    #[test]
    fn hadamard_on_basis_state() {
        let mut m = DdManager::new();
        let h = lift_gate(&mut m, &Gate::H(0), 2).unwrap();
        let zz = QuIdd::basis_state(&mut m, &[false, false]).unwrap();
        let out = matmul(&mut m, &h, &zz).unwrap();
        let s = FRAC_1_SQRT_2;
        let expect = [s, 0.0, s, 0.0];
        for (i, &e) in expect.iter().enumerate() {
            assert!((entry(&m, &out, i, 0) - c(e, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn inner_products() {
        let mut m = DdManager::new();
        let a = QuIdd::basis_state(&mut m, &[false, false]).unwrap();
        let b = QuIdd::basis_state(&mut m, &[true, true]).unwrap();
        assert_eq!(inner_product(&mut m, &a, &b).unwrap(), c(0.0, 0.0));
        // The uniform superposition skips every variable.
        let u = QuIdd::from_amplitudes(&mut m, &[c(0.5, 0.0); 4]).unwrap();
        assert!(m.is_terminal(u.root));
        assert!((inner_product(&mut m, &u, &u).unwrap() - c(1.0, 0.0)).norm() < 1e-12);
        let p = ComplexValue::from_polar(1.0, std::f64::consts::FRAC_PI_4);
        let up = scalar_ops(&mut m, &u, p, ScalarMode::Mul).unwrap();
        assert!((inner_product(&mut m, &u, &up).unwrap() - p).norm() < 1e-9);
    }

    #[test]
    fn modulus_examples() {
        let mut m = DdManager::new();
        let t = 1.0 / 3f64.sqrt();
        let psi = QuIdd::from_amplitudes(&mut m, &[c(0.0, 0.0), c(t, 0.0), c(t, 0.0), c(t, 0.0)])
            .unwrap();
        let md = modulus_map(&mut m, &psi, ModulusMode::Modulus).unwrap();
        let vals = m.stats(md.root).terminal_values;
        assert_eq!(vals.len(), 2);
        assert!(vals.iter().any(|v| v.norm() == 0.0));
        assert!(vals
            .iter()
            .any(|v| (v.re - 0.5773502691896258).abs() < 1e-15));
        assert_eq!(modulus_map(&mut m, &md, ModulusMode::Modulus).unwrap(), md);
    }

    #[test]
    fn scalar_round_trip() {
        let mut m = DdManager::new();
        let psi = QuIdd::from_amplitudes(&mut m, &[c(0.6, 0.0), c(0.0, 0.8)]).unwrap();
        let two = c(2.0, 0.0);
        let up = scalar_ops(&mut m, &psi, two, ScalarMode::Mul).unwrap();
        assert_eq!(m.node_count(up.root), m.node_count(psi.root));
        assert_eq!(scalar_ops(&mut m, &up, two, ScalarMode::Div).unwrap(), psi);
        assert_eq!(
            scalar_ops(&mut m, &psi, c(1.0, 0.0), ScalarMode::Mul).unwrap(),
            psi
        );
        assert!(scalar_ops(&mut m, &psi, c(0.0, 0.0), ScalarMode::Div).is_err());
    }

    #[test]
    fn shape_errors() {
        let mut m = DdManager::new();
        let id2 = QuIdd::identity(&mut m, 2).unwrap();
        let id3 = QuIdd::identity(&mut m, 3).unwrap();
        assert!(matches!(
            matmul(&mut m, &id2, &id3),
            Err(Error::QubitMismatch { .. })
        ));
        let s = QuIdd::basis_state(&mut m, &[false, false]).unwrap();
        assert!(matches!(
            matmul(&mut m, &s, &id2),
            Err(Error::WrongKind { .. })
        ));
        assert!(lift_gate(
            &mut m,
            &Gate::Cx {
                control: 1,
                target: 1
            },
            2
        )
        .is_err());
        assert!(lift_gate(&mut m, &Gate::X(2), 2).is_err());
    }
}
