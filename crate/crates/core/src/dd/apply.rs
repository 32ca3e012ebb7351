//! The Apply algorithm: pointwise unary and binary operations over diagrams.

use super::{is_zero, ComplexValue, DdManager, DdNode, NodeRef, OpTag};

/// A sum whose component is this much smaller than the larger operand
/// component is rounding residue and becomes exactly zero.
const CANCELLATION: f64 = 1e-12;

fn cancel(sum: f64, x: f64, y: f64) -> f64 {
    if sum.abs() <= CANCELLATION * x.abs().max(y.abs()) {
        0.0
    } else {
        sum
    }
}

fn add(a: ComplexValue, b: ComplexValue) -> ComplexValue {
    ComplexValue::new(
        cancel(a.re + b.re, a.re, b.re),
        cancel(a.im + b.im, a.im, b.im),
    )
}
use crate::error::{Error, Result};

/// Pointwise binary operations.
#[derive(Clone, Copy, Debug)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    /// Division. A zero divisor anywhere is an error.
    Div,
    /// Division with `0/0 = 1` and `x/0 = 0/x = 0` for nonzero `x`.
    /// Zero means exactly zero; the terminal grid flushes tiny values.
    GuardedDiv,
    /// The operand of smaller modulus; the left one on ties.
    MinModulus,
    /// User operation. `tag` keys the compute cache and must identify `f`.
    Custom {
        tag: u32,
        f: fn(ComplexValue, ComplexValue) -> ComplexValue,
    },
}

/// Pointwise unary operations.
#[derive(Clone, Copy, Debug)]
pub enum UnaryOp {
    Conjugate,
    Modulus,
    /// `1` for nonzero values, `0` for zero.
    CeilModulus,
    ScalarMul(ComplexValue),
    ScalarDiv(ComplexValue),
    Custom {
        tag: u32,
        f: fn(ComplexValue) -> ComplexValue,
    },
}

fn bits(c: ComplexValue) -> (u64, u64) {
    (c.re.to_bits(), c.im.to_bits())
}

impl BinaryOp {
    fn tag(self) -> OpTag {
        match self {
            BinaryOp::Add => OpTag::Add,
            BinaryOp::Sub => OpTag::Sub,
            BinaryOp::Mul => OpTag::Mul,
            BinaryOp::Div => OpTag::Div,
            BinaryOp::GuardedDiv => OpTag::GuardedDiv,
            BinaryOp::MinModulus => OpTag::MinModulus,
            BinaryOp::Custom { tag, .. } => OpTag::CustomBinary(tag),
        }
    }

    fn commutative(self) -> bool {
        matches!(self, BinaryOp::Add | BinaryOp::Mul)
    }

    fn eval(self, a: ComplexValue, b: ComplexValue) -> Result<ComplexValue> {
        Ok(match self {
            BinaryOp::Add => add(a, b),
            BinaryOp::Sub => add(a, -b),
            BinaryOp::Mul => a * b,
            BinaryOp::Div => {
                if b.re == 0.0 && b.im == 0.0 {
                    return Err(Error::DivisionByZero);
                }
                a / b
            }
            BinaryOp::GuardedDiv => {
                let (za, zb) = (is_zero(a), is_zero(b));
                match (za, zb) {
                    (true, true) => ComplexValue::new(1.0, 0.0),
                    (false, false) => a / b,
                    _ => ComplexValue::new(0.0, 0.0),
                }
            }
            BinaryOp::MinModulus => {
                if b.norm() < a.norm() {
                    b
                } else {
                    a
                }
            }
            BinaryOp::Custom { f, .. } => f(a, b),
        })
    }
}

impl UnaryOp {
    fn tag(self) -> OpTag {
        match self {
            UnaryOp::Conjugate => OpTag::Conj,
            UnaryOp::Modulus => OpTag::Modulus,
            UnaryOp::CeilModulus => OpTag::CeilModulus,
            UnaryOp::ScalarMul(c) => {
                let (re, im) = bits(c);
                OpTag::ScalarMul(re, im)
            }
            UnaryOp::ScalarDiv(c) => {
                let (re, im) = bits(c);
                OpTag::ScalarDiv(re, im)
            }
            UnaryOp::Custom { tag, .. } => OpTag::CustomUnary(tag),
        }
    }

    fn eval(self, a: ComplexValue) -> ComplexValue {
        match self {
            UnaryOp::Conjugate => a.conj(),
            UnaryOp::Modulus => ComplexValue::new(a.norm(), 0.0),
            UnaryOp::CeilModulus => {
                if !is_zero(a) {
                    ComplexValue::new(1.0, 0.0)
                } else {
                    ComplexValue::new(0.0, 0.0)
                }
            }
            UnaryOp::ScalarMul(c) => a * c,
            UnaryOp::ScalarDiv(c) => a / c,
            UnaryOp::Custom { f, .. } => f(a),
        }
    }
}

impl DdManager {
    /// Pointwise `op(a, b)`, memoized in the compute cache.
    pub fn apply_binary(&mut self, a: NodeRef, b: NodeRef, op: BinaryOp) -> Result<NodeRef> {
        self.check(a)?;
        self.check(b)?;
        self.binary_rec(a, b, op)
    }

    fn binary_rec(&mut self, a: NodeRef, b: NodeRef, op: BinaryOp) -> Result<NodeRef> {
        if let (DdNode::Terminal(va), DdNode::Terminal(vb)) = (self.node(a), self.node(b)) {
            let v = op.eval(va, vb)?;
            return self.terminal(v);
        }
        match op {
            BinaryOp::Add if a == self.zero => return Ok(b),
            BinaryOp::Add | BinaryOp::Sub if b == self.zero => return Ok(a),
            BinaryOp::Sub if a == b => return Ok(self.zero),
            BinaryOp::Mul if a == self.zero || b == self.zero => return Ok(self.zero),
            BinaryOp::Mul if a == self.one => return Ok(b),
            BinaryOp::Mul if b == self.one => return Ok(a),
            BinaryOp::Div if b == self.zero => return Err(Error::DivisionByZero),
            _ => {}
        }
        let (ka, kb) = if op.commutative() && b < a {
            (b, a)
        } else {
            (a, b)
        };
        let tag = op.tag();
        if let Some(r) = self.cache_get(tag, ka, kb) {
            return Ok(r);
        }
        let v = self.top_var(a, b);
        let (a1, a0) = self.cofactors(a, v);
        let (b1, b0) = self.cofactors(b, v);
        let t = self.binary_rec(a1, b1, op)?;
        let e = self.binary_rec(a0, b0, op)?;
        let r = self.ite_unchecked(v, t, e);
        self.cache_put(tag, ka, kb, r);
        Ok(r)
    }

    /// Pointwise `op(a)`; visits each node of `a` once.
    pub fn apply_unary(&mut self, a: NodeRef, op: UnaryOp) -> Result<NodeRef> {
        self.check(a)?;
        match op {
            UnaryOp::ScalarDiv(c) if c.re == 0.0 && c.im == 0.0 => {
                return Err(Error::DivisionByZero)
            }
            UnaryOp::ScalarMul(c) | UnaryOp::ScalarDiv(c)
                if !c.re.is_finite() || !c.im.is_finite() =>
            {
                return Err(Error::NonFinite { re: c.re, im: c.im })
            }
            UnaryOp::ScalarMul(c) | UnaryOp::ScalarDiv(c) if c == ComplexValue::new(1.0, 0.0) => {
                return Ok(a)
            }
            _ => {}
        }
        self.unary_rec(a, op)
    }

    fn unary_rec(&mut self, a: NodeRef, op: UnaryOp) -> Result<NodeRef> {
        let tag = op.tag();
        match self.node(a) {
            DdNode::Terminal(v) => self.terminal(op.eval(v)),
            DdNode::Internal { var, then, else_ } => {
                if let Some(r) = self.cache_get(tag, a, a) {
                    return Ok(r);
                }
                let t = self.unary_rec(then, op)?;
                let e = self.unary_rec(else_, op)?;
                let r = self.ite_unchecked(var, t, e);
                self.cache_put(tag, a, a, r);
                Ok(r)
            }
        }
    }

    pub fn add(&mut self, a: NodeRef, b: NodeRef) -> Result<NodeRef> {
        self.apply_binary(a, b, BinaryOp::Add)
    }

    pub fn scale(&mut self, a: NodeRef, c: ComplexValue) -> Result<NodeRef> {
        self.apply_unary(a, UnaryOp::ScalarMul(c))
    }

    /// Largest terminal modulus reachable from `a`.
    pub fn max_modulus(&self, a: NodeRef) -> f64 {
        self.reachable(a)
            .into_iter()
            .filter_map(|r| self.value(r))
            .map(|v| v.norm())
            .fold(0.0, f64::max)
    }

    /// `a == b`, or pointwise equal within `tol`.
    pub fn roots_close(&mut self, a: NodeRef, b: NodeRef, tol: f64) -> Result<bool> {
        if a == b {
            return Ok(true);
        }
        let d = self.apply_binary(a, b, BinaryOp::Sub)?;
        Ok(self.max_modulus(d) <= tol)
    }
}

#[cfg(test)]
#[allow(clippy::approx_constant)]
mod tests {
    use super::*;
    use crate::dd::VarId;

    fn c(re: f64, im: f64) -> ComplexValue {
        ComplexValue::new(re, im)
    }

    /// The 2-qubit state (s, -s, s, -s) with s = 0.707107: depends on R1 only.
    fn alternating(m: &mut DdManager) -> NodeRef {
        let p = m.real(0.707107).unwrap();
        let n = m.real(-0.707107).unwrap();
        m.ite(VarId::row(1), n, p).unwrap()
    }

    #[test]
    fn self_subtraction_is_zero() {
        let mut m = DdManager::new();
        let a = alternating(&mut m);
        assert_eq!(m.apply_binary(a, a, BinaryOp::Sub).unwrap(), m.zero());
    }

    #[test]
    fn multiply_by_one_is_identity() {
        let mut m = DdManager::new();
        let a = alternating(&mut m);
        let one = m.one();
        assert_eq!(m.apply_binary(a, one, BinaryOp::Mul).unwrap(), a);
        // The same through a non-short-circuited custom op.
        let mul = BinaryOp::Custom {
            tag: 7,
            f: |x, y| x * y,
        };
        assert_eq!(m.apply_binary(a, one, mul).unwrap(), a);
    }

    #[test]
    fn modulus_collapses_alternating_state() {
        let mut m = DdManager::new();
        let a = alternating(&mut m);
        let r = m.apply_unary(a, UnaryOp::Modulus).unwrap();
        assert!(m.is_terminal(r));
        assert!((m.value(r).unwrap() - c(0.707107, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn conjugate_is_an_involution() {
        let mut m = DdManager::new();
        let i = m.terminal(c(0.0, 0.6)).unwrap();
        let x = m.terminal(c(0.8, 0.0)).unwrap();
        let a = m.ite(VarId::row(0), i, x).unwrap();
        let b = m.apply_unary(a, UnaryOp::Conjugate).unwrap();
        assert_ne!(a, b);
        assert_eq!(m.apply_unary(b, UnaryOp::Conjugate).unwrap(), a);
    }

    #[test]
    fn scalar_multiplication_preserves_node_count() {
        let mut m = DdManager::new();
        let a = alternating(&mut m);
        let before = m.node_count(a);
        let b = m.scale(a, c(0.0, 1.0)).unwrap();
        assert_ne!(a, b);
        assert_eq!(m.node_count(b), before);
    }

    #[test]
    fn division_by_zero_is_an_error() {
        let mut m = DdManager::new();
        let a = alternating(&mut m);
        let z = m.zero();
        assert!(matches!(
            m.apply_binary(a, z, BinaryOp::Div),
            Err(Error::DivisionByZero)
        ));
        assert!(m.apply_unary(a, UnaryOp::ScalarDiv(c(0.0, 0.0))).is_err());
        // The guarded variant maps 0/0 to 1 and x/0 to 0.
        let zz = m.apply_binary(z, z, BinaryOp::GuardedDiv).unwrap();
        assert_eq!(zz, m.one());
        let xz = m.apply_binary(a, z, BinaryOp::GuardedDiv).unwrap();
        assert_eq!(xz, m.zero());
    }

    #[test]
    fn min_modulus_picks_smaller() {
        let mut m = DdManager::new();
        let a = m.real(0.5).unwrap();
        let b = m.terminal(c(0.0, -0.25)).unwrap();
        assert_eq!(m.apply_binary(a, b, BinaryOp::MinModulus).unwrap(), b);
    }

    #[test]
    fn ceil_modulus_maps_nonzero_to_one() {
        let mut m = DdManager::new();
        let a = alternating(&mut m);
        assert_eq!(m.apply_unary(a, UnaryOp::CeilModulus).unwrap(), m.one());
    }
}
