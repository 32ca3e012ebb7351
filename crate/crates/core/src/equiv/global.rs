use std::time::Instant;

use rustc_hash::FxHashMap;

use super::{checked_pair, finish, EquivVerdict, Method, Outcome};
use crate::dd::{is_zero, ComplexValue, DdManager, DdNode, NodeRef, UnaryOp, EPSILON};
use crate::error::Result;
use crate::linalg::{conj_transpose, expect_kind, inner_product, matmul, QuIdd, QuIddKind};

/// If `a = p · b` for some unit `p`, returns `p = <b|a> / <b|b>`.
///
/// Uses the equality case of Cauchy-Schwarz, `|<b|a>| = <a|a> = <b|b>`,
/// which reduces to `|<b|a>| = 1` for normalized states.
pub(crate) fn parallel_phase(
    mgr: &mut DdManager,
    a: &QuIdd,
    b: &QuIdd,
) -> Result<Option<ComplexValue>> {
    let ab = inner_product(mgr, b, a)?;
    let aa = inner_product(mgr, a, a)?.re;
    let bb = inner_product(mgr, b, b)?.re;
    let tol = EPSILON * bb.max(1.0);
    if bb <= EPSILON || (ab.norm() - bb).abs() > tol || (aa - bb).abs() > tol {
        return Ok(None);
    }
    Ok(Some(ab / bb))
}

/// Global phase from the inner product.
pub fn global_inner_product(mgr: &mut DdManager, a: &QuIdd, b: &QuIdd) -> Result<EquivVerdict> {
    let start = Instant::now();
    checked_pair(mgr, a, b)?;
    expect_kind(a, QuIddKind::State)?;
    let outcome = match parallel_phase(mgr, a, b)? {
        Some(p) => Outcome::GlobalPhase(p),
        None => Outcome::NotEquivalent,
    };
    Ok(finish(mgr, a, b, Method::InnerProduct, start, outcome))
}

/// Global phase of unitaries from `U V† = t I`.
pub fn global_matrix_product(mgr: &mut DdManager, u: &QuIdd, v: &QuIdd) -> Result<EquivVerdict> {
    let start = Instant::now();
    checked_pair(mgr, u, v)?;
    expect_kind(u, QuIddKind::Operator)?;
    let vd = conj_transpose(mgr, v)?;
    let w = matmul(mgr, u, &vd)?;
    // On success every diagonal entry is t; take entry (0, 0).
    let t = mgr.evaluate(w.root, |_| false);
    let mut outcome = Outcome::NotEquivalent;
    if (t.norm() - 1.0).abs() <= EPSILON {
        let id = QuIdd::identity(mgr, u.n_qubits)?;
        let scaled = mgr.apply_unary(w.root, UnaryOp::ScalarDiv(t))?;
        if mgr.roots_close(scaled, id.root, EPSILON)? {
            outcome = Outcome::GlobalPhase(t);
        }
    }
    Ok(finish(mgr, u, v, Method::MatrixProduct, start, outcome))
}

struct Gprc<'m> {
    mgr: &'m DdManager,
    gp: Option<ComplexValue>,
    a_to_b: FxHashMap<NodeRef, NodeRef>,
    b_to_a: FxHashMap<NodeRef, NodeRef>,
    visited: usize,
}

impl Gprc<'_> {
    fn rec(&mut self, a: NodeRef, b: NodeRef) -> bool {
        // A global-phase multiple is isomorphic to its base, so each node
        // pairs with exactly one partner. A pair seen before has already
        // succeeded; a node seen with another partner cannot.
        if let Some(&p) = self.a_to_b.get(&a) {
            return p == b;
        }
        if self.b_to_a.contains_key(&b) {
            return false;
        }
        self.a_to_b.insert(a, b);
        self.b_to_a.insert(b, a);
        self.visited += 1;
        match (self.mgr.node(a), self.mgr.node(b)) {
            (DdNode::Terminal(va), DdNode::Terminal(vb)) => {
                if is_zero(vb) {
                    return is_zero(va);
                }
                let ngp = va / vb;
                if (ngp.norm() - 1.0).abs() > EPSILON {
                    return false;
                }
                match self.gp {
                    None => {
                        self.gp = Some(ngp);
                        true
                    }
                    Some(gp) => (ngp - gp).norm() <= EPSILON,
                }
            }
            (
                DdNode::Internal {
                    var: va,
                    then: ta,
                    else_: ea,
                },
                DdNode::Internal {
                    var: vb,
                    then: tb,
                    else_: eb,
                },
            ) => va == vb && self.rec(ta, tb) && self.rec(ea, eb),
            _ => false,
        }
    }
}

/// Recursive global-phase check: a simultaneous walk that stops at the
/// first structural or phase mismatch. Visits at most `min(|A|, |B|)` node
/// pairs.
pub fn gprc(mgr: &mut DdManager, a: &QuIdd, b: &QuIdd) -> Result<EquivVerdict> {
    let start = Instant::now();
    checked_pair(mgr, a, b)?;
    let mut walk = Gprc {
        mgr,
        gp: None,
        a_to_b: FxHashMap::default(),
        b_to_a: FxHashMap::default(),
        visited: 0,
    };
    let ok = walk.rec(a.root, b.root);
    let (gp, visited) = (walk.gp, walk.visited);
    let outcome = match (ok, gp) {
        (true, Some(p)) => Outcome::GlobalPhase(p),
        // Both all-zero; unreachable for valid states and operators.
        (true, None) => Outcome::GlobalPhase(ComplexValue::new(1.0, 0.0)),
        (false, _) => Outcome::NotEquivalent,
    };
    let mut v = finish(mgr, a, b, Method::Gprc, start, outcome);
    v.stats.visited = Some(visited);
    Ok(v)
}
