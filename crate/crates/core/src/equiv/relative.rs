use std::time::Instant;

use super::global::parallel_phase;
use super::{checked_pair, filter, finish, EquivVerdict, Method, Outcome, Side};
use crate::dd::{is_zero, DdManager, DdNode, NodeRef, OpTag, VarKind, EPSILON};
use crate::error::Result;
use crate::linalg::{expect_kind, matmul, modulus_map, transpose, ModulusMode, QuIdd, QuIddKind};

/// Marks entries that are zero in both operators of an element-wise
/// division. Never a unit-modulus quotient.
pub const SENTINEL: f64 = 2.0;

/// Inner product of the moduli. Decides equivalence without producing the
/// phases.
pub fn rel_mod_inner(mgr: &mut DdManager, a: &QuIdd, b: &QuIdd) -> Result<EquivVerdict> {
    let start = Instant::now();
    checked_pair(mgr, a, b)?;
    expect_kind(a, QuIddKind::State)?;
    let ma = modulus_map(mgr, a, ModulusMode::Modulus)?;
    let mb = modulus_map(mgr, b, ModulusMode::Modulus)?;
    let outcome = match parallel_phase(mgr, &ma, &mb)? {
        Some(_) => Outcome::RelativePhase {
            phases: None,
            side: Side::State,
            both_sides: false,
        },
        None => Outcome::NotEquivalent,
    };
    Ok(finish(mgr, a, b, Method::ModInner, start, outcome))
}

/// Compares `|U| |V|^T` with `|V| |V|^T`. Necessary, not sufficient.
pub fn rel_mod_matrix(mgr: &mut DdManager, u: &QuIdd, v: &QuIdd) -> Result<EquivVerdict> {
    let start = Instant::now();
    checked_pair(mgr, u, v)?;
    expect_kind(u, QuIddKind::Operator)?;
    let mu = modulus_map(mgr, u, ModulusMode::Modulus)?;
    let mv = modulus_map(mgr, v, ModulusMode::Modulus)?;
    let mvt = transpose(mgr, &mv)?;
    let lhs = matmul(mgr, &mu, &mvt)?;
    let rhs = matmul(mgr, &mv, &mvt)?;
    let same = mgr.roots_close(lhs.root, rhs.root, EPSILON)?;
    Ok(finish(mgr, u, v, Method::ModMatrix, start, filter(same)))
}

/// `A / B` entrywise with `0/0 = 1`. The zero terminal marks failure and
/// propagates to the root as soon as one quotient is not a unit.
fn elem_div_rec(mgr: &mut DdManager, a: NodeRef, b: NodeRef) -> Result<NodeRef> {
    let zero = mgr.zero();
    if a == b {
        return Ok(mgr.one());
    }
    if let (DdNode::Terminal(va), DdNode::Terminal(vb)) = (mgr.node(a), mgr.node(b)) {
        return match (is_zero(va), is_zero(vb)) {
            (true, true) => Ok(mgr.one()),
            (false, false) => {
                let q = va / vb;
                if (q.norm() - 1.0).abs() > EPSILON {
                    Ok(zero)
                } else {
                    mgr.terminal(q)
                }
            }
            _ => Ok(zero),
        };
    }
    if let Some(r) = mgr.cache_get(OpTag::ElemDiv, a, b) {
        return Ok(r);
    }
    let v = mgr.top_var(a, b);
    let (a1, a0) = mgr.cofactors(a, v);
    let (b1, b0) = mgr.cofactors(b, v);
    let t = elem_div_rec(mgr, a1, b1)?;
    let r = if t == zero {
        zero
    } else {
        let e = elem_div_rec(mgr, a0, b0)?;
        if e == zero {
            zero
        } else {
            mgr.ite_unchecked(v, t, e)
        }
    };
    mgr.cache_put(OpTag::ElemDiv, a, b, r);
    Ok(r)
}

/// Element-wise division of states. On success the phases `P` satisfy
/// `A = P × B` pointwise, with `P = 1` where both are zero.
pub fn elementwise_div_states(mgr: &mut DdManager, a: &QuIdd, b: &QuIdd) -> Result<EquivVerdict> {
    let start = Instant::now();
    checked_pair(mgr, a, b)?;
    expect_kind(a, QuIddKind::State)?;
    let c = elem_div_rec(mgr, a.root, b.root)?;
    let outcome = if c == mgr.zero() {
        Outcome::NotEquivalent
    } else {
        Outcome::RelativePhase {
            phases: Some(QuIdd::state(c, a.n_qubits)),
            side: Side::State,
            both_sides: false,
        }
    };
    Ok(finish(mgr, a, b, Method::ElemDiv, start, outcome))
}

/// Pointwise merge of two partial phase functions. The sentinel is a
/// don't-care; two defined values must agree. Zero marks a conflict.
fn unify(mgr: &mut DdManager, x: NodeRef, y: NodeRef, sentinel: NodeRef) -> Result<NodeRef> {
    let zero = mgr.zero();
    if x == y || y == sentinel {
        return Ok(x);
    }
    if x == sentinel {
        return Ok(y);
    }
    if x == zero || y == zero {
        return Ok(zero);
    }
    if let (DdNode::Terminal(vx), DdNode::Terminal(vy)) = (mgr.node(x), mgr.node(y)) {
        return Ok(if (vx - vy).norm() <= EPSILON { x } else { zero });
    }
    let (kx, ky) = if y < x { (y, x) } else { (x, y) };
    if let Some(r) = mgr.cache_get(OpTag::Unify, kx, ky) {
        return Ok(r);
    }
    let v = mgr.top_var(x, y);
    let (x1, x0) = mgr.cofactors(x, v);
    let (y1, y0) = mgr.cofactors(y, v);
    let t = unify(mgr, x1, y1, sentinel)?;
    let r = if t == zero {
        zero
    } else {
        let e = unify(mgr, x0, y0, sentinel)?;
        if e == zero {
            zero
        } else {
            mgr.ite_unchecked(v, t, e)
        }
    };
    mgr.cache_put(OpTag::Unify, kx, ky, r);
    Ok(r)
}

/// Element-wise division that eliminates every variable of kind `s` by
/// unifying its two cofactors.
fn rp_div_rec(
    mgr: &mut DdManager,
    a: NodeRef,
    b: NodeRef,
    s: VarKind,
    sentinel: NodeRef,
) -> Result<NodeRef> {
    let zero = mgr.zero();
    if a == zero {
        return Ok(if b == zero { sentinel } else { zero });
    }
    if let (DdNode::Terminal(va), DdNode::Terminal(vb)) = (mgr.node(a), mgr.node(b)) {
        return match (is_zero(va), is_zero(vb)) {
            (true, true) => Ok(sentinel),
            (false, false) => {
                let q = va / vb;
                if (q.norm() - 1.0).abs() > EPSILON {
                    Ok(zero)
                } else {
                    mgr.terminal(q)
                }
            }
            _ => Ok(zero),
        };
    }
    let tag = OpTag::RpDiv(s);
    if let Some(r) = mgr.cache_get(tag, a, b) {
        return Ok(r);
    }
    let v = mgr.top_var(a, b);
    let (a1, a0) = mgr.cofactors(a, v);
    let (b1, b0) = mgr.cofactors(b, v);
    let t = rp_div_rec(mgr, a1, b1, s, sentinel)?;
    let r = if t == zero {
        zero
    } else {
        let e = rp_div_rec(mgr, a0, b0, s, sentinel)?;
        if e == zero {
            zero
        } else if v.kind == s {
            unify(mgr, t, e, sentinel)?
        } else {
            mgr.ite_unchecked(v, t, e)
        }
    };
    mgr.cache_put(tag, a, b, r);
    Ok(r)
}

/// Replaces leftover sentinels (rows or columns that are zero in both
/// operators) with 1.
fn clear_sentinel(mgr: &mut DdManager, r: NodeRef, sentinel: NodeRef) -> NodeRef {
    if r == sentinel {
        return mgr.one();
    }
    let DdNode::Internal { var, then, else_ } = mgr.node(r) else {
        return r;
    };
    if let Some(hit) = mgr.cache_get(OpTag::ClearSentinel, r, sentinel) {
        return hit;
    }
    let t = clear_sentinel(mgr, then, sentinel);
    let e = clear_sentinel(mgr, else_, sentinel);
    let out = mgr.ite_unchecked(var, t, e);
    mgr.cache_put(OpTag::ClearSentinel, r, sentinel, out);
    out
}

fn rp_div_pass(mgr: &mut DdManager, u: &QuIdd, v: &QuIdd, s: VarKind) -> Result<Option<NodeRef>> {
    let sentinel = mgr.real(SENTINEL)?;
    let w = rp_div_rec(mgr, u.root, v.root, s, sentinel)?;
    if w == mgr.zero() {
        return Ok(None);
    }
    let w = clear_sentinel(mgr, w, sentinel);
    debug_assert!(mgr.stats(w).support.iter().all(|var| var.kind != s));
    Ok(Some(w))
}

/// Relative-phase check for operators. Eliminating the row variables
/// leaves phases indexed by column (`U = V · D`); eliminating the column
/// variables leaves phases indexed by row (`U = D · V`). Both passes run;
/// a left-side relation is preferred when both hold.
pub fn rp_div_operators(mgr: &mut DdManager, u: &QuIdd, v: &QuIdd) -> Result<EquivVerdict> {
    let start = Instant::now();
    checked_pair(mgr, u, v)?;
    expect_kind(u, QuIddKind::Operator)?;
    let right = rp_div_pass(mgr, u, v, VarKind::Row)?;
    let left = rp_div_pass(mgr, u, v, VarKind::Col)?;
    let n = u.n_qubits;
    let outcome = match (left, right) {
        (Some(w), r) => Outcome::RelativePhase {
            phases: Some(QuIdd::operator(w, n)),
            side: Side::Left,
            both_sides: r.is_some(),
        },
        (None, Some(w)) => Outcome::RelativePhase {
            phases: Some(QuIdd::operator(w, n)),
            side: Side::Right,
            both_sides: false,
        },
        (None, None) => Outcome::NotEquivalent,
    };
    Ok(finish(mgr, u, v, Method::RpDiv, start, outcome))
}

/// Zero patterns must match. Necessary, not sufficient.
pub fn non_zero_terminal_merge(mgr: &mut DdManager, a: &QuIdd, b: &QuIdd) -> Result<EquivVerdict> {
    let start = Instant::now();
    checked_pair(mgr, a, b)?;
    let ca = modulus_map(mgr, a, ModulusMode::CeilModulus)?;
    let cb = modulus_map(mgr, b, ModulusMode::CeilModulus)?;
    let same = ca.root == cb.root;
    Ok(finish(mgr, a, b, Method::NonzeroMerge, start, filter(same)))
}

/// Compares the entrywise moduli. Decisive for states; for operators equal
/// moduli do not force the phases into a one-sided diagonal, so the result
/// is a filter.
pub fn mod_dd_compare(mgr: &mut DdManager, a: &QuIdd, b: &QuIdd) -> Result<EquivVerdict> {
    let start = Instant::now();
    checked_pair(mgr, a, b)?;
    let ma = modulus_map(mgr, a, ModulusMode::Modulus)?;
    let mb = modulus_map(mgr, b, ModulusMode::Modulus)?;
    let same = mgr.roots_close(ma.root, mb.root, EPSILON)?;
    let outcome = match (a.kind, same) {
        (QuIddKind::State, true) => Outcome::RelativePhase {
            phases: None,
            side: Side::State,
            both_sides: false,
        },
        (QuIddKind::State, false) => Outcome::NotEquivalent,
        (_, s) => filter(s),
    };
    Ok(finish(mgr, a, b, Method::ModCompare, start, outcome))
}
