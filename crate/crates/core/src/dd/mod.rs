//! Reduced, ordered, hash-consed decision diagrams with complex terminals.
//!
//! A [`DdManager`] owns every node. Nodes are addressed by [`NodeRef`]
//! handles that stay valid for the manager's lifetime; there is no garbage
//! collection. Two handles are equal iff they denote the same function, so
//! exact equality of diagrams is a handle comparison.
//!
//! Variables are the row/column index bits of a vector or matrix, ordered
//! `R0 < C0 < R1 < C1 < ...`. Qubit 0 is the most significant index bit.

mod apply;
pub mod serialize;

use std::collections::BTreeSet;
use std::fmt;

use num_complex::Complex64;
use rustc_hash::{FxHashMap, FxHashSet};

use crate::error::{Error, Result};

pub use apply::{BinaryOp, UnaryOp};

pub type ComplexValue = Complex64;

/// Significand bits kept when quantizing terminal values into unique-table
/// keys. The grid is floating, with cells about `1.2e-10` relative wide, so
/// amplitudes far below `1e-10` stay distinct from each other and from zero.
pub const SIGNIFICAND_BITS: u32 = 33;

/// A component this much smaller than the other component of the same value
/// is rounding noise (for example `cos(pi/2)`) and quantizes to zero.
pub const COMPONENT_FLOOR: f64 = 1e-12;

/// Absolute tolerance for every equality decision on complex values.
pub const EPSILON: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VarKind {
    Row,
    Col,
}

/// A decision variable: one row or column index bit of one qubit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct VarId {
    pub kind: VarKind,
    pub qubit: u32,
}

impl VarId {
    pub const fn row(qubit: u32) -> Self {
        Self {
            kind: VarKind::Row,
            qubit,
        }
    }

    pub const fn col(qubit: u32) -> Self {
        Self {
            kind: VarKind::Col,
            qubit,
        }
    }

    /// Position in the interleaved order.
    pub const fn level(self) -> u32 {
        match self.kind {
            VarKind::Row => 2 * self.qubit,
            VarKind::Col => 2 * self.qubit + 1,
        }
    }

    pub const fn from_level(level: u32) -> Self {
        if level & 1 == 0 {
            Self::row(level / 2)
        } else {
            Self::col(level / 2)
        }
    }
}

impl PartialOrd for VarId {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for VarId {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.level().cmp(&other.level())
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            VarKind::Row => write!(f, "R{}", self.qubit),
            VarKind::Col => write!(f, "C{}", self.qubit),
        }
    }
}

/// Handle to a node owned by a [`DdManager`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeRef(u32);

impl NodeRef {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DdNode {
    Terminal(ComplexValue),
    Internal {
        var: VarId,
        then: NodeRef,
        else_: NodeRef,
    },
}

/// Level reported for terminals; greater than every variable level.
pub(crate) const TERMINAL_LEVEL: u32 = u32::MAX;

/// Compute-cache operation tags. Parameterized ops carry the bit patterns
/// of their parameters so that distinct parameters never share entries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub(crate) enum OpTag {
    Add,
    Sub,
    Mul,
    Div,
    GuardedDiv,
    MinModulus,
    CustomBinary(u32),
    Conj,
    Modulus,
    CeilModulus,
    ScalarMul(u64, u64),
    ScalarDiv(u64, u64),
    CustomUnary(u32),
    MatMul { n: u32 },
    MatVec { n: u32 },
    ConjTranspose,
    Transpose,
    ElemDiv,
    RpDiv(VarKind),
    Unify,
    ClearSentinel,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
struct CacheKey {
    op: OpTag,
    a: NodeRef,
    b: NodeRef,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DdStats {
    /// Internal plus terminal nodes reachable from the root.
    pub node_count: usize,
    pub support: BTreeSet<VarId>,
    pub terminal_values: Vec<ComplexValue>,
}

/// Counters describing the manager's tables.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ManagerCounters {
    pub nodes: usize,
    pub cache_entries: usize,
    pub cache_lookups: u64,
    pub cache_hits: u64,
}

pub struct DdManager {
    nodes: Vec<DdNode>,
    unique: FxHashMap<(u32, NodeRef, NodeRef), NodeRef>,
    terminals: FxHashMap<(i64, i64), NodeRef>,
    cache: FxHashMap<CacheKey, NodeRef>,
    counts: FxHashMap<NodeRef, usize>,
    zero: NodeRef,
    one: NodeRef,
    lookups: u64,
    hits: u64,
}

impl Default for DdManager {
    fn default() -> Self {
        Self::new()
    }
}

impl fmt::Debug for DdManager {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DdManager")
            .field("nodes", &self.nodes.len())
            .field("cache", &self.cache.len())
            .finish()
    }
}

fn component_key(x: f64, scale: f64) -> i64 {
    if scale < f64::MIN_POSITIVE || x.abs() <= COMPONENT_FLOOR * scale {
        return 0;
    }
    // Rounding the bit pattern of |x| rounds the significand; a carry moves
    // into the exponent, so cells stay ordered and disjoint.
    let shift = 52 - SIGNIFICAND_BITS;
    let cell = ((x.abs().to_bits() + (1 << (shift - 1))) >> shift) as i64;
    if x < 0.0 {
        -cell
    } else {
        cell
    }
}

type Map = fn(ComplexValue) -> ComplexValue;

/// Exact symmetries of the complex plane that map grid cells onto grid
/// cells, each with its inverse.
const SYMMETRIES: [(Map, Map); 7] = [
    (|v| -v, |v| -v),
    (|v| v.conj(), |v| v.conj()),
    (|v| -v.conj(), |v| -v.conj()),
    (
        |v| ComplexValue::new(-v.im, v.re),
        |v| ComplexValue::new(v.im, -v.re),
    ),
    (
        |v| ComplexValue::new(v.im, -v.re),
        |v| ComplexValue::new(-v.im, v.re),
    ),
    (
        |v| ComplexValue::new(v.im, v.re),
        |v| ComplexValue::new(v.im, v.re),
    ),
    (
        |v| ComplexValue::new(-v.im, -v.re),
        |v| ComplexValue::new(-v.im, -v.re),
    ),
];

/// Whether `v` quantizes to the zero terminal.
pub fn is_zero(v: ComplexValue) -> bool {
    v.re.abs().max(v.im.abs()) < f64::MIN_POSITIVE
}

fn terminal_key(v: ComplexValue) -> (i64, i64) {
    let scale = v.re.abs().max(v.im.abs());
    (component_key(v.re, scale), component_key(v.im, scale))
}

impl DdManager {
    pub fn new() -> Self {
        let mut mgr = Self {
            nodes: Vec::new(),
            unique: FxHashMap::default(),
            terminals: FxHashMap::default(),
            cache: FxHashMap::default(),
            counts: FxHashMap::default(),
            zero: NodeRef(0),
            one: NodeRef(0),
            lookups: 0,
            hits: 0,
        };
        // Seed the exact constants so they are the stored representatives.
        mgr.zero = mgr.terminal(ComplexValue::new(0.0, 0.0)).expect("finite");
        mgr.one = mgr.terminal(ComplexValue::new(1.0, 0.0)).expect("finite");
        mgr
    }

    pub fn zero(&self) -> NodeRef {
        self.zero
    }

    pub fn one(&self) -> NodeRef {
        self.one
    }

    /// Returns the unique terminal whose quantized key matches `v`.
    pub fn terminal(&mut self, v: ComplexValue) -> Result<NodeRef> {
        if !v.re.is_finite() || !v.im.is_finite() {
            return Err(Error::NonFinite { re: v.re, im: v.im });
        }
        let key = terminal_key(v);
        if let Some(&r) = self.terminals.get(&key) {
            return Ok(r);
        }
        // A new cell takes its representative from a cell related by an
        // exact symmetry, so quantization commutes with negation,
        // conjugation and multiplication by i. Mirrored computations then
        // stay exact mirrors.
        let mut value = v;
        for (g, inverse) in SYMMETRIES {
            if let Some(&r) = self.terminals.get(&terminal_key(g(v))) {
                if let DdNode::Terminal(rep) = self.nodes[r.index()] {
                    value = inverse(rep);
                    break;
                }
            }
        }
        let r = self.push(DdNode::Terminal(value));
        self.terminals.insert(key, r);
        Ok(r)
    }

    pub fn real(&mut self, re: f64) -> Result<NodeRef> {
        self.terminal(ComplexValue::new(re, 0.0))
    }

    fn push(&mut self, node: DdNode) -> NodeRef {
        let id = u32::try_from(self.nodes.len()).expect("node arena exceeds u32 handles");
        self.nodes.push(node);
        NodeRef(id)
    }

    /// Creates (or finds) the node `var ? then : else_`, applying the
    /// reduction rule. Fails if `var` does not precede both children.
    pub fn ite(&mut self, var: VarId, then: NodeRef, else_: NodeRef) -> Result<NodeRef> {
        self.check(then)?;
        self.check(else_)?;
        let level = var.level();
        if level >= self.level(then) || level >= self.level(else_) {
            return Err(Error::OrderViolation { var });
        }
        Ok(self.ite_unchecked(var, then, else_))
    }

    pub(crate) fn ite_unchecked(&mut self, var: VarId, then: NodeRef, else_: NodeRef) -> NodeRef {
        if then == else_ {
            return then;
        }
        debug_assert!(var.level() < self.level(then) && var.level() < self.level(else_));
        let key = (var.level(), then, else_);
        if let Some(&r) = self.unique.get(&key) {
            return r;
        }
        let r = self.push(DdNode::Internal { var, then, else_ });
        self.unique.insert(key, r);
        r
    }

    pub(crate) fn check(&self, r: NodeRef) -> Result<()> {
        if r.index() < self.nodes.len() {
            Ok(())
        } else {
            Err(Error::UnknownNode(r))
        }
    }

    pub fn node(&self, r: NodeRef) -> DdNode {
        self.nodes[r.index()]
    }

    pub fn is_terminal(&self, r: NodeRef) -> bool {
        matches!(self.nodes[r.index()], DdNode::Terminal(_))
    }

    /// Terminal value, or `None` for internal nodes.
    pub fn value(&self, r: NodeRef) -> Option<ComplexValue> {
        match self.nodes[r.index()] {
            DdNode::Terminal(v) => Some(v),
            DdNode::Internal { .. } => None,
        }
    }

    pub fn var(&self, r: NodeRef) -> Option<VarId> {
        match self.nodes[r.index()] {
            DdNode::Terminal(_) => None,
            DdNode::Internal { var, .. } => Some(var),
        }
    }

    pub(crate) fn level(&self, r: NodeRef) -> u32 {
        match self.nodes[r.index()] {
            DdNode::Terminal(_) => TERMINAL_LEVEL,
            DdNode::Internal { var, .. } => var.level(),
        }
    }

    /// Top qubit of a node, `n` for terminals.
    pub(crate) fn top_qubit(&self, r: NodeRef, n: u32) -> u32 {
        match self.nodes[r.index()] {
            DdNode::Terminal(_) => n,
            DdNode::Internal { var, .. } => var.qubit,
        }
    }

    /// `(then, else)` cofactors of `r` with respect to `var`.
    pub(crate) fn cofactors(&self, r: NodeRef, var: VarId) -> (NodeRef, NodeRef) {
        match self.nodes[r.index()] {
            DdNode::Internal {
                var: v,
                then,
                else_,
            } if v == var => (then, else_),
            _ => (r, r),
        }
    }

    pub(crate) fn top_var(&self, a: NodeRef, b: NodeRef) -> VarId {
        let level = self.level(a).min(self.level(b));
        debug_assert_ne!(level, TERMINAL_LEVEL);
        VarId::from_level(level)
    }

    pub(crate) fn cache_get(&mut self, op: OpTag, a: NodeRef, b: NodeRef) -> Option<NodeRef> {
        self.lookups += 1;
        let hit = self.cache.get(&CacheKey { op, a, b }).copied();
        if hit.is_some() {
            self.hits += 1;
        }
        hit
    }

    pub(crate) fn cache_put(&mut self, op: OpTag, a: NodeRef, b: NodeRef, r: NodeRef) {
        self.cache.insert(CacheKey { op, a, b }, r);
    }

    /// Drops every compute-cache entry. Never changes any later result.
    pub fn clear_cache(&mut self) {
        self.cache.clear();
    }

    pub fn counters(&self) -> ManagerCounters {
        ManagerCounters {
            nodes: self.nodes.len(),
            cache_entries: self.cache.len(),
            cache_lookups: self.lookups,
            cache_hits: self.hits,
        }
    }

    /// Number of internal plus terminal nodes reachable from `root`,
    /// memoized per root.
    pub fn node_count(&mut self, root: NodeRef) -> usize {
        if let Some(&c) = self.counts.get(&root) {
            return c;
        }
        let c = self.reachable(root).len();
        self.counts.insert(root, c);
        c
    }

    /// All nodes reachable from `root`, children before parents.
    pub fn reachable(&self, root: NodeRef) -> Vec<NodeRef> {
        let mut seen = FxHashSet::default();
        let mut order = Vec::new();
        let mut stack = vec![(root, false)];
        while let Some((r, expanded)) = stack.pop() {
            if expanded {
                order.push(r);
                continue;
            }
            if !seen.insert(r) {
                continue;
            }
            stack.push((r, true));
            if let DdNode::Internal { then, else_, .. } = self.nodes[r.index()] {
                stack.push((else_, false));
                stack.push((then, false));
            }
        }
        order
    }

    pub fn stats(&mut self, root: NodeRef) -> DdStats {
        let nodes = self.reachable(root);
        let mut support = BTreeSet::new();
        let mut terminal_values = Vec::new();
        for &r in &nodes {
            match self.nodes[r.index()] {
                DdNode::Terminal(v) => terminal_values.push(v),
                DdNode::Internal { var, .. } => {
                    support.insert(var);
                }
            }
        }
        self.counts.insert(root, nodes.len());
        DdStats {
            node_count: nodes.len(),
            support,
            terminal_values,
        }
    }

    /// Value of the function at a full assignment; `bit(var)` supplies the
    /// value of each variable tested along the path.
    pub fn evaluate(&self, root: NodeRef, mut bit: impl FnMut(VarId) -> bool) -> ComplexValue {
        let mut r = root;
        loop {
            match self.nodes[r.index()] {
                DdNode::Terminal(v) => return v,
                DdNode::Internal { var, then, else_ } => {
                    r = if bit(var) { then } else { else_ };
                }
            }
        }
    }
}
