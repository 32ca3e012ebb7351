//! Equivalence checks between two diagrams of the same kind and size.
//!
//! Every phase reported here is oriented so that `A = phase · B` for the
//! operands `(A, B)` in call order. For relative phases on operators,
//! [`Side::Left`] means `U = D · V` and [`Side::Right`] means `U = V · D`
//! with `D` diagonal.
//!
//! All methods expect both operands to live in the same manager.

mod global;
mod relative;

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::dd::{ComplexValue, DdManager};
use crate::error::{Error, Result};
use crate::linalg::{same_shape, QuIdd, QuIddKind};

pub use global::{global_inner_product, global_matrix_product, gprc};
pub use relative::{
    elementwise_div_states, mod_dd_compare, non_zero_terminal_merge, rel_mod_inner, rel_mod_matrix,
    rp_div_operators, SENTINEL,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Left,
    Right,
    State,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Outcome {
    ExactEqual,
    GlobalPhase(ComplexValue),
    /// `phases` is `None` for methods that decide equivalence without
    /// computing the factors. `both_sides` is set when an operator pair is
    /// related by a diagonal on either side.
    RelativePhase {
        phases: Option<QuIdd>,
        side: Side,
        both_sides: bool,
    },
    NotEquivalent,
    FilterPassed,
    FilterFailed,
}

impl Outcome {
    /// Whether the check succeeded (a filter passing counts).
    pub fn is_positive(&self) -> bool {
        !matches!(self, Outcome::NotEquivalent | Outcome::FilterFailed)
    }

    pub fn label(&self) -> &'static str {
        match self {
            Outcome::ExactEqual => "exact_equal",
            Outcome::GlobalPhase(_) => "global_phase",
            Outcome::RelativePhase { .. } => "relative_phase",
            Outcome::NotEquivalent => "not_equivalent",
            Outcome::FilterPassed => "filter_passed",
            Outcome::FilterFailed => "filter_failed",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Level {
    Exact,
    Global,
    Relative,
}

impl FromStr for Level {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Level::Exact),
            "global" => Ok(Level::Global),
            "relative" => Ok(Level::Relative),
            _ => Err(Error::InvalidArgument(format!("unknown level `{s}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Exact,
    NodeCount,
    InnerProduct,
    MatrixProduct,
    Gprc,
    ModInner,
    ModMatrix,
    ElemDiv,
    RpDiv,
    NonzeroMerge,
    ModCompare,
}

impl Method {
    pub const ALL: [Method; 11] = [
        Method::Exact,
        Method::NodeCount,
        Method::InnerProduct,
        Method::MatrixProduct,
        Method::Gprc,
        Method::ModInner,
        Method::ModMatrix,
        Method::ElemDiv,
        Method::RpDiv,
        Method::NonzeroMerge,
        Method::ModCompare,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::NodeCount => "nodecount",
            Method::InnerProduct => "inner",
            Method::MatrixProduct => "matrix",
            Method::Gprc => "gprc",
            Method::ModInner => "modinner",
            Method::ModMatrix => "modmatrix",
            Method::ElemDiv => "elemdiv",
            Method::RpDiv => "rpdiv",
            Method::NonzeroMerge => "merge",
            Method::ModCompare => "moddd",
        }
    }

    /// Kinds of operands the method accepts.
    pub fn accepts(self, kind: QuIddKind) -> bool {
        match self {
            Method::InnerProduct | Method::ModInner | Method::ElemDiv => kind == QuIddKind::State,
            Method::MatrixProduct | Method::ModMatrix | Method::RpDiv => {
                kind == QuIddKind::Operator
            }
            _ => kind != QuIddKind::Bra,
        }
    }

    /// The level whose question the method answers.
    pub fn level(self) -> Level {
        match self {
            Method::Exact => Level::Exact,
            Method::NodeCount | Method::InnerProduct | Method::MatrixProduct | Method::Gprc => {
                Level::Global
            }
            _ => Level::Relative,
        }
    }
}

impl Serialize for Method {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown method `{s}`")))
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct CheckStats {
    pub nodes_a: usize,
    pub nodes_b: usize,
    pub elapsed: Duration,
    /// Operand node pairs visited, for methods that walk both diagrams.
    pub visited: Option<usize>,
    /// Methods run, in order. Filled by [`auto_check`].
    pub stages: Vec<Method>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EquivVerdict {
    pub outcome: Outcome,
    pub method: Method,
    pub stats: CheckStats,
}

impl EquivVerdict {
    pub fn is_positive(&self) -> bool {
        self.outcome.is_positive()
    }
}

pub(crate) fn finish(
    mgr: &mut DdManager,
    a: &QuIdd,
    b: &QuIdd,
    method: Method,
    start: Instant,
    outcome: Outcome,
) -> EquivVerdict {
    let elapsed = start.elapsed();
    EquivVerdict {
        outcome,
        method,
        stats: CheckStats {
            nodes_a: mgr.node_count(a.root),
            nodes_b: mgr.node_count(b.root),
            elapsed,
            visited: None,
            stages: vec![method],
        },
    }
}

pub(crate) fn filter(passed: bool) -> Outcome {
    if passed {
        Outcome::FilterPassed
    } else {
        Outcome::FilterFailed
    }
}

pub(crate) fn checked_pair(mgr: &DdManager, a: &QuIdd, b: &QuIdd) -> Result<()> {
    mgr.check(a.root)?;
    mgr.check(b.root)?;
    same_shape(a, b)?;
    if a.kind == QuIddKind::Bra {
        return Err(Error::WrongKind {
            expected: "state or operator",
            found: "bra",
        });
    }
    Ok(())
}

/// Handle comparison; canonicity makes this decisive.
pub fn exact_equal(mgr: &mut DdManager, a: &QuIdd, b: &QuIdd) -> Result<EquivVerdict> {
    let start = Instant::now();
    checked_pair(mgr, a, b)?;
    let outcome = if a.root == b.root {
        Outcome::ExactEqual
    } else {
        Outcome::NotEquivalent
    };
    Ok(finish(mgr, a, b, Method::Exact, start, outcome))
}

/// Equal node counts are necessary for a global-phase relation.
pub fn node_count_filter(mgr: &mut DdManager, a: &QuIdd, b: &QuIdd) -> Result<EquivVerdict> {
    let start = Instant::now();
    checked_pair(mgr, a, b)?;
    let same = mgr.node_count(a.root) == mgr.node_count(b.root);
    Ok(finish(mgr, a, b, Method::NodeCount, start, filter(same)))
}

/// Runs a single named method.
pub fn run_method(
    mgr: &mut DdManager,
    method: Method,
    a: &QuIdd,
    b: &QuIdd,
) -> Result<EquivVerdict> {
    match method {
        Method::Exact => exact_equal(mgr, a, b),
        Method::NodeCount => node_count_filter(mgr, a, b),
        Method::InnerProduct => global_inner_product(mgr, a, b),
        Method::MatrixProduct => global_matrix_product(mgr, a, b),
        Method::Gprc => gprc(mgr, a, b),
        Method::ModInner => rel_mod_inner(mgr, a, b),
        Method::ModMatrix => rel_mod_matrix(mgr, a, b),
        Method::ElemDiv => elementwise_div_states(mgr, a, b),
        Method::RpDiv => rp_div_operators(mgr, a, b),
        Method::NonzeroMerge => non_zero_terminal_merge(mgr, a, b),
        Method::ModCompare => mod_dd_compare(mgr, a, b),
    }
}

/// Exact comparison, then a cheap filter, then the decisive method for
/// `level`. Filters can only short-circuit to `NotEquivalent`.
pub fn auto_check(mgr: &mut DdManager, a: &QuIdd, b: &QuIdd, level: Level) -> Result<EquivVerdict> {
    let start = Instant::now();
    checked_pair(mgr, a, b)?;
    let (filter_method, decisive) = match (level, a.kind) {
        (Level::Exact, _) => return exact_equal(mgr, a, b),
        (Level::Global, _) => (Method::NodeCount, Method::Gprc),
        (Level::Relative, QuIddKind::State) => (Method::NonzeroMerge, Method::ElemDiv),
        (Level::Relative, _) => (Method::NonzeroMerge, Method::RpDiv),
    };
    let mut stages = vec![Method::Exact];
    let mut v = if a.root == b.root {
        finish(mgr, a, b, Method::Exact, start, Outcome::ExactEqual)
    } else {
        stages.push(filter_method);
        let f = run_method(mgr, filter_method, a, b)?;
        if f.is_positive() {
            stages.push(decisive);
            run_method(mgr, decisive, a, b)?
        } else {
            EquivVerdict {
                outcome: Outcome::NotEquivalent,
                ..f
            }
        }
    };
    v.stats.stages = stages;
    v.stats.elapsed = start.elapsed();
    Ok(v)
}
