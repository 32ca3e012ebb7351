//! Line-oriented text format for diagrams.
//!
//! ```text
//! quidd v1 kind=<state|operator> qubits=<n> root=<id>
//! T <id> <re> <im>
//! N <id> <R|C><qubit> <then-id> <else-id>
//! ```
//!
//! Nodes are listed terminals first, then internal nodes with children
//! before parents. Values carry 17 significant digits, so a round trip
//! through a fresh manager reproduces every value bit for bit.

use std::fmt::Write as _;

use rustc_hash::FxHashMap;

use super::{ComplexValue, DdManager, DdNode, NodeRef, VarId, VarKind};
use crate::error::{Error, Result};
use crate::linalg::{QuIdd, QuIddKind};

pub const HEADER_MAGIC: &str = "quidd v1";

pub fn serialize(mgr: &DdManager, q: &QuIdd) -> Result<String> {
    let kind = match q.kind {
        QuIddKind::State => "state",
        QuIddKind::Operator => "operator",
        QuIddKind::Bra => {
            return Err(Error::WrongKind {
                expected: "state or operator",
                found: "bra",
            })
        }
    };
    let nodes = mgr.reachable(q.root);
    let (terminals, internals): (Vec<_>, Vec<_>) =
        nodes.into_iter().partition(|&r| mgr.is_terminal(r));
    let mut ids: FxHashMap<NodeRef, usize> = FxHashMap::default();
    for (i, &r) in terminals.iter().chain(internals.iter()).enumerate() {
        ids.insert(r, i);
    }
    let mut out = String::new();
    writeln!(
        out,
        "{HEADER_MAGIC} kind={kind} qubits={} root={}",
        q.n_qubits, ids[&q.root]
    )
    .unwrap();
    for &r in terminals.iter().chain(internals.iter()) {
        match mgr.node(r) {
            DdNode::Terminal(v) => {
                writeln!(out, "T {} {:.16e} {:.16e}", ids[&r], v.re, v.im).unwrap();
            }
            DdNode::Internal { var, then, else_ } => {
                writeln!(out, "N {} {} {} {}", ids[&r], var, ids[&then], ids[&else_]).unwrap();
            }
        }
    }
    Ok(out)
}

fn format_err(line: usize, message: impl Into<String>) -> Error {
    Error::Format {
        line,
        message: message.into(),
    }
}

fn parse_var(tok: &str, line: usize) -> Result<VarId> {
    let (kind, rest) = match tok.split_at_checked(1) {
        Some(("R", rest)) => (VarKind::Row, rest),
        Some(("C", rest)) => (VarKind::Col, rest),
        _ => return Err(format_err(line, format!("bad variable `{tok}`"))),
    };
    let qubit = rest
        .parse::<u32>()
        .map_err(|_| format_err(line, format!("bad variable `{tok}`")))?;
    Ok(VarId { kind, qubit })
}

fn parse_field<'a>(tok: Option<&'a str>, key: &str, line: usize) -> Result<&'a str> {
    tok.and_then(|t| t.strip_prefix(key))
        .and_then(|t| t.strip_prefix('='))
        .ok_or_else(|| format_err(line, format!("expected `{key}=...` in header")))
}

/// Rebuilds a diagram in `mgr` from its text form.
pub fn deserialize(mgr: &mut DdManager, text: &str) -> Result<QuIdd> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (hline, header) = lines
        .find(|(_, l)| !l.trim().is_empty())
        .ok_or_else(|| format_err(1, "empty input"))?;
    let rest = header
        .trim()
        .strip_prefix(HEADER_MAGIC)
        .ok_or_else(|| format_err(hline, format!("header must start with `{HEADER_MAGIC}`")))?;
    let mut toks = rest.split_whitespace();
    let kind = match parse_field(toks.next(), "kind", hline)? {
        "state" => QuIddKind::State,
        "operator" => QuIddKind::Operator,
        other => return Err(format_err(hline, format!("unknown kind `{other}`"))),
    };
    let n: u32 = parse_field(toks.next(), "qubits", hline)?
        .parse()
        .map_err(|_| format_err(hline, "bad qubit count"))?;
    let root_id: usize = parse_field(toks.next(), "root", hline)?
        .parse()
        .map_err(|_| format_err(hline, "bad root id"))?;
    if toks.next().is_some() {
        return Err(format_err(hline, "trailing header fields"));
    }

    let mut built: FxHashMap<usize, NodeRef> = FxHashMap::default();
    for (ln, line) in lines {
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.is_empty() {
            continue;
        }
        let id = |s: &str| -> Result<usize> {
            s.parse::<usize>()
                .map_err(|_| format_err(ln, format!("bad node id `{s}`")))
        };
        let lookup = |built: &FxHashMap<usize, NodeRef>, s: &str| -> Result<NodeRef> {
            let i = id(s)?;
            built
                .get(&i)
                .copied()
                .ok_or_else(|| format_err(ln, format!("node {i} used before definition")))
        };
        let node = match toks.as_slice() {
            ["T", nid, re, im] => {
                let re: f64 = re.parse().map_err(|_| format_err(ln, "bad real part"))?;
                let im: f64 = im
                    .parse()
                    .map_err(|_| format_err(ln, "bad imaginary part"))?;
                let r = mgr
                    .terminal(ComplexValue::new(re, im))
                    .map_err(|e| format_err(ln, e.to_string()))?;
                (id(nid)?, r)
            }
            ["N", nid, var, then, else_] => {
                let var = parse_var(var, ln)?;
                if var.qubit >= n {
                    return Err(format_err(ln, format!("variable {var} outside {n} qubits")));
                }
                if kind == QuIddKind::State && var.kind == VarKind::Col {
                    return Err(format_err(ln, "column variable in a state"));
                }
                let t = lookup(&built, then)?;
                let e = lookup(&built, else_)?;
                let r = mgr
                    .ite(var, t, e)
                    .map_err(|e| format_err(ln, e.to_string()))?;
                (id(nid)?, r)
            }
            _ => {
                return Err(format_err(
                    ln,
                    format!("unrecognized line `{}`", line.trim()),
                ))
            }
        };
        if built.insert(node.0, node.1).is_some() {
            return Err(format_err(ln, format!("duplicate node id {}", node.0)));
        }
    }
    let root = built
        .get(&root_id)
        .copied()
        .ok_or_else(|| format_err(hline, format!("root {root_id} is not defined")))?;
    Ok(QuIdd {
        root,
        n_qubits: n,
        kind,
    })
}
