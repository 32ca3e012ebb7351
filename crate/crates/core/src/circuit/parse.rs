use std::fmt;

use super::{Circuit, Gate};

/// A circuit-text error with a 1-based source location.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "line {}, column {}: {}",
            self.line, self.column, self.message
        )
    }
}

impl std::error::Error for ParseError {}

struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn tokenize(line: &str) -> Vec<Token<'_>> {
    let code = line.split('#').next().unwrap_or("");
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in code.char_indices() {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push(Token {
                    text: &code[s..i],
                    column: code[..s].chars().count() + 1,
                });
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push(Token {
            text: &code[s..],
            column: code[..s].chars().count() + 1,
        });
    }
    out
}

struct LineParser<'a> {
    line: usize,
    toks: Vec<Token<'a>>,
    end_column: usize,
}

impl<'a> LineParser<'a> {
    fn err(&self, column: usize, message: impl Into<String>) -> ParseError {
        ParseError {
            line: self.line,
            column,
            message: message.into(),
        }
    }

    fn arg(&self, i: usize, what: &str) -> Result<&Token<'a>, ParseError> {
        self.toks
            .get(i)
            .ok_or_else(|| self.err(self.end_column, format!("missing {what}")))
    }

    fn qubit(&self, i: usize, n: u32) -> Result<u32, ParseError> {
        let t = self.arg(i, "qubit index")?;
        let q: u32 = t
            .text
            .parse()
            .map_err(|_| self.err(t.column, format!("bad qubit index `{}`", t.text)))?;
        if q >= n {
            return Err(self.err(t.column, format!("qubit {q} out of range")));
        }
        Ok(q)
    }

    fn angle(&self, i: usize) -> Result<f64, ParseError> {
        let t = self.arg(i, "angle")?;
        match t.text.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(v),
            _ => Err(self.err(t.column, format!("bad angle `{}`", t.text))),
        }
    }

    fn arity(&self, expected: usize) -> Result<(), ParseError> {
        if let Some(t) = self.toks.get(expected) {
            return Err(self.err(t.column, format!("unexpected argument `{}`", t.text)));
        }
        Ok(())
    }
}

/// Parses the circuit text format:
///
/// ```text
/// qubits <n>
/// init <bitstring>          # optional
/// h 0                       # x|y|z|h <q>
/// ry 2 0.7853981633974483   # ry|rz|phase <q> <theta>
/// cx 0 1
/// ccx 0 1 2
/// cps 0 1 2 3
/// ```
pub fn parse_circuit(text: &str) -> Result<Circuit, ParseError> {
    let mut circuit: Option<Circuit> = None;
    for (idx, raw) in text.lines().enumerate() {
        let toks = tokenize(raw);
        if toks.is_empty() {
            continue;
        }
        let p = LineParser {
            line: idx + 1,
            end_column: raw
                .split('#')
                .next()
                .unwrap_or("")
                .trim_end()
                .chars()
                .count()
                + 1,
            toks,
        };
        let head = &p.toks[0];
        let keyword = head.text.to_ascii_lowercase();
        let Some(c) = circuit.as_mut() else {
            if keyword != "qubits" {
                return Err(p.err(head.column, "expected `qubits <n>` first"));
            }
            let t = p.arg(1, "qubit count")?;
            let n: u32 = t
                .text
                .parse()
                .ok()
                .filter(|&n| n > 0)
                .ok_or_else(|| p.err(t.column, format!("bad qubit count `{}`", t.text)))?;
            p.arity(2)?;
            circuit = Some(Circuit::new(n));
            continue;
        };
        let n = c.n_qubits;
        let gate = match keyword.as_str() {
            "qubits" => return Err(p.err(head.column, "duplicate `qubits` line")),
            "init" => {
                if c.explicit_init {
                    return Err(p.err(head.column, "duplicate `init` line"));
                }
                if !c.gates.is_empty() {
                    return Err(p.err(head.column, "`init` must precede all gates"));
                }
                let t = p.arg(1, "bitstring")?;
                let bits: Option<Vec<bool>> = t
                    .text
                    .chars()
                    .map(|ch| match ch {
                        '0' => Some(false),
                        '1' => Some(true),
                        _ => None,
                    })
                    .collect();
                let bits = bits.filter(|b| b.len() == n as usize).ok_or_else(|| {
                    p.err(
                        t.column,
                        format!("init needs {n} binary digits, got `{}`", t.text),
                    )
                })?;
                p.arity(2)?;
                c.initial = bits;
                c.explicit_init = true;
                continue;
            }
            "x" | "y" | "z" | "h" => {
                let q = p.qubit(1, n)?;
                p.arity(2)?;
                match keyword.as_str() {
                    "x" => Gate::X(q),
                    "y" => Gate::Y(q),
                    "z" => Gate::Z(q),
                    _ => Gate::H(q),
                }
            }
            "ry" | "rz" | "phase" => {
                let q = p.qubit(1, n)?;
                let theta = p.angle(2)?;
                p.arity(3)?;
                match keyword.as_str() {
                    "ry" => Gate::Ry(q, theta),
                    "rz" => Gate::Rz(q, theta),
                    _ => Gate::Phase(q, theta),
                }
            }
            "cx" => {
                let g = Gate::Cx {
                    control: p.qubit(1, n)?,
                    target: p.qubit(2, n)?,
                };
                p.arity(3)?;
                g
            }
            "ccx" => {
                let g = Gate::Ccx {
                    c1: p.qubit(1, n)?,
                    c2: p.qubit(2, n)?,
                    target: p.qubit(3, n)?,
                };
                p.arity(4)?;
                g
            }
            "cps" => {
                if p.toks.len() < 2 {
                    return Err(p.err(p.end_column, "missing qubit index"));
                }
                let qs = (1..p.toks.len())
                    .map(|i| p.qubit(i, n))
                    .collect::<Result<Vec<_>, _>>()?;
                Gate::Cps(qs)
            }
            _ => return Err(p.err(head.column, format!("unknown gate `{}`", head.text))),
        };
        if let Err(e) = gate.validate(n) {
            return Err(p.err(head.column, e.to_string()));
        }
        c.gates.push(gate);
    }
    circuit.ok_or(ParseError {
        line: 1,
        column: 1,
        message: "missing `qubits <n>` line".into(),
    })
}
