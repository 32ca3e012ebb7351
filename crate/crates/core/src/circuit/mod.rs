//! Gate-list circuits, their text format, and conversion to diagrams.

pub mod generators;
mod parse;

use std::fmt;

use crate::dd::DdManager;
use crate::error::{Error, Result};
use crate::linalg::{lift_gate, matmul, QuIdd};

pub use parse::{parse_circuit, ParseError};

#[derive(Clone, Debug, PartialEq)]
pub enum Gate {
    X(u32),
    Y(u32),
    Z(u32),
    H(u32),
    /// Rotation about Y by `theta` radians: `exp(-i theta Y / 2)`.
    Ry(u32, f64),
    /// `exp(-i theta Z)`, i.e. `diag(e^{-i theta}, e^{i theta})`.
    Rz(u32, f64),
    /// `diag(1, e^{i theta})`.
    Phase(u32, f64),
    Cx {
        control: u32,
        target: u32,
    },
    Ccx {
        c1: u32,
        c2: u32,
        target: u32,
    },
    /// Conditional phase shift `2|0..0><0..0| - I` on the listed qubits.
    Cps(Vec<u32>),
}

impl Gate {
    pub fn qubits(&self) -> Vec<u32> {
        match self {
            Gate::X(q) | Gate::Y(q) | Gate::Z(q) | Gate::H(q) => vec![*q],
            Gate::Ry(q, _) | Gate::Rz(q, _) | Gate::Phase(q, _) => vec![*q],
            Gate::Cx { control, target } => vec![*control, *target],
            Gate::Ccx { c1, c2, target } => vec![*c1, *c2, *target],
            Gate::Cps(qs) => qs.clone(),
        }
    }

    pub fn angle(&self) -> Option<f64> {
        match self {
            Gate::Ry(_, t) | Gate::Rz(_, t) | Gate::Phase(_, t) => Some(*t),
            _ => None,
        }
    }

    pub fn mnemonic(&self) -> &'static str {
        match self {
            Gate::X(_) => "x",
            Gate::Y(_) => "y",
            Gate::Z(_) => "z",
            Gate::H(_) => "h",
            Gate::Ry(..) => "ry",
            Gate::Rz(..) => "rz",
            Gate::Phase(..) => "phase",
            Gate::Cx { .. } => "cx",
            Gate::Ccx { .. } => "ccx",
            Gate::Cps(_) => "cps",
        }
    }

    pub fn validate(&self, n: u32) -> Result<()> {
        let qs = self.qubits();
        if qs.is_empty() {
            return Err(Error::InvalidArgument("gate acts on no qubits".into()));
        }
        for (i, &q) in qs.iter().enumerate() {
            if q >= n {
                return Err(Error::QubitOutOfRange { qubit: q, n });
            }
            if qs[..i].contains(&q) {
                return Err(Error::DuplicateQubit(q));
            }
        }
        if let Some(t) = self.angle() {
            if !t.is_finite() {
                return Err(Error::NonFinite { re: t, im: 0.0 });
            }
        }
        Ok(())
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.mnemonic())?;
        for q in self.qubits() {
            write!(f, " {q}")?;
        }
        if let Some(t) = self.angle() {
            write!(f, " {t:?}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    pub n_qubits: u32,
    pub gates: Vec<Gate>,
    /// Initial basis state, one entry per qubit.
    pub initial: Vec<bool>,
    /// Whether the source named an initial state explicitly.
    pub explicit_init: bool,
}

impl Circuit {
    pub fn new(n_qubits: u32) -> Self {
        Self {
            n_qubits,
            gates: Vec::new(),
            initial: vec![false; n_qubits as usize],
            explicit_init: false,
        }
    }

    pub fn with_initial(mut self, bits: &[bool]) -> Result<Self> {
        if bits.len() != self.n_qubits as usize {
            return Err(Error::InvalidArgument(format!(
                "initial state has {} bits for {} qubits",
                bits.len(),
                self.n_qubits
            )));
        }
        self.initial = bits.to_vec();
        self.explicit_init = true;
        Ok(self)
    }

    pub fn push(&mut self, g: Gate) -> Result<&mut Self> {
        g.validate(self.n_qubits)?;
        self.gates.push(g);
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if self.initial.len() != self.n_qubits as usize {
            return Err(Error::InvalidArgument(
                "initial state length mismatch".into(),
            ));
        }
        self.gates
            .iter()
            .try_for_each(|g| g.validate(self.n_qubits))
    }

    /// Text form accepted by [`parse_circuit`].
    pub fn to_text(&self) -> String {
        let mut s = format!("qubits {}\n", self.n_qubits);
        if self.explicit_init {
            s.push_str("init ");
            s.extend(self.initial.iter().map(|&b| if b { '1' } else { '0' }));
            s.push('\n');
        }
        for g in &self.gates {
            s.push_str(&g.to_string());
            s.push('\n');
        }
        s
    }
}

/// Compute-cache size past which circuit builders flush the cache between
/// gates.
const CACHE_FLUSH_THRESHOLD: usize = 1 << 22;

fn maybe_flush(mgr: &mut DdManager) {
    if mgr.counters().cache_entries > CACHE_FLUSH_THRESHOLD {
        mgr.clear_cache();
    }
}

/// Applies each gate, lifted to the full register, to the initial state.
pub fn build_state(mgr: &mut DdManager, c: &Circuit) -> Result<QuIdd> {
    c.validate()?;
    let mut psi = QuIdd::basis_state(mgr, &c.initial)?;
    for g in &c.gates {
        let u = lift_gate(mgr, g, c.n_qubits)?;
        psi = matmul(mgr, &u, &psi)?;
        maybe_flush(mgr);
    }
    Ok(psi)
}

/// The circuit's unitary; later gates multiply on the left.
pub fn build_operator(mgr: &mut DdManager, c: &Circuit) -> Result<QuIdd> {
    c.validate()?;
    let mut acc = QuIdd::identity(mgr, c.n_qubits)?;
    for g in &c.gates {
        let u = lift_gate(mgr, g, c.n_qubits)?;
        acc = matmul(mgr, &u, &acc)?;
        maybe_flush(mgr);
    }
    Ok(acc)
}
