//! Benchmark circuits and states.
//!
//! Qubit 0 is the most significant index bit everywhere except inside
//! [`modexp_state`], whose two registers each list their least significant
//! bit first:
//!
//! | qubits        | meaning                        |
//! |---------------|--------------------------------|
//! | `0..w`        | `x`, qubit `k` holds bit `k`   |
//! | `w..2w`       | `a^x mod N`, qubit `w+k` bit `k` |
//!
//! where `w` is the bit length of `N`.

use std::f64::consts::{PI, TAU};

use super::{Circuit, Gate};
use crate::dd::{ComplexValue, DdManager, NodeRef};
use crate::error::{Error, Result};
use crate::linalg::QuIdd;

/// Phases of the `|0..0>` and `|10..01>` terms of the phased remote-EPR
/// target.
pub const EPR_PHASES: (f64, f64) = (0.345, 0.457);

pub const MAX_QFT_QUBITS: u32 = 10;
pub const MAX_MODEXP_QUBITS: u32 = 20;

fn push_all(c: &mut Circuit, gates: impl IntoIterator<Item = Gate>) -> Result<()> {
    for g in gates {
        c.push(g)?;
    }
    Ok(())
}

/// The three-CNOT circuit equal to Toffoli up to a diagonal of relative
/// phases. Qubits 0 and 1 are the controls.
pub fn margolus() -> Circuit {
    let q = PI / 4.0;
    let mut c = Circuit::new(3);
    push_all(
        &mut c,
        [
            Gate::Ry(2, q),
            Gate::Cx {
                control: 1,
                target: 2,
            },
            Gate::Ry(2, q),
            Gate::Cx {
                control: 0,
                target: 2,
            },
            Gate::Ry(2, -q),
            Gate::Cx {
                control: 1,
                target: 2,
            },
            Gate::Ry(2, -q),
        ],
    )
    .expect("valid gates");
    c
}

pub fn toffoli() -> Circuit {
    let mut c = Circuit::new(3);
    c.push(Gate::Ccx {
        c1: 0,
        c2: 1,
        target: 2,
    })
    .expect("valid gate");
    c
}

/// EPR pair between the first and last qubit using only nearest-neighbor
/// CNOTs: `|0..0>` becomes `(|0..0> + |10..01>)/sqrt(2)`.
pub fn remote_epr(n: u32) -> Result<Circuit> {
    if n < 2 {
        return Err(Error::InvalidArgument(
            "remote EPR needs at least 2 qubits".into(),
        ));
    }
    let mut c = Circuit::new(n);
    c.push(Gate::H(0))?;
    c.push(Gate::Cx {
        control: 0,
        target: 1,
    })?;
    for k in 1..n - 1 {
        c.push(Gate::Cx {
            control: k,
            target: k + 1,
        })?;
        c.push(Gate::Cx {
            control: k + 1,
            target: k,
        })?;
    }
    Ok(c)
}

/// Remote EPR followed by phase gates producing
/// `(e^{i p0}|0..0> + e^{i p1}|10..01>)/sqrt(2)`.
pub fn remote_epr_phased(n: u32, phases: (f64, f64)) -> Result<Circuit> {
    let mut c = remote_epr(n)?;
    c.push(Gate::Rz(0, -phases.0))?;
    c.push(Gate::Phase(0, phases.1 + phases.0))?;
    Ok(c)
}

/// `(e^{i p0}|0..0> + e^{i p1}|10..01>)/sqrt(2)` built directly.
pub fn remote_epr_target(mgr: &mut DdManager, n: u32, phases: (f64, f64)) -> Result<QuIdd> {
    if n < 2 {
        return Err(Error::InvalidArgument(
            "remote EPR needs at least 2 qubits".into(),
        ));
    }
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let zeros = vec![false; n as usize];
    let mut ends = zeros.clone();
    ends[0] = true;
    ends[n as usize - 1] = true;
    let a = QuIdd::basis_term(mgr, &zeros, ComplexValue::from_polar(s, phases.0))?;
    let b = QuIdd::basis_term(mgr, &ends, ComplexValue::from_polar(s, phases.1))?;
    let root = mgr.add(a, b)?;
    Ok(QuIdd::state(root, n))
}

/// Parity-controlled rotation `exp(-i dt Z⊗..⊗Z)` on qubits `0..n-1`, using
/// qubit `n-1` as the parity ancilla.
pub fn hamiltonian_zz(n: u32, dt: f64) -> Result<Circuit> {
    if n < 2 {
        return Err(Error::InvalidArgument(
            "Hamiltonian circuit needs a data qubit and an ancilla".into(),
        ));
    }
    let anc = n - 1;
    let mut c = Circuit::new(n);
    for q in 0..anc {
        c.push(Gate::Cx {
            control: q,
            target: anc,
        })?;
    }
    c.push(Gate::Rz(anc, dt))?;
    for q in (0..anc).rev() {
        c.push(Gate::Cx {
            control: q,
            target: anc,
        })?;
    }
    Ok(c)
}

/// `iterations` rounds of Grover search over `n - 1` data qubits with the
/// oracle marking the all-ones item through the ancilla (qubit `n - 1`,
/// prepared in `|1>`).
///
/// The oracle is a multi-controlled NOT on the ancilla, realized as
/// `H · X⊗n · CPS · X⊗n · H` on the ancilla; that identity holds up to a
/// global factor of -1 per round.
pub fn grover(n: u32, iterations: u32) -> Result<Circuit> {
    if n < 3 {
        return Err(Error::InvalidArgument(
            "Grover needs at least 2 data qubits and an ancilla".into(),
        ));
    }
    let anc = n - 1;
    let mut init = vec![false; n as usize];
    init[anc as usize] = true;
    let mut c = Circuit::new(n).with_initial(&init)?;
    push_all(&mut c, (0..n).map(Gate::H))?;
    let all: Vec<u32> = (0..n).collect();
    let data: Vec<u32> = (0..anc).collect();
    for _ in 0..iterations {
        c.push(Gate::H(anc))?;
        push_all(&mut c, all.iter().map(|&q| Gate::X(q)))?;
        c.push(Gate::Cps(all.clone()))?;
        push_all(&mut c, all.iter().map(|&q| Gate::X(q)))?;
        c.push(Gate::H(anc))?;
        push_all(&mut c, data.iter().map(|&q| Gate::H(q)))?;
        c.push(Gate::Cps(data.clone()))?;
        push_all(&mut c, data.iter().map(|&q| Gate::H(q)))?;
    }
    c.push(Gate::H(anc))?;
    Ok(c)
}

/// One Grover iteration.
pub fn grover_iteration(n: u32) -> Result<Circuit> {
    grover(n, 1)
}

/// Inverse QFT on `n` qubits, entry `(j, k) = ω^{-jk} / sqrt(2^n)` with
/// `ω = e^{2πi/2^n}`.
pub fn inverse_qft(mgr: &mut DdManager, n: u32) -> Result<QuIdd> {
    if n == 0 || n > MAX_QFT_QUBITS {
        return Err(Error::SizeLimit(format!(
            "inverse QFT supports 1..={MAX_QFT_QUBITS} qubits, got {n}"
        )));
    }
    let dim = 1usize << n;
    let norm = 1.0 / (dim as f64).sqrt();
    QuIdd::operator_from_fn(mgr, n, |j, k| {
        // Reducing the exponent first makes equal phases bit-identical.
        let e = (j * k) % dim;
        ComplexValue::from_polar(norm, -TAU * e as f64 / dim as f64)
    })
}

fn mod_pow(base: u64, mut exp: u64, modulus: u64) -> u64 {
    let mut acc = 1 % modulus;
    let mut b = base % modulus;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % modulus;
        }
        b = b * b % modulus;
        exp >>= 1;
    }
    acc
}

/// `2^{-w/2} Σ_x |x>|a^x mod N>` with `w`-qubit registers, `w` the bit
/// length of `N`.
pub fn modexp_state(mgr: &mut DdManager, modulus: u64, base: u64) -> Result<QuIdd> {
    if modulus < 2 || base == 0 {
        return Err(Error::InvalidArgument(format!(
            "need N >= 2 and a >= 1, got N={modulus}, a={base}"
        )));
    }
    let w = 64 - modulus.leading_zeros();
    if 2 * w > MAX_MODEXP_QUBITS {
        return Err(Error::SizeLimit(format!(
            "N={modulus} needs {} qubits, limit is {MAX_MODEXP_QUBITS}",
            2 * w
        )));
    }
    let amp = ComplexValue::new(2f64.powf(-(w as f64) / 2.0), 0.0);
    let mut terms: Vec<NodeRef> = Vec::with_capacity(1 << w);
    for x in 0..(1u64 << w) {
        let f = mod_pow(base, x, modulus);
        let bits: Vec<bool> = (0..w)
            .map(|k| (x >> k) & 1 == 1)
            .chain((0..w).map(|k| (f >> k) & 1 == 1))
            .collect();
        terms.push(QuIdd::basis_term(mgr, &bits, amp)?);
    }
    // Pairwise reduction keeps intermediate sums balanced.
    while terms.len() > 1 {
        let mut next = Vec::with_capacity(terms.len().div_ceil(2));
        for pair in terms.chunks(2) {
            next.push(match *pair {
                [a, b] => mgr.add(a, b)?,
                [a] => a,
                _ => unreachable!(),
            });
        }
        terms = next;
    }
    Ok(QuIdd::state(terms[0], 2 * w))
}

/// The benchmark families.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BenchmarkKind {
    GroverIter { n: u32 },
    RemoteEpr { n: u32 },
    HamiltonianZz { n: u32, dt: f64 },
    InverseQft { n: u32 },
    ModexpState { modulus: u64, base: u64 },
    Margolus,
    Toffoli,
}

#[derive(Clone, Debug, PartialEq)]
pub enum BenchmarkOutput {
    Circuit(Circuit),
    QuIdd(QuIdd),
}

pub fn benchmark(mgr: &mut DdManager, kind: BenchmarkKind) -> Result<BenchmarkOutput> {
    Ok(match kind {
        BenchmarkKind::GroverIter { n } => BenchmarkOutput::Circuit(grover_iteration(n)?),
        BenchmarkKind::RemoteEpr { n } => BenchmarkOutput::Circuit(remote_epr(n)?),
        BenchmarkKind::HamiltonianZz { n, dt } => BenchmarkOutput::Circuit(hamiltonian_zz(n, dt)?),
        BenchmarkKind::InverseQft { n } => BenchmarkOutput::QuIdd(inverse_qft(mgr, n)?),
        BenchmarkKind::ModexpState { modulus, base } => {
            BenchmarkOutput::QuIdd(modexp_state(mgr, modulus, base)?)
        }
        BenchmarkKind::Margolus => BenchmarkOutput::Circuit(margolus()),
        BenchmarkKind::Toffoli => BenchmarkOutput::Circuit(toffoli()),
    })
}
