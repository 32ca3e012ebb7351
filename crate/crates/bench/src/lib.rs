//! Operand fixtures shared by the benchmarks.

use quidd::circuit::generators::{
    grover_iteration, hamiltonian_zz, margolus, remote_epr, remote_epr_target, toffoli, EPR_PHASES,
};
use quidd::circuit::{build_operator, build_state};
use quidd::dd::{ComplexValue, DdManager};
use quidd::linalg::{scalar_ops, QuIdd, ScalarMode};
use quidd::Result;

/// A manager holding two operands to compare.
pub struct Fixture {
    pub mgr: DdManager,
    pub a: QuIdd,
    pub b: QuIdd,
}

/// One Grover iteration on `n` qubits against its `e^{0.345i}` multiple.
pub fn grover_pair(n: u32) -> Result<Fixture> {
    let mut mgr = DdManager::new();
    let b = build_state(&mut mgr, &grover_iteration(n)?)?;
    let a = scalar_ops(
        &mut mgr,
        &b,
        ComplexValue::from_polar(1.0, 0.345),
        ScalarMode::Mul,
    )?;
    Ok(Fixture { mgr, a, b })
}

/// Remote EPR state against its phased target.
pub fn epr_pair(n: u32) -> Result<Fixture> {
    let mut mgr = DdManager::new();
    let b = build_state(&mut mgr, &remote_epr(n)?)?;
    let a = remote_epr_target(&mut mgr, n, EPR_PHASES)?;
    Ok(Fixture { mgr, a, b })
}

/// ZZ evolution operators for two time steps.
pub fn hamiltonian_pair(n: u32) -> Result<Fixture> {
    let mut mgr = DdManager::new();
    let a = build_operator(&mut mgr, &hamiltonian_zz(n, 0.3)?)?;
    let b = build_operator(&mut mgr, &hamiltonian_zz(n, 0.9)?)?;
    Ok(Fixture { mgr, a, b })
}

pub fn margolus_toffoli() -> Result<Fixture> {
    let mut mgr = DdManager::new();
    let a = build_operator(&mut mgr, &margolus())?;
    let b = build_operator(&mut mgr, &toffoli())?;
    Ok(Fixture { mgr, a, b })
}
