//! Benchmark suites and least-squares growth fits.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::circuit::generators::{
    grover_iteration, hamiltonian_zz, inverse_qft, modexp_state, remote_epr, remote_epr_target,
    EPR_PHASES, MAX_QFT_QUBITS,
};
use crate::circuit::{build_operator, build_state};
use crate::dd::{ComplexValue, DdManager};
use crate::equiv::{run_method, Method};
use crate::error::{Error, Result};
use crate::linalg::{scalar_ops, QuIdd, ScalarMode};

/// Phase injected by the global-phase suites.
pub const INJECTED_PHASE: f64 = 0.345;

/// Time steps of the two Hamiltonian circuits compared by that suite.
pub const HAMILTONIAN_STEPS: (f64, f64) = (0.3, 0.9);

/// Largest size for which the qft suite runs the matrix-product check.
pub const QFT_MATRIX_MAX: u32 = 6;

/// Polynomial least-squares fit; `coeffs[k]` multiplies `x^k`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Fit {
    pub coeffs: Vec<f64>,
    pub r_squared: f64,
}

impl Fit {
    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }
}

pub fn polyfit(xs: &[f64], ys: &[f64], degree: usize) -> Result<Fit> {
    if xs.len() != ys.len() || xs.len() <= degree {
        return Err(Error::InvalidArgument(format!(
            "degree-{degree} fit needs more than {degree} points, got {}",
            xs.len()
        )));
    }
    let m = DMatrix::from_fn(xs.len(), degree + 1, |i, k| xs[i].powi(k as i32));
    let y = DVector::from_column_slice(ys);
    let coeffs = m
        .clone()
        .svd(true, true)
        .solve(&y, 1e-12)
        .map_err(|e| Error::InvalidArgument(format!("least squares failed: {e}")))?;
    let pred = &m * &coeffs;
    let mean = y.mean();
    let ss_res: f64 = (&y - pred).iter().map(|r| r * r).sum();
    let ss_tot: f64 = y.iter().map(|v| (v - mean) * (v - mean)).sum();
    let r_squared = if ss_tot == 0.0 {
        if ss_res <= f64::EPSILON {
            1.0
        } else {
            0.0
        }
    } else {
        1.0 - ss_res / ss_tot
    };
    Ok(Fit {
        coeffs: coeffs.iter().copied().collect(),
        r_squared,
    })
}

/// Slope of `ln y` against `ln x`: the exponent `k` in `y ~ x^k`.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.iter().chain(ys).any(|&v| v <= 0.0) {
        return Err(Error::InvalidArgument(
            "log-log fit needs positive data".into(),
        ));
    }
    let lx: Vec<f64> = xs.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|v| v.ln()).collect();
    Ok(polyfit(&lx, &ly, 1)?.coeffs[1])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Grover,
    Epr,
    Hamiltonian,
    Qft,
    Modexp,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::Grover,
        Suite::Epr,
        Suite::Hamiltonian,
        Suite::Qft,
        Suite::Modexp,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Grover => "grover",
            Suite::Epr => "epr",
            Suite::Hamiltonian => "hamiltonian",
            Suite::Qft => "qft",
            Suite::Modexp => "modexp",
        }
    }

    /// Methods timed by the suite at size `n`.
    pub fn methods(self, n: u32) -> Vec<Method> {
        match self {
            Suite::Grover | Suite::Modexp => vec![Method::Gprc, Method::InnerProduct],
            Suite::Epr => vec![
                Method::ElemDiv,
                Method::ModInner,
                Method::NonzeroMerge,
                Method::ModCompare,
            ],
            Suite::Hamiltonian => vec![
                Method::RpDiv,
                Method::ModMatrix,
                Method::NonzeroMerge,
                Method::ModCompare,
            ],
            Suite::Qft if n <= QFT_MATRIX_MAX => {
                vec![Method::Gprc, Method::NodeCount, Method::MatrixProduct]
            }
            Suite::Qft => vec![Method::Gprc, Method::NodeCount],
        }
    }

    /// Rejects sizes outside the generators' limits.
    pub fn check_size(self, size: u64) -> Result<()> {
        let bad = |msg: String| Err(Error::SizeLimit(msg));
        match self {
            Suite::Grover if !(3..=4096).contains(&size) => {
                bad(format!("grover size {size} outside 3..=4096"))
            }
            Suite::Epr if !(2..=100_000).contains(&size) => {
                bad(format!("epr size {size} outside 2..=100000"))
            }
            Suite::Hamiltonian if !(2..=4096).contains(&size) => {
                bad(format!("hamiltonian size {size} outside 2..=4096"))
            }
            Suite::Qft if !(1..=MAX_QFT_QUBITS as u64).contains(&size) => {
                bad(format!("qft size {size} outside 1..={MAX_QFT_QUBITS}"))
            }
            Suite::Modexp if !(3..=1023).contains(&size) => {
                bad(format!("modexp modulus {size} outside 3..=1023"))
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown suite `{s}`")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteRow {
    /// Qubits.
    pub n: u32,
    /// The size as requested: qubits, or `N` for modexp.
    pub param: u64,
    pub nodes: usize,
    /// Nodes of the other operand.
    pub nodes_other: usize,
    pub build_ms: f64,
    pub check_ms: BTreeMap<String, f64>,
    pub verdicts: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeriesFit {
    pub series: String,
    pub linear: Fit,
    pub quadratic: Option<Fit>,
    pub loglog_slope: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub reps: usize,
    pub rows: Vec<SuiteRow>,
    pub fits: Vec<SeriesFit>,
}

const MIN_SAMPLE_MS: f64 = 1.0;
const MAX_RUNS_PER_SAMPLE: usize = 1000;

fn ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        (v[m - 1] + v[m]) / 2.0
    }
}

/// Builds the operand pair `(A, B)` of one suite row, timing `B`'s
/// construction from scratch.
fn operands(mgr: &mut DdManager, suite: Suite, size: u64) -> Result<(QuIdd, QuIdd, f64)> {
    let phase = ComplexValue::from_polar(1.0, INJECTED_PHASE);
    let n = size as u32;
    let start = Instant::now();
    let pair = match suite {
        Suite::Grover => {
            let b = build_state(mgr, &grover_iteration(n)?)?;
            (None, b)
        }
        Suite::Epr => {
            let b = build_state(mgr, &remote_epr(n)?)?;
            (Some(remote_epr_target(mgr, n, EPR_PHASES)?), b)
        }
        Suite::Hamiltonian => {
            let b = build_operator(mgr, &hamiltonian_zz(n, HAMILTONIAN_STEPS.1)?)?;
            let a = build_operator(mgr, &hamiltonian_zz(n, HAMILTONIAN_STEPS.0)?)?;
            (Some(a), b)
        }
        Suite::Qft => (None, inverse_qft(mgr, n)?),
        Suite::Modexp => (None, modexp_state(mgr, size, size - 2)?),
    };
    let build_ms = ms(start);
    let (a, b) = match pair {
        (Some(a), b) => (a, b),
        (None, b) => (scalar_ops(mgr, &b, phase, ScalarMode::Mul)?, b),
    };
    Ok((a, b, build_ms))
}

struct Prepared {
    mgr: DdManager,
    a: QuIdd,
    b: QuIdd,
    row: SuiteRow,
    times: BTreeMap<Method, Vec<f64>>,
}

fn prepare(suite: Suite, size: u64) -> Result<Prepared> {
    suite.check_size(size)?;
    let mut mgr = DdManager::new();
    let (a, b, build_ms) = operands(&mut mgr, suite, size)?;
    let row = SuiteRow {
        n: b.n_qubits,
        param: size,
        nodes: mgr.node_count(b.root),
        nodes_other: mgr.node_count(a.root),
        build_ms,
        check_ms: BTreeMap::new(),
        verdicts: BTreeMap::new(),
    };
    Ok(Prepared {
        mgr,
        a,
        b,
        row,
        times: BTreeMap::new(),
    })
}

/// One timing sample: the mean over enough runs to span `MIN_SAMPLE_MS`.
fn sample(p: &mut Prepared, method: Method) -> Result<()> {
    let (mut total, mut runs) = (0.0, 0);
    let mut label = "";
    while total < MIN_SAMPLE_MS && runs < MAX_RUNS_PER_SAMPLE {
        p.mgr.clear_cache();
        let start = Instant::now();
        let v = run_method(&mut p.mgr, method, &p.a, &p.b)?;
        total += ms(start);
        runs += 1;
        label = v.outcome.label();
    }
    p.times.entry(method).or_default().push(total / runs as f64);
    p.row
        .verdicts
        .insert(method.name().to_string(), label.to_string());
    Ok(())
}

fn series_fit(name: String, xs: &[f64], ys: &[f64]) -> Result<Option<SeriesFit>> {
    if xs.len() < 2 {
        return Ok(None);
    }
    Ok(Some(SeriesFit {
        series: name,
        linear: polyfit(xs, ys, 1)?,
        quadratic: if xs.len() > 2 {
            Some(polyfit(xs, ys, 2)?)
        } else {
            None
        },
        loglog_slope: loglog_slope(xs, ys).ok(),
    }))
}

/// Runs `suite` at each size, one fresh manager per size. Check times are
/// medians over `reps` samples; each sample averages runs spanning at least
/// a millisecond, with the compute cache cleared before every run.
pub fn run_suite(suite: Suite, sizes: &[u64], reps: usize) -> Result<SuiteReport> {
    let mut prepared = sizes
        .iter()
        .map(|&s| prepare(suite, s))
        .collect::<Result<Vec<_>>>()?;
    // Rounds sweep every size, so a burst of machine noise lands on all
    // sizes alike and the median discards it.
    for _ in 0..reps.max(1) {
        for p in prepared.iter_mut() {
            for method in suite.methods(p.row.n) {
                sample(p, method)?;
            }
        }
    }
    let rows: Vec<SuiteRow> = prepared
        .into_iter()
        .map(|mut p| {
            for (method, times) in std::mem::take(&mut p.times) {
                p.row
                    .check_ms
                    .insert(method.name().to_string(), median(times));
            }
            p.row
        })
        .collect();
    let xs: Vec<f64> = rows.iter().map(|r| r.n as f64).collect();
    let mut fits = Vec::new();
    let nodes: Vec<f64> = rows.iter().map(|r| r.nodes as f64).collect();
    fits.extend(series_fit("nodes".into(), &xs, &nodes)?);
    let mut methods: Vec<&String> = rows.iter().flat_map(|r| r.check_ms.keys()).collect();
    methods.sort();
    methods.dedup();
    for m in methods {
        let (mx, my): (Vec<f64>, Vec<f64>) = rows
            .iter()
            .filter_map(|r| r.check_ms.get(m).map(|&t| (r.n as f64, t)))
            .unzip();
        fits.extend(series_fit(format!("check_ms.{m}"), &mx, &my)?);
    }
    Ok(SuiteReport {
        suite,
        reps,
        rows,
        fits,
    })
}
