//! `quidd`: equivalence checks and benchmark suites over QuIDDs.
//!
//! Exit codes: 0 equivalent (or filter passed), 1 not equivalent,
//! 2 usage, parse or kind errors, 3 numeric failures.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use quidd::circuit::{build_operator, build_state, parse_circuit};
use quidd::dd::serialize::{deserialize, serialize, HEADER_MAGIC};
use quidd::dd::{ComplexValue, DdManager};
use quidd::equiv::{auto_check, run_method, EquivVerdict, Level, Method, Outcome, Side};
use quidd::linalg::{QuIdd, QuIddKind};
use quidd::scaling::{run_suite, Suite, SuiteReport};

const STACK_BYTES: usize = 512 << 20;

#[derive(Parser)]
#[command(
    name = "quidd",
    version,
    about = "Decision-diagram equivalence checking for quantum circuits"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compare two circuits or serialized diagrams.
    Check(CheckArgs),
    /// Run a scaling suite and fit node counts and check times.
    Bench(BenchArgs),
    /// Convert between circuits and the diagram text format.
    Dd {
        #[command(subcommand)]
        op: DdOp,
    },
}

#[derive(clap::Args)]
struct CheckArgs {
    a: PathBuf,
    b: PathBuf,
    #[arg(long, default_value = "global", value_parser = parse_level)]
    level: Level,
    /// `auto` or a method name: exact, nodecount, inner, matrix, gprc,
    /// modinner, modmatrix, elemdiv, rpdiv, merge, moddd.
    #[arg(long, default_value = "auto")]
    method: String,
    #[arg(long, value_enum, default_value_t = KindArg::Auto)]
    kind: KindArg,
    /// Write the relative-phase diagram here when one is computed.
    #[arg(long)]
    phases_out: Option<PathBuf>,
    #[arg(long)]
    json: bool,
    #[arg(long)]
    quiet: bool,
}

#[derive(clap::Args)]
struct BenchArgs {
    #[arg(value_parser = parse_suite)]
    suite: Suite,
    /// `a..b`, `a..b:step` or a comma-separated list.
    #[arg(long, value_parser = parse_sizes)]
    sizes: Sizes,
    #[arg(long, default_value_t = 5)]
    reps: usize,
    #[arg(long)]
    json: bool,
    #[arg(long)]
    quiet: bool,
}

#[derive(Subcommand)]
enum DdOp {
    /// Build a circuit (or reload a diagram) and print its text form.
    Serialize {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = KindArg::Auto)]
        kind: KindArg,
    },
    /// Load a diagram file and summarize it.
    Deserialize {
        input: PathBuf,
        /// Re-emit the diagram here after loading.
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
}

/// How a circuit file is interpreted. `auto` builds a state when the file
/// has an `init` line and an operator otherwise.
#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Auto,
    State,
    Operator,
}

#[derive(Clone, Debug)]
struct Sizes(Vec<u64>);

fn parse_level(s: &str) -> Result<Level, String> {
    Level::from_str(s).map_err(|e| e.to_string())
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    Suite::from_str(s).map_err(|e| e.to_string())
}

fn parse_sizes(s: &str) -> Result<Sizes, String> {
    let num = |t: &str| {
        t.trim()
            .parse::<u64>()
            .map_err(|_| format!("bad size `{t}`"))
    };
    let sizes = if let Some((lo, rest)) = s.split_once("..") {
        let (hi, step) = match rest.split_once(':') {
            Some((hi, step)) => (num(hi)?, num(step)?),
            None => (num(rest)?, 1),
        };
        let lo = num(lo)?;
        if step == 0 || lo > hi {
            return Err(format!("empty range `{s}`"));
        }
        (lo..=hi).step_by(step as usize).collect()
    } else {
        s.split(',').map(num).collect::<Result<Vec<_>, _>>()?
    };
    if sizes.is_empty() {
        return Err("no sizes".into());
    }
    Ok(Sizes(sizes))
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<quidd::Error> for Failure {
    fn from(e: quidd::Error) -> Self {
        use quidd::Error::*;
        let code = match e {
            NonFinite { .. } | DivisionByZero | ZeroState => 3,
            _ => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

/// Loads a circuit or a serialized diagram into `mgr`.
fn load(mgr: &mut DdManager, path: &Path, kind: KindArg) -> Result<QuIdd, Failure> {
    let text = read(path)?;
    let in_file = |e: quidd::Error| {
        let f = Failure::from(e);
        Failure {
            message: format!("{}: {}", path.display(), f.message),
            ..f
        }
    };
    if text.trim_start().starts_with(HEADER_MAGIC) {
        let q = deserialize(mgr, &text).map_err(in_file)?;
        let wanted = match kind {
            KindArg::Auto => q.kind,
            KindArg::State => QuIddKind::State,
            KindArg::Operator => QuIddKind::Operator,
        };
        if wanted != q.kind {
            return Err(Failure::usage(format!(
                "{}: file holds {} data, expected {}",
                path.display(),
                q.kind.name(),
                wanted.name()
            )));
        }
        return Ok(q);
    }
    let circuit = parse_circuit(&text).map_err(|e| in_file(e.into()))?;
    let as_state = match kind {
        KindArg::Auto => circuit.explicit_init,
        KindArg::State => true,
        KindArg::Operator => false,
    };
    let q = if as_state {
        build_state(mgr, &circuit)
    } else {
        build_operator(mgr, &circuit)
    };
    q.map_err(in_file)
}

#[derive(Serialize)]
struct Report {
    method: Method,
    level: Level,
    kind: &'static str,
    verdict: &'static str,
    equivalent: bool,
    phase: Option<[f64; 2]>,
    /// Distinct values of the relative-phase diagram.
    phases: Option<Vec<[f64; 2]>>,
    phases_file: Option<String>,
    side: Option<Side>,
    both_sides: Option<bool>,
    stages: Vec<Method>,
    nodes_a: usize,
    nodes_b: usize,
    qubits: u32,
    build_ms: f64,
    check_ms: f64,
}

fn pair(v: ComplexValue) -> [f64; 2] {
    [v.re, v.im]
}

fn fmt_complex(v: [f64; 2]) -> String {
    format!("{:.12} {:+.12}i", v[0], v[1])
}

fn check(args: CheckArgs) -> Result<u8, Failure> {
    let method = match args.method.as_str() {
        "auto" => None,
        s => Some(Method::from_str(s).map_err(Failure::from)?),
    };
    let mut mgr = DdManager::new();
    let start = Instant::now();
    let a = load(&mut mgr, &args.a, args.kind)?;
    let b = load(&mut mgr, &args.b, args.kind)?;
    let build_ms = start.elapsed().as_secs_f64() * 1e3;
    if a.kind != b.kind {
        return Err(Failure::usage(format!(
            "cannot compare {} with {}",
            a.kind.name(),
            b.kind.name()
        )));
    }
    if let Some(m) = method {
        if !m.accepts(a.kind) {
            return Err(Failure::usage(format!(
                "method {m} does not accept {} operands",
                a.kind.name()
            )));
        }
    }

    let start = Instant::now();
    let v: EquivVerdict = match method {
        Some(m) => run_method(&mut mgr, m, &a, &b)?,
        None => auto_check(&mut mgr, &a, &b, args.level)?,
    };
    let check_ms = start.elapsed().as_secs_f64() * 1e3;

    let mut report = Report {
        method: v.method,
        level: method.map_or(args.level, Method::level),
        kind: a.kind.name(),
        verdict: v.outcome.label(),
        equivalent: v.is_positive(),
        phase: None,
        phases: None,
        phases_file: None,
        side: None,
        both_sides: None,
        stages: v.stats.stages.clone(),
        nodes_a: v.stats.nodes_a,
        nodes_b: v.stats.nodes_b,
        qubits: a.n_qubits,
        build_ms,
        check_ms,
    };
    match &v.outcome {
        Outcome::ExactEqual => report.phase = Some([1.0, 0.0]),
        Outcome::GlobalPhase(p) => report.phase = Some(pair(*p)),
        Outcome::RelativePhase {
            phases,
            side,
            both_sides,
        } => {
            report.side = Some(*side);
            report.both_sides = Some(*both_sides);
            if let Some(p) = phases {
                let values = mgr.stats(p.root).terminal_values;
                report.phases = Some(values.into_iter().map(pair).collect());
                if let Some(path) = &args.phases_out {
                    write(path, &serialize(&mgr, p)?)?;
                    report.phases_file = Some(path.display().to_string());
                }
            }
        }
        _ => {}
    }

    if !args.quiet {
        if args.json {
            println!(
                "{}",
                serde_json::to_string_pretty(&report).expect("report serializes")
            );
        } else {
            print_report(&report);
        }
    }
    Ok(if report.equivalent { 0 } else { 1 })
}

/// The serde name of a unit enum variant.
fn label<T: Serialize>(v: &T) -> String {
    serde_json::to_value(v)
        .ok()
        .and_then(|j| j.as_str().map(str::to_string))
        .unwrap_or_default()
}

fn print_report(r: &Report) {
    println!("verdict   {}", r.verdict);
    println!("method    {} ({} level)", r.method, label(&r.level));
    if let Some(p) = r.phase {
        println!("phase     {}", fmt_complex(p));
    }
    if let Some(side) = r.side {
        println!("side      {}", label(&side));
    }
    if let Some(ps) = &r.phases {
        for p in ps {
            println!("phases    {}", fmt_complex(*p));
        }
    }
    println!("qubits    {} ({})", r.qubits, r.kind);
    println!("nodes     {} / {}", r.nodes_a, r.nodes_b);
    println!("build_ms  {:.3}", r.build_ms);
    println!("check_ms  {:.3}", r.check_ms);
}

fn bench(args: BenchArgs) -> Result<u8, Failure> {
    for &s in &args.sizes.0 {
        args.suite.check_size(s)?;
    }
    let report: SuiteReport = run_suite(args.suite, &args.sizes.0, args.reps)?;
    if args.quiet {
        return Ok(0);
    }
    if args.json {
        println!(
            "{}",
            serde_json::to_string_pretty(&report).expect("report serializes")
        );
        return Ok(0);
    }
    let methods: Vec<&String> = report
        .rows
        .first()
        .map(|r| r.check_ms.keys().collect())
        .unwrap_or_default();
    print!(
        "{:>8} {:>8} {:>10} {:>10}",
        "size", "qubits", "nodes", "build_ms"
    );
    for m in &methods {
        print!(" {:>12}", format!("{m}_ms"));
    }
    println!();
    for row in &report.rows {
        print!(
            "{:>8} {:>8} {:>10} {:>10.3}",
            row.param, row.n, row.nodes, row.build_ms
        );
        for m in &methods {
            match row.check_ms.get(*m) {
                Some(t) => print!(" {t:>12.4}"),
                None => print!(" {:>12}", "-"),
            }
        }
        println!();
    }
    for f in &report.fits {
        print!("{:<16} linear R2 {:.4}", f.series, f.linear.r_squared);
        if let Some(q) = &f.quadratic {
            print!("  quadratic R2 {:.4}", q.r_squared);
        }
        if let Some(s) = f.loglog_slope {
            print!("  log-log slope {s:.3}");
        }
        println!();
    }
    Ok(0)
}

fn dd(op: DdOp) -> Result<u8, Failure> {
    let mut mgr = DdManager::new();
    match op {
        DdOp::Serialize {
            input,
            output,
            kind,
        } => {
            let q = load(&mut mgr, &input, kind)?;
            let text = serialize(&mgr, &q)?;
            match output {
                Some(path) => write(&path, &text)?,
                None => print!("{text}"),
            }
        }
        DdOp::Deserialize {
            input,
            output,
            json,
        } => {
            let text = read(&input)?;
            let q = deserialize(&mut mgr, &text).map_err(|e| {
                let f = Failure::from(e);
                Failure {
                    message: format!("{}: {}", input.display(), f.message),
                    ..f
                }
            })?;
            if let Some(path) = output {
                write(&path, &serialize(&mgr, &q)?)?;
            }
            let stats = mgr.stats(q.root);
            if json {
                let summary = serde_json::json!({
                    "kind": q.kind.name(),
                    "qubits": q.n_qubits,
                    "nodes": stats.node_count,
                    "terminals": stats.terminal_values.iter().map(|v| pair(*v)).collect::<Vec<_>>(),
                });
                println!(
                    "{}",
                    serde_json::to_string_pretty(&summary).expect("summary serializes")
                );
            } else {
                println!(
                    "{} on {} qubits, {} nodes, {} terminals",
                    q.kind.name(),
                    q.n_qubits,
                    stats.node_count,
                    stats.terminal_values.len()
                );
            }
        }
    }
    Ok(0)
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Check(args) => check(args),
        Command::Bench(args) => bench(args),
        Command::Dd { op } => dd(op),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    // The DD kernels recurse once per variable.
    let worker = std::thread::Builder::new()
        .stack_size(STACK_BYTES)
        .spawn(move || run(cli))
        .expect("spawn worker thread");
    match worker.join() {
        Ok(Ok(code)) => ExitCode::from(code),
        Ok(Err(f)) => {
            eprintln!("error: {f}");
            ExitCode::from(f.code)
        }
        Err(_) => ExitCode::from(3),
    }
}
