//! `dicke`: feasibility, optimal probabilities, gate export and verification
//! sweeps for Dicke-state transformations under limited access.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use dicke_core::oracle::verify_gate;
use dicke_core::sweep::{self, SweepConfig};
use dicke_core::{
    feasible, pmax, synthesize, universal_gate, validate_task, DenseLimit, Error, ExactRational, GateOperator, RawTask,
    Tolerances, UniversalGateSpec, VerificationReport,
};

const EXIT_OK: u8 = 0;
const EXIT_VERIFY_FAILED: u8 = 1;
const EXIT_ARGUMENT: u8 = 2;
const EXIT_INFEASIBLE: u8 = 3;
const EXIT_RESOURCE: u8 = 4;

const DECIMAL_DIGITS: usize = 12;

#[derive(Parser)]
#[command(name = "dicke", version, about = "Transform Dicke states by accessing only k qubits")]
struct Cli {
    /// Override the dense-vector qubit ceiling (also DICKE_MAX_QUBITS).
    #[arg(long, global = true)]
    max_qubits: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
#[group(multiple = false)]
struct Format {
    /// Print a single JSON document.
    #[arg(long)]
    json: bool,
    /// Print JSON lines.
    #[arg(long)]
    jsonl: bool,
}

impl Format {
    fn machine(&self) -> bool {
        self.json || self.jsonl
    }
}

#[derive(Args, Clone, Copy)]
struct TaskArgs {
    /// Initial qubit count N.
    #[arg(long = "n", allow_negative_numbers = true)]
    qubits: Option<i64>,
    /// Initial spin-up count M1.
    #[arg(long = "m1", allow_negative_numbers = true)]
    ups: Option<i64>,
    /// Accessible qubit count k.
    #[arg(long = "k", allow_negative_numbers = true)]
    access: i64,
    /// Spin-up qubits to add (negative deletes).
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    add_up: i64,
    /// Spin-down qubits to add (negative deletes).
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    add_down: i64,
}

impl TaskArgs {
    fn raw(&self) -> Result<RawTask, Failure> {
        let qubits = self.qubits.ok_or_else(|| Failure::argument("--n is required"))?;
        let ups = self.ups.ok_or_else(|| Failure::argument("--m1 is required"))?;
        Ok(RawTask::from_changes(qubits, ups, self.access, self.add_up, self.add_down))
    }
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether the transformation is possible.
    Feasible {
        #[command(flatten)]
        task: TaskArgs,
        #[command(flatten)]
        format: Format,
    },
    /// Exact optimal success probability.
    Pmax {
        #[command(flatten)]
        task: TaskArgs,
        #[command(flatten)]
        format: Format,
    },
    /// Synthesize the optimal gate, or an N-independent gate with --universal.
    Gate {
        #[command(flatten)]
        task: TaskArgs,
        /// Build the universal gate from k and the qubit changes alone.
        #[arg(long)]
        universal: bool,
        /// Input weight whose column is normalized to 1 (universal gates).
        #[arg(long, requires = "universal")]
        normalization_u: Option<usize>,
        /// Write the gate JSON here instead of standard output.
        #[arg(long)]
        export: Option<PathBuf>,
    },
    /// Verify against the dense state-vector oracle.
    Verify {
        /// Qubit range `a..b` (inclusive) for the exhaustive sweep.
        #[arg(long, value_parser = parse_range, conflicts_with = "gate")]
        sweep_n: Option<(usize, usize)>,
        /// Largest |n| in the sweep.
        #[arg(long, default_value_t = 2)]
        max_change: usize,
        /// Verify an exported gate file instead of sweeping.
        #[arg(long, requires_all = ["n", "m1"])]
        gate: Option<PathBuf>,
        /// Initial qubit count for --gate.
        #[arg(long)]
        n: Option<usize>,
        /// Initial spin-up count for --gate.
        #[arg(long)]
        m1: Option<usize>,
        /// Oracle tolerance on fidelity and probability.
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[command(flatten)]
        format: Format,
    },
}

fn parse_range(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| format!("expected a..b, got {s:?}"))?;
    let a: usize = a.trim().parse().map_err(|_| format!("bad lower bound in {s:?}"))?;
    let b: usize = b.trim().parse().map_err(|_| format!("bad upper bound in {s:?}"))?;
    if a > b {
        return Err(format!("empty range {s:?}"));
    }
    Ok((a, b))
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn argument(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_ARGUMENT,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Resource { .. } => EXIT_RESOURCE,
            Error::Infeasible => EXIT_INFEASIBLE,
            Error::Consistency { .. } => EXIT_VERIFY_FAILED,
            _ => EXIT_ARGUMENT,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn to_json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("values serialize")
}

fn fraction_json(r: &ExactRational) -> serde_json::Value {
    json!({"num": r.numer().to_string(), "den": r.denom().to_string()})
}

fn cmd_feasible(task: TaskArgs, format: Format) -> Result<u8, Failure> {
    let task = validate_task(task.raw()?).map_err(|r| Failure::argument(r.to_string()))?;
    let decision = feasible(&task)?;
    if format.machine() {
        println!("{}", to_json(&decision));
    } else {
        println!("task      {task}");
        println!("feasible  {}", if decision.feasible { "yes" } else { "no" });
        let reasons: Vec<&str> = decision.reasons.iter().map(|r| r.code()).collect();
        println!("reasons   {}", reasons.join(", "));
    }
    Ok(if decision.feasible { EXIT_OK } else { EXIT_INFEASIBLE })
}

fn cmd_pmax(task: TaskArgs, format: Format) -> Result<u8, Failure> {
    let task = validate_task(task.raw()?).map_err(|r| Failure::argument(r.to_string()))?;
    let result = pmax(&task)?;
    let decimal = result.value.to_decimal_string(DECIMAL_DIGITS);
    if format.machine() {
        let out = json!({
            "pmax": fraction_json(&result.value),
            "decimal": decimal,
            "argmin_j": result.argmin_j,
        });
        println!("{out}");
    } else {
        println!("task      {task}");
        println!("p_max     {}", result.value);
        println!("decimal   {decimal}");
        match result.argmin_j {
            Some(j) => println!("argmin j  {j}"),
            None => println!("argmin j  -"),
        }
    }
    Ok(if result.value.is_zero() { EXIT_INFEASIBLE } else { EXIT_OK })
}

fn cmd_gate(
    task: TaskArgs,
    universal: bool,
    normalization_u: Option<usize>,
    export: Option<PathBuf>,
) -> Result<u8, Failure> {
    let gate = if universal {
        if task.access < 0 {
            return Err(Failure::argument("--k must be nonnegative"));
        }
        let mut spec = UniversalGateSpec::new(task.access as usize, task.add_up + task.add_down, task.add_up);
        spec.normalization_u = normalization_u;
        universal_gate(&spec)?
    } else {
        let task = validate_task(task.raw()?).map_err(|r| Failure::argument(r.to_string()))?;
        synthesize(&task)?
    };
    let body = serde_json::to_string_pretty(&gate).expect("gates serialize");
    match export {
        Some(path) => {
            fs::write(&path, body + "\n").map_err(|e| Failure {
                code: EXIT_RESOURCE,
                message: format!("cannot write {}: {e}", path.display()),
            })?;
            print_gate_summary(&gate);
            println!("wrote     {}", path.display());
        }
        None => println!("{body}"),
    }
    Ok(EXIT_OK)
}

fn print_gate_summary(gate: &GateOperator) {
    println!(
        "gate      {} -> {} qubits, m1 shift {}{}",
        gate.k_in(),
        gate.k_out(),
        gate.shift(),
        if gate.is_universal() { ", universal" } else { "" }
    );
    for u in 0..=gate.k_in() {
        if let Some(v) = gate.target_weight(u) {
            let c2 = gate.radicand(u);
            println!("  u={u} -> v={v}  c^2 = {c2}  ({})", c2.to_decimal_string(DECIMAL_DIGITS));
        }
    }
}

fn print_report(r: &VerificationReport, format: Format) {
    if format.jsonl {
        println!("{}", to_json(r));
        return;
    }
    if format.json {
        return;
    }
    let subject = to_json(&r.subject);
    println!(
        "{} {subject} expected {} ({}) measured {:.12} fidelity {}",
        if r.passed { "PASS" } else { "FAIL" },
        r.expected_probability,
        r.expected_probability.to_decimal_string(DECIMAL_DIGITS),
        r.success_probability,
        r.fidelity.map_or("-".into(), |f| format!("{f:.12}")),
    );
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    sweep_n: Option<(usize, usize)>,
    max_change: usize,
    gate: Option<PathBuf>,
    n: Option<usize>,
    m1: Option<usize>,
    tol: f64,
    format: Format,
    limit: DenseLimit,
) -> Result<u8, Failure> {
    let tolerances = Tolerances::uniform(tol);
    let reports = match (gate, sweep_n) {
        (Some(path), _) => {
            let text = fs::read_to_string(&path).map_err(|e| Failure {
                code: EXIT_RESOURCE,
                message: format!("cannot read {}: {e}", path.display()),
            })?;
            let gate: GateOperator = serde_json::from_str(&text)
                .map_err(|e| Failure::argument(format!("invalid gate file {}: {e}", path.display())))?;
            let (n, m1) = (n.expect("required by clap"), m1.expect("required by clap"));
            limit.check_vector(n + gate.k_out())?;
            vec![verify_gate(&gate, n, m1, &tolerances, &limit)]
        }
        (None, Some((lo, hi))) => {
            let config = SweepConfig {
                tolerances,
                limit,
                ..SweepConfig::new(lo, hi, max_change)
            };
            sweep::run(&config)?.reports
        }
        (None, None) => return Err(Failure::argument("give --sweep-n a..b or --gate PATH")),
    };
    for r in &reports {
        print_report(r, format);
    }
    let passed = reports.iter().filter(|r| r.passed).count();
    let failed = reports.len() - passed;
    if format.json {
        println!("{}", json!({"reports": reports, "passed": passed, "failed": failed}));
    } else if format.jsonl {
        println!("{}", json!({"summary": {"passed": passed, "failed": failed}}));
    } else {
        println!("summary: {passed} passed, {failed} failed");
    }
    Ok(if failed == 0 { EXIT_OK } else { EXIT_VERIFY_FAILED })
}

fn run(cli: Cli) -> Result<u8, Failure> {
    let limit = match cli.max_qubits {
        Some(q) => DenseLimit::new(q),
        None => DenseLimit::from_env()?,
    };
    match cli.command {
        Command::Feasible { task, format } => cmd_feasible(task, format),
        Command::Pmax { task, format } => cmd_pmax(task, format),
        Command::Gate {
            task,
            universal,
            normalization_u,
            export,
        } => cmd_gate(task, universal, normalization_u, export),
        Command::Verify {
            sweep_n,
            max_change,
            gate,
            n,
            m1,
            tol,
            format,
        } => cmd_verify(sweep_n, max_change, gate, n, m1, tol, format, limit),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(io::stderr(), "error: {}", f.message);
            f.code
        }
    };
    let _ = io::stdout().flush();
    ExitCode::from(code)
}
