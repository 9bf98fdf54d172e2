//! `triqc`: synthesize, verify, simulate and count three-qubit circuits.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use triqc::batch::Execution;
use triqc::circuit::{counts, emit_text, parse_text, simulate, Circuit};
use triqc::library::named_gate;
use triqc::matfile::{emit_matrix, parse_matrix};
use triqc::numkit::{distance_up_to_phase, unitarity_deviation, ComplexMatrix};
use triqc::selftest::{run_selftest, SelftestConfig};
use triqc::synth2q::synth_u4;
use triqc::synth3q::{synthesize_with, SynthOptions, MAX_CNOT, MAX_ONE_QUBIT};

#[derive(Parser)]
#[command(
    name = "triqc",
    version,
    about = "Three-qubit unitary synthesis over {RY, RZ, PH, CNOT}"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Synthesize a circuit for a unitary and write it in circuit text format.
    Decompose(DecomposeArgs),
    /// Compare a circuit against a unitary up to global phase.
    Verify(VerifyArgs),
    /// Print the unitary of a circuit in matrix file format.
    Simulate(SimulateArgs),
    /// Print gate counts of a circuit.
    Counts(CountsArgs),
    /// Run the seeded self-test battery.
    Selftest(SelftestArgs),
}

#[derive(Args)]
struct TolArg {
    /// Distance tolerance.
    #[arg(long, env = "TRIQC_TOL", default_value_t = 1e-8, value_parser = parse_tol)]
    tol: f64,
}

#[derive(Args)]
struct DecomposeArgs {
    /// Matrix file (`dim n` header, then rows of `(re,im)` tokens).
    #[arg(required_unless_present = "gate", conflicts_with = "gate")]
    input: Option<PathBuf>,
    /// Builtin unitary: toffoli, fredkin, ccz, qft3, random:<seed>
    /// (with `--qubits 2`: cnot, cz, swap, qft2, random:<seed>).
    #[arg(long)]
    gate: Option<String>,
    /// Number of qubits; 2 routes to the two-qubit synthesizer.
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u8).range(2..=3))]
    qubits: u8,
    #[command(flatten)]
    tol: TolArg,
    /// Output path, `-` for stdout. Defaults to `<input>.qc`, or `<gate>.qc`
    /// with `:` replaced by `_`.
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Print the report as a JSON object.
    #[arg(long)]
    json: bool,
    /// Also report per-stage reconstruction residuals (three qubits only).
    #[arg(short, long)]
    verbose: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// `[MATRIX] CIRCUIT`; the matrix is omitted when `--gate` is given.
    #[arg(num_args = 1..=2, required = true, value_name = "FILE")]
    files: Vec<PathBuf>,
    /// Builtin unitary to verify against instead of a matrix file.
    #[arg(long)]
    gate: Option<String>,
    #[command(flatten)]
    tol: TolArg,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct SimulateArgs {
    circuit: PathBuf,
    /// Output path; stdout if omitted.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct CountsArgs {
    circuit: PathBuf,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct SelftestArgs {
    /// Cases per suite.
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    trials: u64,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    #[command(flatten)]
    tol: TolArg,
    /// Run trials on one thread.
    #[arg(long)]
    sequential: bool,
    #[arg(long)]
    json: bool,
}

fn parse_tol(s: &str) -> std::result::Result<f64, String> {
    match s.parse::<f64>() {
        Ok(t) if t.is_finite() && t > 0.0 => Ok(t),
        _ => Err(format!("`{s}` is not a positive finite number")),
    }
}

#[derive(Serialize)]
struct Report {
    distance: f64,
    cnot: usize,
    one_qubit: usize,
    global_phase: f64,
    elapsed_ms: f64,
}

impl Report {
    fn new(circuit: &Circuit, distance: f64, elapsed_ms: f64) -> Self {
        let c = counts(circuit);
        Self {
            distance,
            cnot: c.cnot,
            one_qubit: c.one_qubit,
            global_phase: circuit.global_phase,
            elapsed_ms,
        }
    }

    fn passed(&self, tol: f64) -> bool {
        self.distance <= tol && self.cnot <= MAX_CNOT && self.one_qubit <= MAX_ONE_QUBIT
    }

    fn print(&self, json: bool, tol: f64, out: &mut dyn Write) -> Result<()> {
        if json {
            writeln!(out, "{}", serde_json::to_string(self)?)?;
        } else {
            writeln!(out, "distance     {:.3e} (tol {tol:e})", self.distance)?;
            writeln!(out, "cnot         {} (bound {MAX_CNOT})", self.cnot)?;
            writeln!(
                out,
                "one_qubit    {} (bound {MAX_ONE_QUBIT})",
                self.one_qubit
            )?;
            writeln!(out, "global_phase {:.16e}", self.global_phase)?;
            writeln!(
                out,
                "status       {}",
                if self.passed(tol) { "PASS" } else { "FAIL" }
            )?;
        }
        Ok(())
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load_matrix(path: &Path) -> Result<ComplexMatrix> {
    parse_matrix(&read(path)?).with_context(|| format!("{}", path.display()))
}

fn load_circuit(path: &Path) -> Result<Circuit> {
    parse_text(&read(path)?).with_context(|| format!("{}", path.display()))
}

fn write_to(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) if p != Path::new("-") => {
            fs::write(p, text).with_context(|| format!("cannot write {}", p.display()))
        }
        _ => Ok(io::stdout().write_all(text.as_bytes())?),
    }
}

fn decompose(args: DecomposeArgs) -> Result<bool> {
    let n = args.qubits as usize;
    let dim = 1usize << n;
    let tol = args.tol.tol;
    let (u, default_out) = match (&args.input, &args.gate) {
        (Some(p), _) => {
            let mut out = p.clone().into_os_string();
            out.push(".qc");
            (load_matrix(p)?, PathBuf::from(out))
        }
        (None, Some(g)) => (
            named_gate(g, n)?,
            PathBuf::from(format!("{}.qc", g.replace(':', "_"))),
        ),
        (None, None) => unreachable!("clap requires a source"),
    };
    if u.dim() != dim {
        let hint = if u.dim() == 4 {
            "; use `--qubits 2` for two-qubit unitaries"
        } else {
            ""
        };
        bail!(
            "expected a {dim}x{dim} matrix for {n} qubits, found {0}x{0}{hint}",
            u.dim()
        );
    }
    let dev = unitarity_deviation(&u);
    if dev > tol {
        bail!("matrix is not unitary: ||u^dagger u - I||_F = {dev:.3e} exceeds tolerance {tol:e}");
    }

    let (circuit, report, residuals) = if n == 3 {
        let opts = SynthOptions {
            tol,
            verbose: args.verbose,
            ..Default::default()
        };
        let s = synthesize_with(&u, &opts)?;
        let r = Report::new(&s.circuit, s.distance, s.elapsed_ms);
        (s.circuit, r, s.residuals.map(|r| (r, opts.stage_tol)))
    } else {
        let start = Instant::now();
        let c = synth_u4(&u, (1, 2), 2)?;
        let d = distance_up_to_phase(&simulate(&c), &u)?;
        let r = Report::new(&c, d, start.elapsed().as_secs_f64() * 1e3);
        (c, r, None)
    };

    let out_path = args.output.unwrap_or(default_out);
    let to_stdout = out_path == Path::new("-");
    write_to(Some(&out_path), &emit_text(&circuit))?;
    // Keep stdout clean for the circuit when it goes there.
    let mut sink: Box<dyn Write> = if to_stdout {
        Box::new(io::stderr())
    } else {
        Box::new(io::stdout())
    };
    report.print(args.json, tol, &mut sink)?;
    if let Some((r, stage_tol)) = residuals {
        let mut err = io::stderr();
        writeln!(err, "factorization residual {:.3e}", r.factorization)?;
        for (k, d) in r.locals.iter().enumerate() {
            writeln!(err, "local layer {k} residual {d:.3e}")?;
        }
        let verdict = if r.within(stage_tol) {
            "within"
        } else {
            "exceeds"
        };
        writeln!(err, "stages {verdict} {stage_tol:e}")?;
    }
    if !to_stdout && !args.json {
        println!("output       {}", out_path.display());
    }
    Ok(report.passed(tol))
}

fn verify(args: VerifyArgs) -> Result<bool> {
    let (matrix, circuit_path) = match (&args.gate, args.files.as_slice()) {
        (Some(_), [c]) => (None, c),
        (None, [m, c]) => (Some(m), c),
        (Some(_), _) => bail!("with `--gate`, pass only the circuit file"),
        (None, _) => bail!("expected MATRIX and CIRCUIT files"),
    };
    let circuit = load_circuit(circuit_path)?;
    let n = circuit.n_qubits();
    let u = match (matrix, &args.gate) {
        (Some(p), _) => load_matrix(p)?,
        (None, Some(g)) => named_gate(g, n)?,
        (None, None) => unreachable!("checked above"),
    };
    let dim = 1usize << n;
    if u.dim() != dim {
        bail!(
            "dimension mismatch: circuit acts on {n} qubits ({dim}x{dim}) but the matrix is {0}x{0}",
            u.dim()
        );
    }
    let start = Instant::now();
    let d = distance_up_to_phase(&simulate(&circuit), &u)?;
    let report = Report::new(&circuit, d, start.elapsed().as_secs_f64() * 1e3);
    report.print(args.json, args.tol.tol, &mut io::stdout())?;
    Ok(d <= args.tol.tol)
}

fn counts_cmd(args: CountsArgs) -> Result<bool> {
    let c = load_circuit(&args.circuit)?;
    let n = counts(&c);
    if args.json {
        let v = serde_json::json!({
            "qubits": c.n_qubits(),
            "cnot": n.cnot,
            "one_qubit": n.one_qubit,
            "macros_h": n.macros_h,
        });
        println!("{v}");
    } else {
        println!("qubits    {}", c.n_qubits());
        println!("cnot      {}", n.cnot);
        println!("one_qubit {}", n.one_qubit);
        println!("macros_h  {}", n.macros_h);
    }
    Ok(true)
}

#[derive(Serialize)]
struct SuiteJson {
    name: &'static str,
    passed: bool,
    cases: usize,
    failures: usize,
    max_error: f64,
    tolerance: f64,
}

#[derive(Serialize)]
struct SelftestJson {
    passed: bool,
    max_distance: f64,
    max_cnot: usize,
    max_one_qubit: usize,
    suites: Vec<SuiteJson>,
}

fn selftest(args: SelftestArgs) -> Result<bool> {
    let cfg = SelftestConfig {
        trials: usize::try_from(args.trials)?,
        seed: args.seed,
        tol: args.tol.tol,
        execution: if args.sequential {
            Execution::Sequential
        } else {
            Execution::default()
        },
    };
    let r = run_selftest(&cfg);
    if args.json {
        let doc = SelftestJson {
            passed: r.passed(),
            max_distance: r.max_distance,
            max_cnot: r.max_cnot,
            max_one_qubit: r.max_one_qubit,
            suites: r
                .suites
                .iter()
                .map(|s| SuiteJson {
                    name: s.name,
                    passed: s.passed(),
                    cases: s.cases,
                    failures: s.failures,
                    max_error: s.max_error,
                    tolerance: s.tolerance,
                })
                .collect(),
        };
        println!("{}", serde_json::to_string(&doc)?);
    } else {
        println!("{r}");
    }
    Ok(r.passed())
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Decompose(a) => decompose(a),
        Command::Verify(a) => verify(a),
        Command::Simulate(a) => {
            let c = load_circuit(&a.circuit)?;
            write_to(a.output.as_deref(), &emit_matrix(&simulate(&c)))?;
            Ok(true)
        }
        Command::Counts(a) => counts_cmd(a),
        Command::Selftest(a) => selftest(a),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
