use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use symplectic_lcs::circuit::{Circuit, Format, Metric};
use symplectic_lcs::clifford::{decompose, lower_to_gates};
use symplectic_lcs::codes::{StabilizerCode, BUILTIN_NAMES};
use symplectic_lcs::error::Error;
use symplectic_lcs::f2::{F2Matrix, F2Vector};
use symplectic_lcs::lcs::{count_solutions, synthesize, verify_target, LogicalTarget, SynthMode, SynthOptions};
use symplectic_lcs::pauli::PauliElement;
use symplectic_lcs::symplectic::{solve_all, ConstraintSystem, SolveMode, SolveOutput, SympMatrix, DEFAULT_CEILING};

/// Enumerate, decompose and verify physical Clifford circuits that realize a
/// logical Clifford on a stabilizer code.
#[derive(Parser)]
#[command(name = "lcs", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the builtin codes in code-file format.
    Codes,
    /// Synthesize every physical realization of a logical Clifford.
    Synth(SynthArgs),
    /// Factor a symplectic matrix into elementary forms and lower it to gates.
    Decompose(DecomposeArgs),
    /// Check a physical circuit against a code and logical target.
    Verify(VerifyArgs),
    /// Solve raw symplectic constraints `x F = y`.
    Solve(SolveArgs),
}

#[derive(Args)]
struct TargetArgs {
    /// `builtin:NAME` or a path to a code file.
    #[arg(long)]
    code: String,
    /// Logical gate list, e.g. "H 1; CNOT 1 2".
    #[arg(long, conflicts_with = "target_file", required_unless_present = "target_file")]
    gates: Option<String>,
    /// Conjugation-table file for the logical target.
    #[arg(long)]
    target_file: Option<PathBuf>,
    /// Comma-separated signed images of the stabilizer generators.
    #[arg(long)]
    stab_images: Option<String>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    All,
    First,
    Count,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Text,
    Json,
    Qasm,
}

#[derive(Args)]
struct SynthArgs {
    #[command(flatten)]
    target: TargetArgs,
    #[arg(long, value_enum, default_value = "all")]
    mode: ModeArg,
    /// Ranking metric: depth, two-qubit-depth, two-qubit, total, avoid:Q,.. or a `+` list.
    #[arg(long)]
    metric: Option<String>,
    #[arg(long, value_enum, default_value = "text")]
    format: FormatArg,
    /// Refuse to enumerate more solutions than this.
    #[arg(long, default_value_t = DEFAULT_CEILING)]
    ceiling: u64,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct DecomposeArgs {
    /// File with one 0/1 row per line.
    #[arg(long)]
    matrix: PathBuf,
    #[arg(long, value_enum, default_value = "text")]
    format: FormatArg,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    target: TargetArgs,
    /// Gate-list file for the physical circuit.
    #[arg(long)]
    circuit: PathBuf,
    #[arg(long, value_enum, default_value = "text")]
    format: FormatArg,
}

#[derive(Args)]
struct SolveArgs {
    /// File of `x -> y` lines with 0/1 vectors of length 2m.
    #[arg(long)]
    constraints: PathBuf,
    #[arg(long, value_enum, default_value = "all")]
    mode: ModeArg,
    #[arg(long, default_value_t = DEFAULT_CEILING)]
    ceiling: u64,
    #[arg(long)]
    output: Option<PathBuf>,
}

enum Failure {
    Lib(Error),
    Io(PathBuf, std::io::Error),
    Usage(String),
    VerifyFailed(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Io(..) | Failure::Usage(_) => 1,
            Failure::VerifyFailed(_) => 5,
            Failure::Lib(e) => match e {
                Error::InvalidCode(_) | Error::NotSymplectic => 2,
                Error::InconsistentTarget(_)
                | Error::IncompatibleInnerProducts { .. }
                | Error::DependentInputs
                | Error::InconsistentInput(_)
                | Error::NoSolution => 3,
                Error::CeilingExceeded { .. } => 4,
                _ => 1,
            },
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Lib(e) => e.to_string(),
            Failure::Io(p, e) => format!("{}: {e}", p.display()),
            Failure::Usage(s) => s.clone(),
            Failure::VerifyFailed(s) => s.clone(),
        }
    }
}

type Run<T> = Result<T, Failure>;

fn read(path: &Path) -> Run<String> {
    std::fs::read_to_string(path).map_err(|e| Failure::Io(path.to_path_buf(), e))
}

fn emit(output: Option<&Path>, text: &str) -> Run<()> {
    match output {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Io(p.to_path_buf(), e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_code(source: &str) -> Run<StabilizerCode> {
    match source.strip_prefix("builtin:") {
        Some(name) => Ok(StabilizerCode::builtin(name)?),
        None => Ok(StabilizerCode::parse(&read(Path::new(source))?)?),
    }
}

fn load_target(args: &TargetArgs) -> Run<(StabilizerCode, LogicalTarget, Option<Vec<PauliElement>>)> {
    let code = load_code(&args.code)?;
    let k = code.k();
    let target = match (&args.gates, &args.target_file) {
        (Some(g), None) => LogicalTarget::parse_gates(k, g)?,
        (None, Some(p)) => LogicalTarget::parse_table(k, &read(p)?)?,
        _ => return Err(Failure::Usage("give exactly one of --gates and --target-file".into())),
    };
    let stab_images = match &args.stab_images {
        None => None,
        Some(s) => Some(s.split(',').map(|p| p.trim().parse()).collect::<Result<Vec<PauliElement>, _>>()?),
    };
    Ok((code, target, stab_images))
}

fn describe(code: &StabilizerCode) -> String {
    format!("{} [[{},{}]]", code.name().unwrap_or("custom"), code.m(), code.k())
}

fn json(value: serde_json::Value) -> String {
    serde_json::to_string_pretty(&value).expect("serializable") + "\n"
}

fn cmd_codes() -> Run<()> {
    let mut out = String::new();
    for name in BUILTIN_NAMES {
        let code = StabilizerCode::builtin(name)?;
        writeln!(out, "# builtin:{name} {}", describe(&code)).unwrap();
        out.push_str(&code.to_text());
        out.push('\n');
    }
    emit(None, &out)
}

fn cmd_synth(a: &SynthArgs) -> Run<()> {
    let (code, target, stab_images) = load_target(&a.target)?;
    let out_path = a.output.as_deref();
    if a.mode == ModeArg::Count {
        let count = count_solutions(&code, &target, stab_images.as_deref())?;
        let text = match a.format {
            FormatArg::Json => json(serde_json::json!({ "count": count.to_string(), "log2": count.log2() })),
            _ => format!("{count}\n"),
        };
        return emit(out_path, &text);
    }
    let metric = a.metric.as_deref().map(str::parse::<Metric>).transpose()?;
    let options = SynthOptions {
        mode: if a.mode == ModeArg::First { SynthMode::First } else { SynthMode::All },
        metric,
        ceiling: a.ceiling,
        stab_images,
    };
    let sols = synthesize(&code, &target, &options)?;
    let text = match a.format {
        FormatArg::Json => {
            let records: Vec<_> = sols.iter().map(|s| s.to_record()).collect();
            json(serde_json::json!({
                "code": describe(&code),
                "count": sols.len(),
                "solutions": records,
            }))
        }
        FormatArg::Qasm => {
            let mut s = String::new();
            for (rank, sol) in sols.iter().enumerate() {
                writeln!(s, "// solution {} (index {})", rank + 1, sol.index).unwrap();
                s.push_str(&sol.circuit.emit(Format::Qasm));
            }
            s
        }
        FormatArg::Text => {
            let mut s = format!("code {}\nsolutions {}\n", describe(&code), sols.len());
            for (rank, sol) in sols.iter().enumerate() {
                let m = &sol.metrics;
                let touched: Vec<String> = m.qubits_touched.iter().map(usize::to_string).collect();
                writeln!(s, "\nsolution {} (index {})", rank + 1, sol.index).unwrap();
                writeln!(s, "matrix {}", sol.matrix.hex_rows().join(" ")).unwrap();
                writeln!(s, "circuit {}", sol.circuit).unwrap();
                writeln!(s, "correction {}", sol.correction).unwrap();
                writeln!(
                    s,
                    "metrics depth={} two-qubit-depth={} two-qubit={} total={} touched={}",
                    m.depth,
                    m.two_qubit_depth,
                    m.two_qubit_count,
                    m.total_gates,
                    touched.join(",")
                )
                .unwrap();
            }
            s
        }
    };
    emit(out_path, &text)
}

fn cmd_decompose(a: &DecomposeArgs) -> Run<()> {
    let raw = F2Matrix::parse(&read(&a.matrix)?)?;
    let f = SympMatrix::new(raw)?;
    let d = decompose(&f)?;
    let circuit = lower_to_gates(&d)?;
    let text = match a.format {
        FormatArg::Json => json(serde_json::json!({ "decomposition": d.to_record(), "gates": circuit.gates() })),
        FormatArg::Qasm => circuit.emit(Format::Qasm),
        FormatArg::Text => {
            let mut s = String::new();
            let block = |s: &mut String, name: &str, m: &F2Matrix| {
                writeln!(s, "{name}").unwrap();
                for r in m.rows() {
                    writeln!(s, "{}", r.to_bit_string()).unwrap();
                }
            };
            block(&mut s, "Q1", &d.q1);
            block(&mut s, "R1", &d.r1);
            writeln!(s, "k {}", d.k).unwrap();
            block(&mut s, "R2", &d.r2);
            block(&mut s, "Q2", &d.q2);
            writeln!(s, "circuit").unwrap();
            s.push_str(&circuit.emit(Format::Text));
            s
        }
    };
    emit(a.output.as_deref(), &text)
}

fn cmd_verify(a: &VerifyArgs) -> Run<()> {
    let (code, target, stab_images) = load_target(&a.target)?;
    let circuit = Circuit::parse(code.m(), &read(&a.circuit)?)?;
    let report = verify_target(&circuit, &code, &target, stab_images.as_deref())?;
    let text = match a.format {
        FormatArg::Json => json(serde_json::to_value(&report).expect("serializable")),
        _ => {
            let mut s = String::new();
            for e in &report.entries {
                if e.ok {
                    writeln!(s, "ok    {:<8} {} -> {}", e.label, e.input, e.actual).unwrap();
                } else {
                    writeln!(s, "FAIL  {:<8} {} -> {} (expected {})", e.label, e.input, e.actual, e.expected).unwrap();
                }
            }
            let passed = report.entries.iter().filter(|e| e.ok).count();
            writeln!(s, "verified {passed}/{}", report.entries.len()).unwrap();
            s
        }
    };
    emit(None, &text)?;
    if report.ok {
        Ok(())
    } else {
        let bad: Vec<_> = report.entries.iter().filter(|e| !e.ok).map(|e| e.label.as_str()).collect();
        Err(Failure::VerifyFailed(format!("verification failed: {}", bad.join(", "))))
    }
}

fn parse_constraints(text: &str) -> Run<(Vec<F2Vector>, Vec<F2Vector>)> {
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let (x, y) = line
            .split_once("->")
            .ok_or_else(|| Error::Parse { line: n + 1, msg: "expected `x -> y`".into() })?;
        let parse = |s: &str| {
            F2Vector::parse(s.trim()).map_err(|e| Error::Parse { line: n + 1, msg: e.to_string() })
        };
        xs.push(parse(x)?);
        ys.push(parse(y)?);
    }
    Ok((xs, ys))
}

fn cmd_solve(a: &SolveArgs) -> Run<()> {
    let (xs, ys) = parse_constraints(&read(&a.constraints)?)?;
    let sys = ConstraintSystem::from_pairs(&xs, &ys)?;
    let mode = match a.mode {
        ModeArg::All => SolveMode::Enumerate,
        ModeArg::First => SolveMode::First,
        ModeArg::Count => SolveMode::Count,
    };
    let text = match solve_all(&sys, mode, a.ceiling)? {
        SolveOutput::Count(c) => format!("{c}\n"),
        SolveOutput::Solutions(fs) => {
            let blocks: Vec<String> = fs.iter().map(|f| f.hex_rows().join("\n") + "\n").collect();
            blocks.join("\n")
        }
    };
    emit(a.output.as_deref(), &text)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Codes => cmd_codes(),
        Command::Synth(a) => cmd_synth(a),
        Command::Decompose(a) => cmd_decompose(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Solve(a) => cmd_solve(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("lcs: {}", f.message());
            ExitCode::from(f.exit_code())
        }
    }
}
