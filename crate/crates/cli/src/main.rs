//! Command-line front end: spectra, relation listings, Fredholm tables and
//! the full verification run.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use qdirac::braiding::{braiding_op, spectral_split};
use qdirac::clifford::{build_clifford, CliffordAlgebra};
use qdirac::dirac::build_dirac;
use qdirac::fredholm::{build_truncation, commutator_decay, trace_tail, Chirality};
use qdirac::invariant::invariant_form;
use qdirac::repr::build_irrep;
use qdirac::verify::{run_all, VerifyConfig};
use qdirac::{Exact, Numeric, QField, Spin};

#[derive(Parser)]
#[command(name = "qdirac", version, about = "q-deformed Clifford algebra and Dirac operator on U_q(su(2))")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Eigenvalues of D on V_l ⊗ Σ with multiplicities.
    Spectrum(SpectrumArgs),
    /// Run every verification suite; exit 1 if any fails.
    Verify(VerifyArgs),
    /// The Clifford relations in canonical text.
    Relations(RelationsArgs),
    /// Sign operator values, trace tails and commutator coefficients.
    Fredholm(FredholmArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

/// `exact` or a positive real different from 1.
#[derive(Clone, Copy, Debug, PartialEq)]
enum QArg {
    Exact,
    Value(f64),
}

fn parse_q(s: &str) -> Result<QArg, String> {
    if s.eq_ignore_ascii_case("exact") {
        return Ok(QArg::Exact);
    }
    let v: f64 = s.parse().map_err(|_| format!("expected `exact` or a number, got `{s}`"))?;
    if !(v > 0.0) || !v.is_finite() {
        return Err(format!("q must be positive, got {v}"));
    }
    if v == 1.0 {
        return Err("q = 1 is the classical point and is not accepted here".into());
    }
    Ok(QArg::Value(v))
}

fn parse_spin(s: &str) -> Result<Spin, String> {
    s.parse::<Spin>().map_err(|e| e.to_string())
}

fn parse_tol(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        _ => Err(format!("tolerance must be a positive number, got `{s}`")),
    }
}

/// A signed half-integer such as `-1`, `1/2` or `-1.5`.
fn parse_shift(s: &str) -> Result<f64, String> {
    let (sign, body) = match s.trim().strip_prefix('-') {
        Some(rest) => (-1.0, rest),
        None => (1.0, s.trim()),
    };
    let v = sign * body.parse::<Spin>().map_err(|_| format!("expected a half-integer, got `{s}`"))?.value();
    if v.abs() > 4.0 {
        return Err(format!("shift must be a half-integer with |k| <= 4, got {v}"));
    }
    Ok(v)
}

#[derive(Args)]
struct Output {
    /// Write to this file instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SpectrumArgs {
    #[arg(long, value_parser = parse_spin, allow_hyphen_values = true)]
    l: Spin,
    #[arg(long, value_parser = parse_q, default_value = "exact")]
    q: QArg,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct VerifyArgs {
    /// Numeric evaluation point; defaults to 0.5, 1.1 and 2.0.
    #[arg(long, value_parser = parse_q)]
    q: Option<QArg>,
    #[arg(long, value_parser = parse_tol)]
    tol: Option<f64>,
    #[arg(long, value_parser = parse_spin, default_value = "200")]
    jmax: Spin,
    /// Test hook that corrupts one Clifford coefficient (`demo`).
    #[arg(long)]
    corrupt: Option<Corrupt>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    #[command(flatten)]
    output: Output,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Corrupt {
    Demo,
}

#[derive(Args)]
struct RelationsArgs {
    #[arg(long, value_parser = parse_q, default_value = "exact")]
    q: QArg,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct FredholmArgs {
    #[arg(long, value_parser = parse_spin, default_value = "40")]
    jmax: Spin,
    #[arg(long, value_parser = parse_q, default_value = "1.5")]
    q: QArg,
    #[arg(long, value_parser = parse_shift, default_value = "0.5", allow_hyphen_values = true)]
    shift: f64,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[command(flatten)]
    output: Output,
}

/// Failure classes mapped to exit codes.
enum Failure {
    Usage(anyhow::Error),
    Verification(String),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Usage(e)
    }
}

fn emit(output: &Output, text: &str) -> anyhow::Result<()> {
    match &output.out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

/// Expanded Laurent form without the enclosing parentheses.
fn laurent_text<F: QField>(field: &F, x: &F::S) -> String {
    let s = field.to_qvalue(x).to_string();
    match s.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
        Some(inner) if !inner.contains('(') => inner.to_string(),
        _ => s,
    }
}

#[derive(Serialize)]
struct SpectrumEntry {
    eigenvalue: serde_json::Value,
    multiplicity: usize,
}

fn spectrum_entries<F: QField>(field: &F, l: Spin, exact: bool) -> anyhow::Result<Vec<SpectrumEntry>> {
    let d = build_dirac(field)?;
    let spec = d.spectrum(l)?;
    Ok(spec
        .into_iter()
        .map(|(v, m)| SpectrumEntry {
            eigenvalue: if exact {
                serde_json::Value::String(laurent_text(field, &v))
            } else {
                serde_json::json!(field.to_f64(&v))
            },
            multiplicity: m,
        })
        .collect())
}

fn cmd_spectrum(args: &SpectrumArgs) -> Result<(), Failure> {
    let entries = match args.q {
        QArg::Exact => spectrum_entries(&Exact, args.l, true)?,
        QArg::Value(q0) => spectrum_entries(&Numeric::new(q0).map_err(anyhow::Error::from)?, args.l, false)?,
    };
    let text = match args.format {
        Format::Json => serde_json::to_string_pretty(&entries).map_err(anyhow::Error::from)? + "\n",
        Format::Csv => {
            let mut s = String::from("eigenvalue,multiplicity\n");
            for e in &entries {
                let v = match &e.eigenvalue {
                    serde_json::Value::String(s) => s.clone(),
                    other => other.to_string(),
                };
                let _ = writeln!(s, "{v},{}", e.multiplicity);
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            for e in &entries {
                let v = match &e.eigenvalue {
                    serde_json::Value::String(s) => s.clone(),
                    other => other.to_string(),
                };
                let _ = writeln!(s, "{v}  x{}", e.multiplicity);
            }
            s
        }
    };
    emit(&args.output, &text)?;
    Ok(())
}

#[derive(Serialize)]
struct CheckEntry {
    criterion: u8,
    claim: &'static str,
    passed: bool,
    residual: Option<f64>,
    detail: String,
}

fn cmd_verify(args: &VerifyArgs) -> Result<(), Failure> {
    let mut cfg = VerifyConfig {
        j_max: args.jmax,
        corrupt: args.corrupt.is_some(),
        ..VerifyConfig::default()
    };
    if let Some(QArg::Value(q0)) = args.q {
        cfg.points = vec![q0];
    }
    if let Some(tol) = args.tol {
        cfg.tol = tol;
    }
    let checks = run_all(&cfg);
    let failed: Vec<String> = checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| format!("criterion {}: {}", c.criterion, c.detail))
        .collect();
    let text = match args.format {
        Format::Json => {
            let entries: Vec<CheckEntry> = checks
                .iter()
                .map(|c| CheckEntry {
                    criterion: c.criterion,
                    claim: c.claim,
                    passed: c.passed,
                    residual: c.residual,
                    detail: c.detail.clone(),
                })
                .collect();
            serde_json::to_string_pretty(&entries).map_err(anyhow::Error::from)? + "\n"
        }
        Format::Csv => {
            let mut s = String::from("criterion,passed,residual\n");
            for c in &checks {
                let r = c.residual.map(|r| format!("{r:e}")).unwrap_or_default();
                let _ = writeln!(s, "{},{},{r}", c.criterion, c.passed);
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            for c in &checks {
                let _ = writeln!(s, "{c}");
            }
            let passed = checks.iter().filter(|c| c.passed).count();
            let _ = writeln!(s, "{passed}/{} suites passed", checks.len());
            s
        }
    };
    emit(&args.output, &text)?;
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Verification(failed.join("\n")))
    }
}

fn clifford_at<F: QField>(field: &F) -> anyhow::Result<CliffordAlgebra<F>> {
    let v = build_irrep(Spin::ONE, field);
    let form = invariant_form(&v)?;
    let split = spectral_split(&braiding_op(Spin::ONE, Spin::ONE, field))?;
    Ok(build_clifford(&v, &form, &split)?)
}

fn relation_lines<F: QField>(field: &F) -> anyhow::Result<Vec<String>> {
    let c = clifford_at(field)?;
    Ok(c.display_relations().iter().map(|r| c.relation_text(r)).collect())
}

fn cmd_relations(args: &RelationsArgs) -> Result<(), Failure> {
    let lines = match args.q {
        QArg::Exact => relation_lines(&Exact)?,
        QArg::Value(q0) => relation_lines(&Numeric::new(q0).map_err(anyhow::Error::from)?)?,
    };
    let text = match args.format {
        Format::Json => serde_json::to_string_pretty(&lines).map_err(anyhow::Error::from)? + "\n",
        Format::Text | Format::Csv => lines.iter().map(|l| format!("{l}\n")).collect(),
    };
    emit(&args.output, &text)?;
    Ok(())
}

#[derive(Serialize)]
struct FredholmRow {
    j: String,
    f_up: f64,
    f_down: Option<f64>,
    tail: f64,
    c_j: Option<f64>,
}

fn cmd_fredholm(args: &FredholmArgs) -> Result<(), Failure> {
    let q0 = match args.q {
        QArg::Value(q0) => q0,
        QArg::Exact => return Err(Failure::Usage(anyhow::anyhow!("fredholm needs a numeric --q"))),
    };
    let h = build_truncation(args.jmax, q0).map_err(anyhow::Error::from)?;
    let f = h.sign_operator();
    let tail = trace_tail(args.jmax, q0).map_err(anyhow::Error::from)?;
    let decay = commutator_decay(args.shift, args.jmax, q0).map_err(anyhow::Error::from)?;
    let rows: Vec<FredholmRow> = tail
        .tails()
        .into_iter()
        .map(|(j, t)| FredholmRow {
            j: j.to_string(),
            f_up: f.value(j, Chirality::Up).unwrap_or(f64::NAN),
            f_down: f.value(j, Chirality::Down),
            tail: t,
            c_j: decay.values.iter().find(|(k, _)| *k == j).map(|p| p.1),
        })
        .collect();
    let text = match args.format {
        Format::Json => serde_json::to_string_pretty(&rows).map_err(anyhow::Error::from)? + "\n",
        Format::Csv | Format::Text => {
            let opt = |x: Option<f64>| x.map(|v| format!("{v:e}")).unwrap_or_default();
            let mut s = String::from("j,F_up,F_down,tail,c_j\n");
            for r in &rows {
                let _ = writeln!(s, "{},{:e},{},{:e},{}", r.j, r.f_up, opt(r.f_down), r.tail, opt(r.c_j));
            }
            s
        }
    };
    emit(&args.output, &text)?;
    Ok(())
}

fn run(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Spectrum(a) => cmd_spectrum(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Relations(a) => cmd_relations(a),
        Command::Fredholm(a) => cmd_fredholm(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed:\n{msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
