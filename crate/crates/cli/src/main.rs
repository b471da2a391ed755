#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod grid;
mod quantities;
mod table;
mod verify;

use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use dephrasure::dephrasure::{region_curves, ChannelParams};
use dephrasure::multiletter::{optimize_zdiag, repetition_ci_opt};
use dephrasure::pso::{optimize_code_ci, Parametrization, PsoConfig};
use serde::Serialize;
use serde_json::{json, Value};

use grid::Range;
use quantities::{evaluate_rows, Code, Quantity};
use table::{number, Format, Provenance, Table};
use verify::Suite;

#[derive(Parser)]
#[command(
    name = "dephrasure",
    version,
    about = "Coherent and private information of the dephrasure channel"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a quantity on a (p, q) grid or along q = slope·p.
    Sweep(SweepArgs),
    /// Per-letter rates of several codes along q = slope·p.
    Diagonal(DiagonalArgs),
    /// Run a verification suite; exits 1 if any check fails.
    Verify(VerifyArgs),
    /// Search for a good code at one (p, q).
    Optimize(OptimizeArgs),
    /// Region curves g, j, k as functions of p.
    Regions(RegionsArgs),
}

#[derive(Args, Serialize)]
struct OutputArgs {
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Args, Serialize)]
struct SweepArgs {
    #[arg(long, value_enum)]
    quantity: Quantity,
    /// lo:hi:steps
    #[arg(long, default_value = "0:0.5:201")]
    p_range: Range,
    /// lo:hi:steps; ignored with --diagonal-slope.
    #[arg(long, default_value = "0:0.5:201")]
    q_range: Range,
    /// Sample q = slope·p instead of the q range.
    #[arg(long)]
    diagonal_slope: Option<f64>,
    /// Channel uses for the repetition and Z-diagonal quantities.
    #[arg(long, default_value_t = 2)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Tolerance for the antidegradability check.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Serialize)]
struct DiagonalArgs {
    #[arg(long, default_value = "0.107:0.118:121")]
    p_range: Range,
    #[arg(long, default_value_t = 3.0)]
    diagonal_slope: f64,
    /// Comma-separated: single, repN, zdiagN (alias thetaN), chi3, private.
    #[arg(long, value_delimiter = ',', default_value = "rep1,rep2,rep3,rep4,rep5")]
    codes: Vec<Code>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Serialize)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    suite: Suite,
    /// Overrides the suite's main tolerance.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// JSON report file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Kind {
    /// PSO over every amplitude with a 2^n reference.
    Full,
    /// PSO over the four χ₃ coefficients (n = 3).
    Chi3,
    /// Schmidt weights of a Z-diagonal code.
    Zdiag,
    /// Weighted repetition code.
    Repetition,
}

#[derive(Args, Serialize)]
struct OptimizeArgs {
    #[arg(long)]
    p: f64,
    #[arg(long)]
    q: f64,
    #[arg(long, default_value_t = 2)]
    n: usize,
    #[arg(long, value_enum, default_value = "full")]
    kind: Kind,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    particles: Option<usize>,
    #[arg(long)]
    iterations: Option<usize>,
    /// Use the update rule's printed (repulsive) signs.
    #[arg(long)]
    literal_signs: bool,
    /// Draw the random coefficients per coordinate instead of per particle.
    #[arg(long)]
    per_dimension_draws: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct RegionsArgs {
    #[arg(long, default_value = "0:0.5:101")]
    p_range: Range,
    #[command(flatten)]
    output: OutputArgs,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Sweep(a) => sweep(&a).map(|_| true),
        Command::Diagonal(a) => diagonal(&a).map(|_| true),
        Command::Verify(a) => run_verify(&a),
        Command::Optimize(a) => optimize(&a).map(|_| true),
        Command::Regions(a) => regions(&a).map(|_| true),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn diagonal_points(p_range: &Range, slope: f64) -> anyhow::Result<Vec<(f64, f64)>> {
    if !(slope > 0.0) || slope * p_range.hi > 1.0 {
        bail!("diagonal slope {slope} must be positive and keep q = slope·p within [0, 1]");
    }
    Ok(p_range.points().into_iter().map(|p| (p, slope * p)).collect())
}

fn sweep(a: &SweepArgs) -> anyhow::Result<()> {
    let points = match a.diagonal_slope {
        Some(slope) => diagonal_points(&a.p_range, slope)?,
        None => {
            let qs = a.q_range.points();
            a.p_range
                .points()
                .into_iter()
                .flat_map(|p| qs.iter().map(move |&q| (p, q)))
                .collect()
        }
    };
    match a.quantity {
        Quantity::Regions => a.p_range.check_within(0.0, 0.5, "p")?,
        Quantity::RepetitionGap | Quantity::RepetitionRate | Quantity::ZdiagRate if a.n == 0 => {
            bail!("--n must be at least 1")
        }
        _ => {}
    }
    let rows = evaluate_rows(&points, |params| a.quantity.evaluate(params, a.n, a.seed, a.tol))?;
    let mut columns = vec!["p".to_string(), "q".to_string()];
    columns.extend(a.quantity.columns().into_iter().map(String::from));
    Table { columns, rows }.write(&Provenance::new("sweep", a), a.output.format, a.output.out.as_deref())
}

fn diagonal(a: &DiagonalArgs) -> anyhow::Result<()> {
    let points = diagonal_points(&a.p_range, a.diagonal_slope)?;
    let rows = evaluate_rows(&points, |params| {
        a.codes.iter().map(|c| c.rate(params, a.seed)).collect()
    })?;
    let mut columns = vec!["p".to_string(), "q".to_string()];
    columns.extend(a.codes.iter().map(|c| c.to_string()));
    Table { columns, rows }.write(
        &Provenance::new("diagonal", a),
        a.output.format,
        a.output.out.as_deref(),
    )
}

fn regions(a: &RegionsArgs) -> anyhow::Result<()> {
    a.p_range.check_within(0.0, 0.5, "p")?;
    let rows = a
        .p_range
        .points()
        .into_iter()
        .map(|p| {
            let c = region_curves(p)?;
            Ok(vec![p, c.g, c.j, c.k])
        })
        .collect::<anyhow::Result<Vec<_>>>()?;
    let columns = ["p", "g", "j", "k"].map(String::from).to_vec();
    Table { columns, rows }.write(&Provenance::new("regions", a), a.output.format, a.output.out.as_deref())
}

fn write_json(value: &Value, out: Option<&Path>) -> anyhow::Result<()> {
    let mut sink: Box<dyn Write> = match out {
        Some(path) => Box::new(File::create(path).with_context(|| format!("cannot write {}", path.display()))?),
        None => Box::new(io::stdout().lock()),
    };
    serde_json::to_writer_pretty(&mut sink, value)?;
    writeln!(sink)?;
    sink.flush()?;
    Ok(())
}

fn run_verify(a: &VerifyArgs) -> anyhow::Result<bool> {
    let tol = a.tol.unwrap_or(a.suite.default_tolerance());
    let report = verify::run(a.suite, tol, a.seed)?;
    let value = json!({ "provenance": Provenance::new("verify", a), "report": report });
    write_json(&value, a.out.as_deref())?;
    Ok(report.passed)
}

fn optimize(a: &OptimizeArgs) -> anyhow::Result<()> {
    let params = ChannelParams::new(a.p, a.q)?;
    if a.n == 0 {
        bail!("--n must be at least 1");
    }
    let mut config = PsoConfig {
        literal_signs: a.literal_signs,
        per_dimension_draws: a.per_dimension_draws,
        ..PsoConfig::with_seed(a.seed)
    };
    if let Some(n) = a.particles {
        config.n_particles = n;
    }
    if let Some(n) = a.iterations {
        config.max_iterations = n;
    }
    let mut result = json!({
        "provenance": Provenance::new("optimize", a),
        "kind": a.kind,
        "p": a.p,
        "q": a.q,
        "n": a.n,
        "seed": a.seed,
    });
    let fields = result.as_object_mut().expect("object");
    let value = match a.kind {
        Kind::Full | Kind::Chi3 => {
            let (kind, n) = match a.kind {
                Kind::Full => (Parametrization::Full, a.n),
                _ => (Parametrization::Chi3, 3),
            };
            let best = optimize_code_ci(params, n, kind, &config)?;
            fields.insert("n".into(), json!(n));
            fields.insert("ref_dim".into(), json!(best.code.ref_dim()));
            fields.insert(
                "amplitudes".into(),
                json!(best
                    .code
                    .amplitudes()
                    .iter()
                    .map(|z| [number(z.re), number(z.im)])
                    .collect::<Vec<_>>()),
            );
            fields.insert("config".into(), serde_json::to_value(&config)?);
            fields.insert("iterations_run".into(), json!(best.pso.iterations_run));
            fields.insert("evaluations".into(), json!(best.pso.evaluations));
            best.value
        }
        Kind::Zdiag => {
            let best = optimize_zdiag(params, a.n, a.seed)?;
            fields.insert(
                "schmidt".into(),
                json!(best.schmidt.iter().map(|&v| number(v)).collect::<Vec<_>>()),
            );
            best.value
        }
        Kind::Repetition => {
            let best = repetition_ci_opt(params, a.n)?;
            fields.insert("lambda_star".into(), number(best.lambda_star));
            best.value
        }
    };
    let n = fields["n"].as_u64().expect("n recorded") as f64;
    fields.insert("value".into(), number(value));
    fields.insert("rate".into(), number(value / n));
    write_json(&result, a.out.as_deref())
}
