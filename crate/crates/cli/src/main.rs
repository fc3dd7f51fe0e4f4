mod commands;
mod input;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use report::{Format, Report};

/// Upper bound on --m-max; geodesic enumeration is exponential in the length.
pub const M_MAX_LIMIT: usize = 32;

#[derive(Parser)]
#[command(name = "lefschetz", version, about = "Exact checks for p-adic spectra, contraction regions, Euler characteristics and graph trace formulas")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Eigenvalue valuations of a rational matrix via Newton polygons.
    Newton(ParamArgs),
    /// Adjoint spectra, λ(am), the (AM)~ test and the determinant identity.
    Region(ParamArgs),
    /// Higher Euler characteristics, central extensions and covolumes.
    Euler(ParamArgs),
    /// Geometric, transfer-trace and spectral sides on a regular graph.
    Lefschetz(GraphArgs),
    /// Hecke recurrence and spectral mapping on a regular graph.
    Hecke(HeckeArgs),
}

#[derive(Args)]
struct Common {
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Seed for randomized suites.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Record wall-clock time in `elapsed_ms` (otherwise null, keeping reports reproducible).
    #[arg(long)]
    timing: bool,
}

#[derive(Args)]
struct ParamArgs {
    /// Parameter file; omit when using --random.
    input: Option<PathBuf>,
    /// Run a seeded randomized suite of this many cases instead of reading a file.
    #[arg(long)]
    random: Option<usize>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct GraphArgs {
    graph: PathBuf,
    #[arg(long, default_value_t = 12)]
    m_max: usize,
    /// Edge-turn file with lines `turn <edge-index> <p/q or decimal>`.
    #[arg(long, conflicts_with = "random")]
    twist: Option<PathBuf>,
    /// Check this many random unitary edge characters.
    #[arg(long)]
    random: Option<usize>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct HeckeArgs {
    graph: PathBuf,
    #[arg(long, default_value_t = 12)]
    m_max: usize,
    #[command(flatten)]
    common: Common,
}

fn check_m_max(m: usize) -> Result<usize> {
    if m == 0 {
        bail!("--m-max must be at least 1");
    }
    if m > M_MAX_LIMIT {
        bail!("--m-max {m} exceeds the guardrail of {M_MAX_LIMIT}");
    }
    Ok(m)
}

fn param_source(args: &ParamArgs) -> Result<commands::Source> {
    match (&args.input, args.random) {
        (Some(_), Some(_)) => bail!("give either an input file or --random, not both"),
        (Some(p), None) => Ok(commands::Source::File(p.clone())),
        (None, Some(n)) => Ok(commands::Source::Random { cases: n, seed: args.common.seed }),
        (None, None) => bail!("an input file or --random <n> is required"),
    }
}

fn run(cli: &Cli) -> Result<(Report, &Common)> {
    let start = Instant::now();
    let (mut report, common) = match &cli.command {
        Command::Newton(a) => (commands::newton(param_source(a)?)?, &a.common),
        Command::Region(a) => (commands::region(param_source(a)?)?, &a.common),
        Command::Euler(a) => (commands::euler(param_source(a)?)?, &a.common),
        Command::Lefschetz(a) => {
            let twist = match (&a.twist, a.random) {
                (Some(p), _) => commands::Twist::File(p.clone()),
                (None, Some(n)) => commands::Twist::Random { count: n, seed: a.common.seed },
                (None, None) => commands::Twist::Trivial,
            };
            (commands::lefschetz(&a.graph, check_m_max(a.m_max)?, twist)?, &a.common)
        }
        Command::Hecke(a) => (commands::hecke(&a.graph, check_m_max(a.m_max)?)?, &a.common),
    };
    if let Some(obj) = report.document.as_object_mut() {
        let elapsed = common.timing.then(|| start.elapsed().as_millis() as u64);
        obj.insert("elapsed_ms".into(), serde_json::json!(elapsed));
    }
    Ok((report, common))
}

fn emit(report: &Report, common: &Common) -> Result<()> {
    let text = report.render(common.format)?;
    match &common.out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|(report, common)| emit(&report, common).map(|_| report.pass));
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
