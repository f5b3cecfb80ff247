use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

mod commands;
mod formats;
mod render;

use commands::Outcome;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{}: schema violation: {source}", path.display())]
    Schema { path: PathBuf, source: serde_json::Error },
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Core(#[from] nccover::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EmitKind {
    Monomial,
    Partition,
}

/// Build finite cyclic covers and audit their covering data.
#[derive(Debug, Parser)]
#[command(name = "nccover", version)]
struct Cli {
    #[arg(long, value_enum, default_value = "json", global = true)]
    format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Record the wall-clock time in the report metadata.
    #[arg(long, global = true)]
    stamp: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// The n-fold circle cover with its monomial and partition frames.
    CircleCover {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = nccover::circle::DEFAULT_GRID)]
        grid: usize,
        #[arg(long, default_value_t = nccover::circle::DEFAULT_DEGREE)]
        degree: usize,
        #[arg(long, default_value_t = nccover::verifier::GRID_TOLERANCE)]
        tol_grid: f64,
        #[arg(long, default_value_t = nccover::verifier::COEFFICIENT_TOLERANCE)]
        tol_coeff: f64,
        /// Also write the covering data to this file.
        #[arg(long)]
        emit_covering: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "monomial")]
        emit_kind: EmitKind,
    },
    /// An n-th root of the clock matrix of a rational rotation algebra.
    TorusCover {
        #[arg(long, allow_hyphen_values = true)]
        p: i64,
        #[arg(long)]
        q: usize,
        #[arg(long)]
        n: usize,
        /// Constant twist index of the root map, 0 for the standard root.
        #[arg(long, default_value_t = 0)]
        twist: usize,
        #[arg(long, default_value_t = nccover::circle::DEFAULT_GRID)]
        grid: usize,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Pull a sampled covering back along a map onto its base and audit the result.
    FiberProduct {
        #[arg(long)]
        cover: PathBuf,
        #[arg(long)]
        space: PathBuf,
        /// Partition of unity on the space; defaults to the constant 1.
        #[arg(long)]
        partition: Option<PathBuf>,
        #[arg(long, default_value_t = 1e-7)]
        tol: f64,
    },
    /// Audit a covering data file.
    Verify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        tol_a: Option<f64>,
        #[arg(long)]
        tol_b: Option<f64>,
    },
    /// Winding numbers of sampled loops and transport along unitary paths.
    #[command(group(ArgGroup::new("check").required(true).args(["winding", "transport"])))]
    RootCalculus {
        #[arg(long)]
        winding: Option<PathBuf>,
        #[arg(long)]
        transport: Option<PathBuf>,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Re-render a saved report.
    Report {
        #[arg(long)]
        input: PathBuf,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::CircleCover { .. } => "circle-cover",
            Command::TorusCover { .. } => "torus-cover",
            Command::FiberProduct { .. } => "fiber-product",
            Command::Verify { .. } => "verify",
            Command::RootCalculus { .. } => "root-calculus",
            Command::Report { .. } => "report",
        }
    }
}

fn run(command: &Command) -> Result<Outcome, CliError> {
    match command {
        Command::CircleCover { n, grid, degree, tol_grid, tol_coeff, emit_covering, emit_kind } => {
            commands::circle_cover(&commands::CircleArgs {
                n: *n,
                grid: *grid,
                degree: *degree,
                tol_grid: *tol_grid,
                tol_coeff: *tol_coeff,
                emit: emit_covering.as_deref().map(|p| (p, *emit_kind == EmitKind::Partition)),
            })
        }
        Command::TorusCover { p, q, n, twist, grid, tol } => {
            commands::torus_cover(&commands::TorusArgs { p: *p, q: *q, n: *n, twist: *twist, grid: *grid, tol: *tol })
        }
        Command::FiberProduct { cover, space, partition, tol } => commands::fiber_product(&commands::FiberArgs {
            cover,
            space,
            partition: partition.as_deref(),
            tol: *tol,
        }),
        Command::Verify { input, tol_a, tol_b } => commands::verify(input, *tol_a, *tol_b),
        Command::RootCalculus { winding, transport, tol } => match (winding, transport) {
            (Some(w), _) => commands::winding(w, tol.unwrap_or(1e-8)),
            (None, Some(t)) => commands::transport(t, tol.unwrap_or(1e-7)),
            (None, None) => unreachable!("clap enforces one of the group"),
        },
        Command::Report { .. } => unreachable!("handled separately"),
    }
}

fn emit(cli: &Cli, value: &Value) -> Result<(), CliError> {
    let mut body = match cli.format {
        Format::Json => serde_json::to_string_pretty(value).expect("json value serializes"),
        Format::Text => render::text(value),
    };
    if !body.ends_with('\n') {
        body.push('\n');
    }
    match &cli.output {
        Some(path) => render::write_atomic(path, &body),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Report { input } => commands::report(input),
        command => run(command).map(|o| {
            let mut metadata = serde_json::Map::new();
            metadata.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
            if cli.stamp {
                let now = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
                metadata.insert("timestamp".into(), json!(now));
            }
            let v = json!({
                "command": command.name(),
                "parameters": o.parameters,
                "results": o.results,
                "verdict": { "pass": o.pass },
                "metadata": metadata,
            });
            (v, o.pass)
        }),
    };
    match result.and_then(|(v, pass)| emit(&cli, &v).map(|()| pass)) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("nccover: {e}");
            ExitCode::from(2)
        }
    }
}
