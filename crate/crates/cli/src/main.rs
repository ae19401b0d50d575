//! `ncc`: build, route over and analyse the truncated graphs from the command line.

mod commands;
mod config;
mod failure;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ncc_core::expansion::Rational;
use ncc_core::io::parse_rational;
use ncc_core::Stage;

use crate::config::{Mode, RunConfig, StrategySource};
use crate::failure::Failure;

#[derive(Parser, Debug)]
#[command(name = "ncc", version, about = "Truncated cubical polytope graphs: generation, routing, expansion bounds")]
struct Cli {
    /// Worker threads for the counting and search loops.
    #[arg(long, global = true, env = "NCC_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write one of the graphs as an edge list, DOT or JSON.
    Generate {
        #[arg(long, value_parser = parse_stage)]
        stage: Stage,
        #[arg(long)]
        m: usize,
        /// Strategy file, or `double-fan`.
        #[arg(long)]
        strategy: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Edges)]
        format: Format,
    },
    /// Print the canonical path between two edge-truncated vertices.
    Route {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        strategy: Option<PathBuf>,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
    },
    /// Count canonical paths through every edge.
    Phi {
        #[command(flatten)]
        run: RunArgs,
    },
    /// Build and verify the separator that cuts one cube direction.
    Separator {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        strategy: Option<PathBuf>,
        /// Cube direction; defaults to the direction of smallest cluster degree.
        #[arg(long)]
        direction: Option<usize>,
        /// Half of the cube that loses the long-edge endpoints.
        #[arg(long, default_value = "-", value_parser = parse_side)]
        side: Side,
        /// Balance constant c in (0, 1/2).
        #[arg(long, default_value = "1/3", value_parser = parse_c)]
        c: Rational,
    },
    /// Run every structural check and print the name of each that fails.
    Verify {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        strategy: Option<PathBuf>,
    },
    /// Path loads, Sinclair and Cheeger bounds, and the separator, as JSON.
    Report {
        #[command(flatten)]
        run: RunArgs,
        /// Skip the eigenvalue computation.
        #[arg(long)]
        no_spectral: bool,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Second Laplacian eigenvalue and the Cheeger lower bound.
    Spectral {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        strategy: Option<PathBuf>,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, default_value_t = 1_000_000)]
        max_iter: usize,
        #[arg(long, default_value_t = 0x5eed)]
        seed: u64,
    },
}

#[derive(Args, Debug)]
struct RunArgs {
    #[arg(long)]
    m: usize,
    #[arg(long)]
    strategy: Option<PathBuf>,
    /// Count every ordered pair (default).
    #[arg(long, conflicts_with = "sample")]
    exact: bool,
    /// Sample this many ordered pairs instead.
    #[arg(long, requires = "seed")]
    sample: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Allow exact counting above m = 7.
    #[arg(long = "i-know-exact-is-slow")]
    allow_large_exact: bool,
    /// Balance constant c in (0, 1/2).
    #[arg(long, default_value = "1/3", value_parser = parse_c)]
    c: Rational,
    /// Directory for output files.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl RunArgs {
    fn into_config(self) -> Result<RunConfig, Failure> {
        let mode = match (self.sample, self.seed) {
            (Some(samples), Some(seed)) => Mode::Sampled { samples, seed },
            _ => Mode::Exact,
        };
        RunConfig::new(
            self.m,
            StrategySource::parse(self.strategy.as_deref()),
            mode,
            self.c,
            self.out,
            self.allow_large_exact,
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Edges,
    Dot,
    Json,
}

fn parse_stage(s: &str) -> Result<Stage, String> {
    s.parse().map_err(|e: ncc_core::Error| e.to_string())
}

/// Half of the cube by the sign of the chosen coordinate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Side {
    pub plus: bool,
}

fn parse_side(s: &str) -> Result<Side, String> {
    match s {
        "-" | "minus" => Ok(Side { plus: false }),
        "+" | "plus" => Ok(Side { plus: true }),
        _ => Err(format!("side must be `-` or `+`, got `{s}`")),
    }
}

fn parse_c(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn run(cli: Cli) -> Result<(), Failure> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::usage(format!("thread pool: {e}")))?;
    }
    let source = |p: &Option<PathBuf>| StrategySource::parse(p.as_deref());
    match cli.command {
        Command::Generate { stage, m, strategy, format } => commands::generate(stage, m, &source(&strategy), format),
        Command::Route { m, strategy, from, to } => commands::route(m, &source(&strategy), &from, &to),
        Command::Phi { run } => commands::phi(&run.into_config()?),
        Command::Separator { m, strategy, direction, side, c } => {
            commands::separator(m, &source(&strategy), direction, side.plus, c)
        }
        Command::Verify { m, strategy } => commands::verify(m, &source(&strategy)),
        Command::Report { run, no_spectral, tol } => commands::report(&run.into_config()?, (!no_spectral).then_some(tol)),
        Command::Spectral { m, strategy, tol, max_iter, seed } => {
            commands::spectral(m, &source(&strategy), tol, max_iter, seed)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("{f}");
            ExitCode::from(f.code())
        }
    }
}
