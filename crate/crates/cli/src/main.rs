//! `barrel`: perfect matchings of m-barrel fullerenes from the command line.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 validation failure.

mod commands;
mod render;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "barrel", version, about = "Perfect matchings of m-barrel fullerenes F(m,k)")]
struct Cli {
    /// Output format (each command accepts a subset).
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write the output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker thread cap.
    #[arg(long, global = true, env = "BARREL_THREADS", hide = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Svg,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Transfer,
    Brute,
    Paths,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum What {
    Graph,
    Tiling,
    Paths,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GraphLayout {
    Edges,
    Adj,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum LevelArg {
    Fast,
    Full,
}

#[derive(Args, Debug)]
pub struct CountArgs {
    #[arg(long)]
    pub m: usize,
    #[arg(long, conflicts_with = "k_max", required_unless_present = "k_max")]
    pub k: Option<usize>,
    /// Count every k in 0..=k-max.
    #[arg(long)]
    pub k_max: Option<usize>,
    #[arg(long, value_enum, default_value = "transfer")]
    pub method: Method,
}

#[derive(Args, Debug)]
pub struct SpectrumArgs {
    #[arg(long)]
    pub m: usize,
    #[arg(long)]
    pub p: usize,
    #[arg(long, default_value_t = 1.0)]
    pub b: f64,
    #[arg(long, default_value_t = 1.0)]
    pub c: f64,
}

#[derive(Args, Debug)]
pub struct AsymptoticArgs {
    #[arg(long)]
    pub m: usize,
    #[arg(long, default_value_t = 0)]
    pub k: usize,
    /// Start positions, e.g. `1,0` (half-integers allowed).
    #[arg(long, allow_hyphen_values = true, required_unless_present = "aggregate")]
    pub eta: Option<String>,
    /// End positions in split order.
    #[arg(long, allow_hyphen_values = true, required_unless_present = "aggregate")]
    pub lambda: Option<String>,
    #[arg(long)]
    pub s: Option<usize>,
    /// Sum over all cap configurations and splits.
    #[arg(long, conflicts_with_all = ["eta", "lambda", "s"])]
    pub aggregate: bool,
}

#[derive(Args, Debug)]
pub struct EntropyArgs {
    /// Single h(m) instead of the table.
    #[arg(long, conflicts_with = "m_max")]
    pub m: Option<usize>,
    #[arg(long, default_value_t = 1000)]
    pub m_max: usize,
}

#[derive(Args, Debug)]
pub struct SampleArgs {
    #[arg(long)]
    pub m: usize,
    #[arg(long)]
    pub k: usize,
    #[arg(long, default_value_t = 1)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Debug)]
pub struct RenderArgs {
    #[arg(long)]
    pub m: usize,
    #[arg(long)]
    pub k: usize,
    #[arg(long, value_enum, default_value = "tiling")]
    pub what: What,
    /// Seed of the uniformly sampled matching to draw.
    #[arg(long, conflicts_with = "index")]
    pub seed: Option<u64>,
    /// Position of the matching in backtracking order (small graphs).
    #[arg(long)]
    pub index: Option<usize>,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    /// Largest k on the grid.
    #[arg(long, default_value_t = 50)]
    pub k_max: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact number of perfect matchings.
    Count(CountArgs),
    /// Growth constant, dominant sector and entropy.
    Growth {
        #[arg(long)]
        m: usize,
    },
    /// Bethe eigenpairs of one sector with residuals.
    Spectrum(SpectrumArgs),
    /// Asymptotic path-family estimates.
    Asymptotic(AsymptoticArgs),
    /// Dimer entropy h(m) and its limit.
    Entropy(EntropyArgs),
    /// Run the acceptance checks.
    Validate {
        #[arg(long, value_enum, default_value = "fast")]
        level: LevelArg,
        #[arg(long, hide = true)]
        corrupt_transfer: bool,
    },
    /// Uniformly random perfect matchings.
    Sample(SampleArgs),
    /// SVG of the graph, a tiling, or its path family.
    Render(RenderArgs),
    /// Timings of the counting methods.
    Bench(BenchArgs),
    /// The graph as an edge list or adjacency list.
    Export {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: usize,
        #[arg(long = "as", value_enum, default_value = "edges")]
        layout: GraphLayout,
    },
}

pub enum Failure {
    Usage(String),
    Validation(String),
}

impl From<barrel_core::Error> for Failure {
    fn from(e: barrel_core::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

pub type Outcome = Result<String, (Failure, Option<String>)>;

fn run(cli: Cli) -> Outcome {
    let f = cli.format;
    match cli.command {
        Command::Count(a) => commands::count(&a, f),
        Command::Growth { m } => commands::growth(m, f),
        Command::Spectrum(a) => commands::spectrum(&a, f),
        Command::Asymptotic(a) => commands::asymptotic(&a, f),
        Command::Entropy(a) => commands::entropy(&a, f),
        Command::Validate { level, corrupt_transfer } => commands::validate(level, corrupt_transfer, f),
        Command::Sample(a) => commands::sample(&a, f),
        Command::Render(a) => commands::render(&a, f),
        Command::Bench(a) => commands::bench(&a, f),
        Command::Export { m, k, layout } => commands::export(m, k, layout, f),
    }
}

fn emit(text: &str, out: Option<&PathBuf>) -> std::io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text),
        None => std::io::stdout().write_all(text.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(n) = cli.threads {
        if n == 0 || rayon::ThreadPoolBuilder::new().num_threads(n).build_global().is_err() {
            eprintln!("error: BARREL_THREADS must be a positive integer");
            return ExitCode::from(1);
        }
    }
    let out = cli.out.clone();
    match run(cli) {
        Ok(text) => match emit(&text, out.as_ref()) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(1)
            }
        },
        Err((failure, partial)) => {
            if let Some(text) = partial {
                let _ = emit(&text, out.as_ref());
            }
            match failure {
                Failure::Usage(msg) => {
                    eprintln!("error: {msg}");
                    ExitCode::from(1)
                }
                Failure::Validation(msg) => {
                    eprintln!("validation failed: {msg}");
                    ExitCode::from(2)
                }
            }
        }
    }
}
