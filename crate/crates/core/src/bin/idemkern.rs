use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use idemkern::cli::{self, Format, Output, Status, SuiteOverrides};
use idemkern::harness::{CheckId, Hypothesis};
use idemkern::kernel::WitnessRule;
use idemkern::Result;

#[derive(Parser)]
#[command(
    name = "idemkern",
    version,
    about = "Kernels of b-linear operators over idempotent semirings"
)]
struct Cli {
    /// Seed for sampled axiom checks and suite runs.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Carrier size cap for enumerated semimodules.
    #[arg(long, global = true)]
    cap: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    format: OutputFormat,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Include per-check wall time in suite summaries.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Check the semiring laws exhaustively or on a sample.
    Axioms {
        spec: PathBuf,
        #[arg(long, default_value_t = cli::DEFAULT_AXIOM_BUDGET)]
        budget: usize,
    },
    Kernel {
        #[command(subcommand)]
        command: KernelCommand,
    },
    Suite {
        #[command(subcommand)]
        command: SuiteCommand,
    },
    /// Search for a counterexample to a statement, optionally with one
    /// hypothesis dropped.
    Search {
        statement: CheckId,
        #[arg(long, default_value = "none")]
        drop: Hypothesis,
        #[arg(long, default_value_t = cli::DEFAULT_SEARCH_BUDGET)]
        budget: usize,
        /// JSON search space overriding the default.
        #[arg(long)]
        space: Option<PathBuf>,
    },
    Delta {
        #[command(subcommand)]
        command: DeltaCommand,
    },
    App {
        #[command(subcommand)]
        command: AppCommand,
    },
}

#[derive(Subcommand)]
enum KernelCommand {
    /// Maximal kernel of an operator, or the input it fails to reproduce.
    Extract { operator: PathBuf },
    /// Whether every b-linear map out of a semimodule is integral.
    Decide { semimodule: PathBuf },
}

#[derive(Subcommand)]
enum SuiteCommand {
    /// Run the check suite; one JSON line per instance then one per summary.
    Run {
        config: Option<PathBuf>,
        /// Comma-separated subset of checks.
        #[arg(long)]
        checks: Option<String>,
    },
}

#[derive(Subcommand)]
enum DeltaCommand {
    /// Enumerate δ-functionals and the evaluation embedding.
    Enum {
        semimodule: PathBuf,
        /// Require a nonzero witness for each δ-functional.
        #[arg(long)]
        nonzero_witness: bool,
    },
}

#[derive(Subcommand)]
enum AppCommand {
    /// Single-source shortest paths over Min-Plus.
    ShortestPath { graph: PathBuf },
    /// Most likely state path of an HMM over Max-Plus.
    Viterbi { hmm: PathBuf },
    /// Tropical convolution of two sequences.
    Conv { input: PathBuf },
}

const DEFAULT_CAP: usize = 1 << 12;

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| idemkern::Error::Input(format!("{}: {e}", path.display())))
}

fn run(cli: &Cli) -> Result<Output> {
    let cap = cli.cap.unwrap_or(DEFAULT_CAP);
    match &cli.command {
        Command::Axioms { spec, budget } => cli::axioms(&read(spec)?, *budget, cli.seed.unwrap_or(0)),
        Command::Kernel { command } => match command {
            KernelCommand::Extract { operator } => cli::kernel_extract(&read(operator)?),
            KernelCommand::Decide { semimodule } => cli::kernel_decide(&read(semimodule)?),
        },
        Command::Suite {
            command: SuiteCommand::Run { config, checks },
        } => {
            let text = config.as_deref().map(read).transpose()?;
            let overrides = SuiteOverrides {
                seed: cli.seed,
                cap: cli.cap,
                checks: checks.as_deref().map(cli::parse_checks).transpose()?,
            };
            cli::suite_run(text.as_deref(), &overrides, cli.timing)
        }
        Command::Search {
            statement,
            drop,
            budget,
            space,
        } => {
            let space = space.as_deref().map(read).transpose()?;
            cli::search(*statement, *drop, *budget, space.as_deref())
        }
        Command::Delta {
            command: DeltaCommand::Enum {
                semimodule,
                nonzero_witness,
            },
        } => {
            let rule = if *nonzero_witness {
                WitnessRule::Nonzero
            } else {
                WitnessRule::Any
            };
            cli::delta_enum(&read(semimodule)?, cap, rule)
        }
        Command::App { command } => match command {
            AppCommand::ShortestPath { graph } => cli::app_shortest_path(&read(graph)?),
            AppCommand::Viterbi { hmm } => cli::app_viterbi(&read(hmm)?),
            AppCommand::Conv { input } => cli::app_conv(&read(input)?),
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = match cli.format {
        OutputFormat::Json => Format::Json,
        OutputFormat::Text => Format::Text,
    };
    let output = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(Status::InputError.code() as u8);
        }
    };
    let body = output.render(format);
    let written = match &cli.out {
        Some(path) => fs::write(path, body),
        None => std::io::stdout().lock().write_all(body.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(Status::InputError.code() as u8);
    }
    ExitCode::from(output.status.code() as u8)
}
