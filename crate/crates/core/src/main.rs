use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use naming_game::harness::{self, HarnessError, Overrides};

#[derive(Parser)]
#[command(name = "naming-game", version, about = "Two-agent n-object naming game experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a configuration and write its artifact directory.
    Run {
        #[command(flatten)]
        common: Common,
    },
    /// Run every point of a sweep file and write summary.csv.
    Sweep {
        #[command(flatten)]
        common: Common,
    },
    /// Random-draw baseline for distinct words and gaps.
    Baseline {
        #[arg(short, long)]
        n: usize,
        #[arg(short, long)]
        r: u32,
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    runs: Option<usize>,
    #[arg(long, conflicts_with = "exploratory")]
    strict: bool,
    #[arg(long)]
    exploratory: bool,
    /// Comma-separated time units.
    #[arg(long, value_delimiter = ',')]
    snapshot_at: Option<Vec<u64>>,
}

impl Common {
    fn overrides(&self) -> Overrides {
        Overrides {
            seed: self.seed,
            runs: self.runs,
            strict: match (self.strict, self.exploratory) {
                (true, _) => Some(true),
                (_, true) => Some(false),
                _ => None,
            },
            snapshot_at: self.snapshot_at.clone(),
        }
    }
}

fn execute(cli: Cli) -> Result<(), HarnessError> {
    match cli.command {
        Command::Run { common } => {
            let mut config = harness::load_config(&common.config)?;
            common.overrides().apply(&mut config);
            let art = harness::cmd_run(&config, &common.out)?;
            for w in &art.warnings {
                eprintln!("warning: {w}");
            }
        }
        Command::Sweep { common } => {
            let mut spec = harness::load_sweep(&common.config)?;
            common.overrides().apply(&mut spec.base);
            harness::cmd_sweep(&spec, &common.out)?;
        }
        Command::Baseline { n, r, trials, seed, out } => {
            harness::cmd_baseline(n, r, trials, seed, &out)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
