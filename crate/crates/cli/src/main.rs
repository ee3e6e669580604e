//! `linepack`: build, certify and search Suzuki-group line packings.
//!
//! Exit codes: 0 success, 1 mathematical violation, 2 usage error.

mod commands;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use error::CliError;

pub const DEFAULT_SEED: u64 = 0x5eed_2024;

#[derive(Parser, Debug)]
#[command(name = "linepack", version, about = "Equiangular tight frames from Suzuki 2-groups")]
pub struct Cli {
    /// Worker threads; defaults to all cores. Output never depends on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Report errors on stderr as one JSON object.
    #[arg(long, global = true)]
    pub json_errors: bool,

    /// Seed for sampled verification.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct OutDir {
    /// Output directory.
    #[arg(long, env = "LINEPACK_OUT_DIR", default_value = ".")]
    pub out: PathBuf,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Synthesize the frame for GF(2^n) and write matrices, certificate and manifest.
    Build {
        #[arg(long)]
        n: u32,
        /// Sample size used in place of dense matrices for n >= 7.
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[command(flatten)]
        out: OutDir,
    },
    /// Certify a matrix file, or regenerate and certify the construction for n.
    Verify {
        #[arg(long, conflicts_with = "n", required_unless_present = "n")]
        input: Option<PathBuf>,
        #[arg(long)]
        n: Option<u32>,
        #[arg(long, value_enum, default_value_t = Mode::Full)]
        mode: Mode,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
    },
    /// Enumerate feasible (n, k, l, m) tuples; CSV on stdout unless --out is given.
    Search {
        #[arg(long, default_value_t = 1023)]
        max_order: u64,
        /// Keep only group orders admitting a nonabelian group.
        #[arg(long)]
        nonabelian_orders: bool,
        #[arg(long, default_value_t = 1)]
        min_k: u64,
        /// CSV destination file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Character table of the Suzuki group with an orthogonality report.
    Chartab {
        #[arg(long)]
        n: u32,
        #[command(flatten)]
        out: OutDir,
    },
    /// Compute the Gram matrix by one or more methods and cross-check them.
    Gram {
        #[arg(long)]
        n: u32,
        #[arg(long, value_enum, value_delimiter = ',', default_value = "closed-form,character,frame")]
        method: Vec<GramMethod>,
    },
    /// Projection ETF from a strongly regular graph, when one exists.
    Srg {
        #[arg(long)]
        v: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        lambda: usize,
        #[arg(long)]
        mu: usize,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Full,
    Sample,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum GramMethod {
    ClosedForm,
    Character,
    Frame,
}

impl GramMethod {
    pub fn name(self) -> &'static str {
        match self {
            GramMethod::ClosedForm => "closed-form",
            GramMethod::Character => "character",
            GramMethod::Frame => "frame",
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help / --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            if std::env::args().any(|a| a == "--json-errors") {
                let text = e.to_string();
                let first = text.lines().next().unwrap_or_default();
                CliError::Usage(first.trim_start_matches("error: ").to_string()).report(true);
            } else {
                let _ = e.print();
            }
            return ExitCode::from(2);
        }
    };
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            CliError::Usage(format!("cannot configure {t} threads: {e}")).report(cli.json_errors);
            return ExitCode::from(2);
        }
    }
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            e.report(cli.json_errors);
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
