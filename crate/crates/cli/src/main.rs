//! `rootdatum`: generate semiring oracles, reconstruct root data from them,
//! and check the order and covering properties on concrete data.

mod commands;
mod config;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::config::Config;

#[derive(Parser, Debug)]
#[command(name = "rootdatum", version, about = "Root data from representation semirings")]
struct Cli {
    #[command(flatten)]
    config: Config,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write the windowed semiring of a datum under opaque labels.
    GenOracle {
        #[arg(long)]
        datum: String,
        /// Output file; stdout when absent.
        #[arg(long)]
        out: Option<String>,
        /// Also write the label -> weight map (for debugging only).
        #[arg(long)]
        provenance: Option<String>,
    },
    /// Recover a root datum from an oracle file.
    Reconstruct {
        #[arg(long)]
        oracle: String,
        /// Report file; the report goes to stdout when absent.
        #[arg(long)]
        out: Option<String>,
    },
    /// Compare a reconstruction report with a datum.
    Verify {
        #[arg(long)]
        datum: String,
        #[arg(long)]
        report: String,
    },
    /// Decompose the tensor product of two irreducibles.
    Tensor {
        #[arg(long)]
        datum: String,
        #[arg(long, allow_hyphen_values = true)]
        left: String,
        #[arg(long, allow_hyphen_values = true)]
        right: String,
        /// One `ν : mult` line per component.
        #[arg(long)]
        lines: bool,
    },
    /// Compare the order criteria and run the covering check.
    CheckProps {
        #[arg(long)]
        datum: String,
        #[arg(long, default_value_t = 5)]
        max_coord: u64,
        /// Largest dilation in the covering check.
        #[arg(long, default_value_t = 6)]
        cover_n: usize,
    },
}

/// Why a command did not succeed.
#[derive(Debug)]
pub enum Failure {
    /// Malformed or inconsistent input: exit 2.
    Input(String),
    /// Well-formed input that did not pass: exit 1.
    Rejected(String),
}

impl From<rootdatum::Error> for Failure {
    fn from(e: rootdatum::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

/// Text for stdout and whether the command passed.
pub struct Output {
    pub text: String,
    pub passed: bool,
}

fn run(cli: Cli) -> Result<Output, Failure> {
    let cfg = cli.config;
    cfg.validate()?;
    if cfg.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.threads)
            .build_global()
            .map_err(|e| Failure::Input(format!("thread pool: {e}")))?;
    }
    match cli.command {
        Command::GenOracle { datum, out, provenance } => {
            commands::gen_oracle(&cfg, &datum, out.as_deref(), provenance.as_deref())
        }
        Command::Reconstruct { oracle, out } => commands::reconstruct(&cfg, &oracle, out.as_deref()),
        Command::Verify { datum, report } => commands::verify(&cfg, &datum, &report),
        Command::Tensor { datum, left, right, lines } => commands::tensor(&cfg, &datum, &left, &right, lines),
        Command::CheckProps { datum, max_coord, cover_n } => commands::check_props(&cfg, &datum, max_coord, cover_n),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(out) => {
            print!("{}", out.text);
            ExitCode::from(if out.passed { 0 } else { 1 })
        }
        Err(Failure::Rejected(msg)) => {
            println!("{msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
