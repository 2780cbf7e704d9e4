//! `gtab`: exact tables and Knutson indices for small finite groups.

mod render;
mod resolve;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use gtab_core::Error;

#[derive(Parser)]
#[command(
    name = "gtab",
    version,
    about = "Exact tables of marks, character tables, global representation tables, \
             and Knutson indices for small finite groups"
)]
pub struct Cli {
    #[command(subcommand)]
    pub cmd: Cmd,
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Pretty)]
    pub format: Format,
    /// Skip reading and writing the table cache
    #[arg(long, global = true)]
    pub no_cache: bool,
    /// Optional key=value config file (keys: jobs, max-order, cache-dir)
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Worker pool size for verify-all and twins
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Pretty,
    Csv,
    Json,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
pub enum RingKind {
    Char,
    Burnside,
    Global,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
pub enum Invariant {
    Char,
    Marks,
    Both,
    Global,
}

#[derive(Subcommand)]
pub enum Cmd {
    /// Print the table of marks of a group
    Marks { group: String },
    /// Print the character table of a group
    Chartab { group: String },
    /// Print the reduced global representation table T(G, N)
    Globaltab {
        group: String,
        /// Normal subgroup: generator words, cycles, or center/derived/trivial
        #[arg(long)]
        normal: Option<String>,
    },
    /// Knutson index computations over a marked ring
    Knutson {
        #[arg(value_enum)]
        ring: RingKind,
        group: String,
        #[arg(long)]
        normal: Option<String>,
        /// Ring element: integer coefficients over the basis, or a basis label
        #[arg(long)]
        element: Option<String>,
        /// Compute the subindex against a probe set ("rows" = the basis rows)
        #[arg(long)]
        subindex: Option<String>,
        /// Print the witness combination lambda
        #[arg(long)]
        witness: bool,
        /// Per-basis-row indices and their lcm
        #[arg(long)]
        all_rows: bool,
    },
    /// Check the splitting theorem for one normal pair
    SplitCheck {
        group: String,
        #[arg(long)]
        normal: String,
    },
    /// Run the full invariant suite over the built-in corpus
    VerifyAll {
        #[arg(long)]
        max_order: Option<u64>,
    },
    /// Search a corpus for groups sharing an invariant ("builtin" or a
    /// directory of .grp files)
    Twins {
        corpus_dir: String,
        #[arg(long, value_enum, default_value_t = Invariant::Char)]
        invariant: Invariant,
        /// Skip corpus entries above this group order
        #[arg(long)]
        max_scan_order: Option<u64>,
    },
}

/// Optional key=value configuration, overridden by CLI flags.
#[derive(Default)]
pub struct Config {
    pub jobs: Option<usize>,
    pub max_order: Option<u64>,
    pub cache_dir: Option<PathBuf>,
}

pub fn load_config(path: &PathBuf) -> Result<Config, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Input(format!("cannot read config {}: {}", path.display(), e)))?;
    let mut cfg = Config::default();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Input(format!("config line {}: expected key=value", lineno + 1)))?;
        let (key, value) = (key.trim(), value.trim());
        match key {
            "jobs" => {
                cfg.jobs = Some(value.parse().map_err(|_| {
                    Error::Input(format!("config line {}: bad jobs '{}'", lineno + 1, value))
                })?)
            }
            "max-order" => {
                cfg.max_order = Some(value.parse().map_err(|_| {
                    Error::Input(format!("config line {}: bad max-order '{}'", lineno + 1, value))
                })?)
            }
            "cache-dir" => cfg.cache_dir = Some(PathBuf::from(value)),
            other => {
                return Err(Error::Input(format!(
                    "config line {}: unknown key '{}'",
                    lineno + 1,
                    other
                )))
            }
        }
    }
    Ok(cfg)
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Input(_) | Error::Config(_) => 2,
        Error::CapExceeded { .. } | Error::Budget(_) => 3,
        Error::Internal(_) => 4,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match cli.config.as_ref().map(load_config).transpose() {
        Ok(c) => c.unwrap_or_default(),
        Err(e) => {
            eprintln!("gtab: {}", e);
            return ExitCode::from(exit_code_for(&e));
        }
    };
    match render::run(&cli, &cfg) {
        Ok(exit) => exit,
        Err(e) => {
            eprintln!("gtab: {}", e);
            ExitCode::from(exit_code_for(&e))
        }
    }
}
