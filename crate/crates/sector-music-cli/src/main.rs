//! Command-line surface for the sector-MUSIC library: prolate banks, array
//! gain, MUSIC spectra, resolution thresholds, Monte Carlo sweeps, and the
//! bundled benchmark table/figure datasets.
//!
//! Every run writes its data as CSV plus a `manifest.json` that echoes the
//! resolved configuration; `replay` reruns a manifest bit-identically.

// Validation guards use negated comparisons (`!(x > 0.0)`) so NaN fails closed.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod output;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Debug)]
pub enum CliErrorKind {
    /// Bad configuration, arguments, or I/O. Exit code 1.
    Validation,
    /// Numerical failure inside the library. Exit code 2.
    Numerical,
}

#[derive(Debug)]
pub struct CliError {
    pub kind: CliErrorKind,
    pub message: String,
}

impl CliError {
    pub fn validation(message: impl Into<String>) -> Self {
        Self {
            kind: CliErrorKind::Validation,
            message: message.into(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.message)
    }
}

impl From<sector_music::Error> for CliError {
    fn from(e: sector_music::Error) -> Self {
        let kind = if e.is_numerical() {
            CliErrorKind::Numerical
        } else {
            CliErrorKind::Validation
        };
        Self {
            kind,
            message: e.to_string(),
        }
    }
}

/// Flags shared by most subcommands; every one of them overrides the
/// corresponding config-file field.
#[derive(Debug, Args, Clone)]
pub struct CommonArgs {
    /// JSON configuration file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Base seed override.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory (created if missing).
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    /// Processing space override: element | beamspace.
    #[arg(long)]
    pub space: Option<String>,
    /// Trials-per-SNR-point override.
    #[arg(long)]
    pub trials: Option<usize>,
    /// SNR grid step override (dB).
    #[arg(long)]
    pub snr_step_db: Option<f64>,
}

#[derive(Debug, Parser)]
#[command(
    name = "sector-music",
    version,
    about = "DPSS-prefiltered and element-space MUSIC DOA estimation with SNR resolution-threshold analysis"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Emit a prolate-sequence bank as CSV (one column per sequence).
    Dpss {
        #[command(flatten)]
        common: CommonArgs,
        /// Sequence length (sensor count); used when no config is given.
        #[arg(long)]
        n: Option<usize>,
        /// Concentration-kernel bandwidth.
        #[arg(long)]
        b: Option<f64>,
        /// Number of sequences.
        #[arg(long)]
        count: Option<usize>,
    },
    /// Array beamforming gain of the sector prefilter over an angle grid.
    Gain {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// MUSIC null spectrum and spectrum over an angle grid for one scenario.
    Spectrum {
        #[command(flatten)]
        common: CommonArgs,
        /// Also dump the raw snapshots (one column per snapshot, each sensor
        /// as a re/im row pair) for cross-tool validation.
        #[arg(long)]
        dump_snapshots: bool,
    },
    /// Theoretical resolution threshold for the configured scenario.
    Threshold {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Theoretical threshold versus separation (CSV for plotting).
    Sweep {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Monte Carlo resolution-probability sweep and empirical threshold.
    Montecarlo {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// The bundled 24-row benchmark: theory and simulated thresholds.
    Tables {
        #[command(flatten)]
        common: CommonArgs,
        /// Skip the Monte Carlo simulation column.
        #[arg(long)]
        theory_only: bool,
        /// Only run rows with at most this many snapshots.
        #[arg(long)]
        max_snapshots: Option<usize>,
    },
    /// Threshold-versus-separation curves for plotting.
    Figures {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Re-run a manifest and reproduce its outputs bit-identically.
    Replay {
        /// Path to a manifest.json produced by an earlier run.
        #[arg(long)]
        manifest: PathBuf,
        /// Output directory for the replayed run.
        #[arg(long, default_value = "replay-out")]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e.kind {
                CliErrorKind::Validation => ExitCode::from(1),
                CliErrorKind::Numerical => ExitCode::from(2),
            }
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Dpss { common, n, b, count } => commands::dpss(&common, n, b, count),
        Command::Gain { common } => commands::gain(&common),
        Command::Spectrum {
            common,
            dump_snapshots,
        } => commands::spectrum(&common, dump_snapshots),
        Command::Threshold { common } => commands::threshold(&common),
        Command::Sweep { common } => commands::sweep(&common),
        Command::Montecarlo { common } => commands::montecarlo(&common),
        Command::Tables {
            common,
            theory_only,
            max_snapshots,
        } => commands::tables(&common, theory_only, max_snapshots),
        Command::Figures { common } => commands::figures(&common),
        Command::Replay { manifest, out } => commands::replay(&manifest, &out),
    }
}
