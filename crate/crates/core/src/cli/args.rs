use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "beamspace", version, about = "Reactive load synthesis and capacity analysis for symmetric three-port beam-space MIMO antennas")]
pub struct Cli {
    /// Output encoding [default: json]
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Write the report here instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// TOML file with default values for any flag (flags take precedence)
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    #[command(flatten)]
    pub tol: TolArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Default, Args)]
pub struct TolArgs {
    /// Allowed negative eigenvalue of I - S^H S [default: 1e-6]
    #[arg(long, global = true)]
    pub tol_passivity: Option<f64>,
    /// Allowed deviation between mirrored S-parameters [default: 5e-3]
    #[arg(long, global = true)]
    pub tol_symmetry: Option<f64>,
    /// Smallest accepted |denominator| of the port-wave solution [default: 1e-9]
    #[arg(long, global = true)]
    pub tol_singular: Option<f64>,
    /// Allowed ||gamma| - 1| of a synthesized load [default: 1e-8]
    #[arg(long, global = true)]
    pub tol_reactive: Option<f64>,
    /// Allowed pattern residual in multiplexing checks [default: 1e-9]
    #[arg(long, global = true)]
    pub tol_multiplex: Option<f64>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct Design {
    /// Touchstone file (.s3p)
    pub file: PathBuf,
    /// Frequency in Hz; the nearest grid point is used [default: first point]
    #[arg(long)]
    pub freq: Option<f64>,
    /// Reactance of the first basis load in ohms [default: -100]
    #[arg(long = "x-i", allow_negative_numbers = true)]
    pub x_i: Option<f64>,
    /// PSK modulation order, a power of two [default: 4]
    #[arg(short, long)]
    pub m: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Symmetry, passivity and matched-load report per frequency
    Inspect {
        /// Touchstone file
        file: PathBuf,
    },
    /// Reactive load table for one design point
    Synth {
        #[command(flatten)]
        design: Design,
        /// Seed for the multiplexing self-check [default: 0]
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Load table across a range of first basis reactances
    Sweep {
        #[command(flatten)]
        design: Design,
        /// Reactance grid "start:stop:step" or a comma list [default: -300:300:10]
        #[arg(long, allow_hyphen_values = true)]
        range: Option<String>,
    },
    /// Runs every structural check and reports the residuals
    Verify {
        #[command(flatten)]
        design: Design,
        /// Random symbol pairs for the multiplexing check [default: 1000]
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Monte-Carlo capacity curves of the beam-space link
    Capacity {
        #[command(flatten)]
        design: Design,
        /// SNR grid in dB, "start:stop:step" or a comma list [default: -10:40:5]
        #[arg(long, allow_hyphen_values = true)]
        snr: Option<String>,
        /// Channel realizations [default: 2000]
        #[arg(long)]
        realizations: Option<usize>,
        /// QPSK symbol pairs per realization [default: 1000]
        #[arg(long)]
        symbols: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Total efficiency in (0, 1] applied as a power scale [default: 1]
        #[arg(long)]
        efficiency: Option<f64>,
        /// Use the raw basis powers instead of normalizing them to mean 1
        #[arg(long)]
        raw_powers: bool,
    },
}

/// Optional file mirroring the flags. Unknown keys are rejected.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub freq: Option<f64>,
    pub x_i: Option<f64>,
    pub m: Option<usize>,
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub range: Option<String>,
    pub snr: Option<String>,
    pub realizations: Option<usize>,
    pub symbols: Option<usize>,
    pub efficiency: Option<f64>,
    pub raw_powers: Option<bool>,
    pub tol_passivity: Option<f64>,
    pub tol_symmetry: Option<f64>,
    pub tol_singular: Option<f64>,
    pub tol_reactive: Option<f64>,
    pub tol_multiplex: Option<f64>,
}
