use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "rgg",
    version,
    about = "Random geometric graphs with nodes uniform in a disk"
)]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Disk diameter D.
    #[arg(long, global = true, default_value_t = 1.0)]
    pub diameter: f64,
    /// Connection model: `hard:r0=0.5`, `exp:r0=0.3,beta=2` or `table:@file.csv`.
    #[arg(long, global = true, default_value = "hard:r0=0.5")]
    pub model: String,
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Monte Carlo sample count.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    pub samples: u64,
    /// Independent random streams; output depends on this count.
    #[arg(long, global = true, default_value_t = 1)]
    pub workers: usize,
    /// Absolute quadrature tolerance.
    #[arg(long, global = true, default_value_t = 1e-7)]
    pub abs_tol: f64,
    /// Write to this file instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Joint density of the three side lengths (JSON).
    Pdf3 {
        #[arg(long, allow_hyphen_values = true)]
        r12: f64,
        #[arg(long, allow_hyphen_values = true)]
        r13: f64,
        #[arg(long, allow_hyphen_values = true)]
        r23: f64,
    },
    /// Density of the distance between two points (JSON).
    Pairpdf {
        #[arg(long, allow_hyphen_values = true)]
        r: f64,
    },
    /// Probability of every graph outcome (CSV).
    Pmf {
        #[arg(long)]
        n: usize,
        /// Estimate by sampling instead of quadrature.
        #[arg(long)]
        mc: bool,
    },
    /// Exact graph entropy for two or three nodes (JSON).
    Entropy {
        #[arg(long)]
        n: usize,
    },
    /// Sampled graph entropy for any node count (JSON).
    EntropyMc {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        estimator: EstimatorArgs,
    },
    /// Upper bounds on H(G_n) from H(G_2), H(G_3) and optionally sampled H(G_m) (JSON).
    Bounds {
        #[arg(long)]
        n: usize,
        /// Also sample H(G_m) for 4 <= m <= n.
        #[arg(long)]
        mc: bool,
    },
    /// Connectedness and completeness probabilities over a range of r0 (CSV).
    SweepConnectivity {
        #[command(flatten)]
        sweep: SweepArgs,
    },
    /// Graph entropy and its bounds over a range of r0 (CSV).
    SweepEntropy {
        #[command(flatten)]
        sweep: SweepArgs,
        #[command(flatten)]
        estimator: EstimatorArgs,
    },
    /// Compare a closed form with an independent oracle (JSON report).
    Validate {
        #[arg(value_enum)]
        target: ValidateTarget,
        /// Histogram bins per axis.
        #[arg(long)]
        bins: Option<usize>,
    },
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    /// Use Monte Carlo; required for n >= 4.
    #[arg(long)]
    pub mc: bool,
    #[arg(long, default_value_t = 0.0)]
    pub r0_start: f64,
    /// Defaults to the diameter.
    #[arg(long)]
    pub r0_stop: Option<f64>,
    #[arg(long, default_value_t = 40)]
    pub steps: usize,
}

#[derive(Debug, Clone, Args)]
pub struct EstimatorArgs {
    /// Bootstrap replicates for the standard error.
    #[arg(long, default_value_t = 100)]
    pub bootstrap: usize,
    /// Report the plug-in estimate without bias correction.
    #[arg(long)]
    pub no_miller_madow: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ValidateTarget {
    Pdf3,
    Pair,
    Condpdf,
    Pmf3,
}

impl ValidateTarget {
    pub fn name(self) -> &'static str {
        match self {
            ValidateTarget::Pdf3 => "pdf3",
            ValidateTarget::Pair => "pair",
            ValidateTarget::Condpdf => "condpdf",
            ValidateTarget::Pmf3 => "pmf3",
        }
    }
}
