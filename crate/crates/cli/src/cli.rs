use std::path::PathBuf;

use abe_core::classify::Thresholds;
use abe_core::families::Family;
use abe_core::measures::OptimizerSettings;
use abe_core::optics::PerturbScope;
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::expr::parse_real;
use crate::output::Format;
use crate::state_arg::StateKind;

fn real_arg(s: &str) -> Result<f64, String> {
    parse_real(s).map_err(|e| e.to_string())
}

#[derive(Debug, Parser)]
#[command(
    name = "abe",
    version,
    about = "Activated bipartite entanglement of three-qubit pure states"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Smallest activated entanglement counted as nonzero.
    #[arg(long, default_value_t = 1e-4, value_parser = real_arg)]
    pub tol_abe: f64,
    /// Smallest 3-tangle counted as nonzero.
    #[arg(long, default_value_t = 1e-6, value_parser = real_arg)]
    pub tol_tangle: f64,
    /// Relative eigenvalue cutoff for marginal ranks.
    #[arg(long, default_value_t = 1e-8, value_parser = real_arg)]
    pub tol_rank: f64,
    /// Bloch-hemisphere grid points per axis for the basis search.
    #[arg(long, default_value_t = 64)]
    pub grid: usize,
    /// Grid cells refined by the simplex search.
    #[arg(long, default_value_t = 5)]
    pub starts: usize,
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

impl CommonArgs {
    pub fn thresholds(&self) -> Thresholds {
        Thresholds {
            abe_tol: self.tol_abe,
            tau_tol: self.tol_tangle,
            rank_tol: self.tol_rank,
        }
    }

    pub fn optimizer(&self) -> OptimizerSettings {
        OptimizerSettings {
            grid: self.grid,
            starts: self.starts,
            ..OptimizerSettings::default()
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct StateArgs {
    #[arg(value_enum)]
    pub kind: StateKind,
    /// Parameters; numbers may be written as `1/√2`, `sqrt(3)/3`, `pi/8`.
    /// Negative expressions other than plain literals go after `--`.
    #[arg(allow_negative_numbers = true, num_args = 0..)]
    pub values: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CircuitKind {
    Ghz,
    W,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PlotKind {
    /// Activated entanglement against ΔS, coloured by class.
    Scatter,
    /// Measure columns against the first column.
    Curve,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Full measure report for one state (JSON by default).
    Measure {
        #[command(flatten)]
        state: StateArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Class label with its evidence (JSON by default).
    Classify {
        #[command(flatten)]
        state: StateArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// One-parameter GHZ curve, λ1 from 0 to 1.
    ScanGhz {
        #[arg(long, default_value_t = 101)]
        steps: usize,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Two-parameter W surface over a square grid clipped to λ0² + λ3² ≤ 1.
    ScanW {
        #[arg(long, default_value_t = 51)]
        steps: usize,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Random states; row `i` uses seed `seed + i`.
    HaarScatter {
        #[arg(long, default_value_t = 1000)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "haar")]
        family: FamilyArg,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Monte-Carlo runs of an optical preparation circuit with wave-plate errors.
    SimulateOptics {
        #[arg(value_enum)]
        circuit: CircuitKind,
        /// GHZ wave-plate angle in degrees.
        #[arg(long, default_value_t = 22.5, value_parser = real_arg)]
        theta: f64,
        /// W circuit angles in degrees; default to the ordinary W state.
        #[arg(long, value_parser = real_arg)]
        alpha: Option<f64>,
        #[arg(long, value_parser = real_arg)]
        beta: Option<f64>,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// Half-width in degrees of the uniform angle error.
        #[arg(long, default_value_t = 1.0, value_parser = real_arg)]
        error_halfwidth: f64,
        /// Trial `k` uses seed `seed + k`.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "all-waveplates")]
        perturb_scope: ScopeArg,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Render a CSV produced by the other commands as SVG.
    Plot {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value = "scatter")]
        kind: PlotKind,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Haar,
    Ghz,
    W2,
    W3,
    Acin,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::Haar => Family::Haar,
            FamilyArg::Ghz => Family::Ghz,
            FamilyArg::W2 => Family::W2,
            FamilyArg::W3 => Family::W3,
            FamilyArg::Acin => Family::Acin,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScopeArg {
    AllWaveplates,
    ParameterPlates,
}

impl From<ScopeArg> for PerturbScope {
    fn from(s: ScopeArg) -> Self {
        match s {
            ScopeArg::AllWaveplates => PerturbScope::AllWaveplates,
            ScopeArg::ParameterPlates => PerturbScope::ParameterPlates,
        }
    }
}
