use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Debug, Parser)]
#[command(name = "hslab", version, about = "Hard sphere model samplers, coupled chains and bound checks")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// TOML file with top-level `seed`, `output`, `csv`, `timestamp` and one
    /// table per command; flags override it
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Master seed [default: drawn from entropy and printed]
    #[arg(long, global = true, env = "HSLAB_SEED")]
    pub seed: Option<u64>,
    /// Report file (JSON lines) [default: stdout]
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Also write the reports as CSV
    #[arg(long, global = true)]
    pub csv: Option<PathBuf>,
    /// Add a `timestamp` field to every report
    #[arg(long, global = true)]
    pub timestamp: bool,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub seed: Option<u64>,
    pub output: Option<PathBuf>,
    pub csv: Option<PathBuf>,
    pub timestamp: Option<bool>,
    pub bounds: Option<toml::Value>,
    pub sample: Option<toml::Value>,
    pub chain: Option<toml::Value>,
    pub contraction: Option<toml::Value>,
    pub disagreement: Option<toml::Value>,
    pub density: Option<toml::Value>,
    pub stationarity: Option<toml::Value>,
    #[serde(rename = "ssm-scan")]
    pub ssm_scan: Option<toml::Value>,
    #[serde(rename = "free-volume")]
    pub free_volume: Option<toml::Value>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form fugacity, density, contraction and mixing-time bounds
    Bounds(BoundsArgs),
    /// Exact sample by rejection, written as a snapshot
    Sample(SampleArgs),
    /// Run one chain and report its mean density
    Chain(ChainArgs),
    /// One-step contraction of the pre-metric on random edges
    Contraction(ContractionArgs),
    /// Disagreement propagation under the identity coupling
    Disagreement(DisagreementArgs),
    /// Density against the easy and crossing lower bounds
    Density(DensityArgs),
    /// Chain laws against the quadrature oracle on tiny boxes
    Stationarity(StationarityArgs),
    /// TV of projections under boundary conditions at growing distance
    #[command(name = "ssm-scan")]
    SsmScan(SsmArgs),
    /// Density against fugacity times free volume
    #[command(name = "free-volume")]
    FreeVolume(FreeVolumeArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KernelArg {
    SingleCenter,
    HeatBath,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClassArg {
    Omega,
    OmegaStar,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StationarityMode {
    /// Time-averaged (count, position) law of the chosen kernel
    Chain,
    /// Count laws of the rejection sampler and the single-centre chain
    Oracle,
    /// TV after the mixing-time bound from two starts
    Ceiling,
}

#[derive(Debug, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundsArgs {
    /// Dimension [default: 2]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    /// Fugacity for c and the density bounds
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    /// Contraction slack in (0,1)
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    /// Box volume for the contraction and mixing-time bounds
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<f64>,
    /// Target TV distance for the mixing time [default: 0.25]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
}

/// Domain, fugacity and boundary condition shared by several commands.
#[derive(Debug, Default, Args, Serialize, Deserialize)]
pub struct ModelArgs {
    /// Dimension [default: 2]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    /// Box side lengths, one per axis or one for a cube [default: 5]
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sides: Option<Vec<f64>>,
    /// Fugacity [default: 0.5]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    /// Forbidden ball `x1,..,xd:radius`; repeatable
    #[arg(long = "tau-ball")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau_ball: Option<Vec<String>>,
    /// Forbid interior points closer than this to the interior boundary
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shell: Option<f64>,
}

#[derive(Debug, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub model: ModelArgs,
    /// Rejection budget [default: 1000000]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_attempts: Option<u64>,
    /// Snapshot file [default: stdout]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub snapshot: Option<PathBuf>,
}

#[derive(Debug, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub model: ModelArgs,
    /// Transition kernel [default: single-center]
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kernel: Option<KernelArg>,
    /// Heat-bath radius in units of r [default: 2]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l_ratio: Option<f64>,
    /// Recorded steps [default: 100000]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub steps: Option<u64>,
    /// Steps before recording [default: 10 n (1 + lambda)]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub burn_in: Option<u64>,
    /// Steps between recorded densities [default: 10]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stride: Option<u64>,
    /// State class of the start [default: omega]
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub class: Option<ClassArg>,
    /// Start from this snapshot instead of the empty configuration
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub resume: Option<PathBuf>,
    /// Write the final state here
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub snapshot: Option<PathBuf>,
}

#[derive(Debug, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContractionArgs {
    /// Dimension [default: 2]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    /// Slack in (0,1); the fugacity is (1 - gamma) 2^{1-d} [default: 0.5]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    /// Volume of the cubic box [default: 25]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<f64>,
    /// Random edges [default: 10000]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<u64>,
    /// Steps per edge before drawing it [default: 10 n (1 + lambda)]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub burn_in: Option<u64>,
    /// Update points per edge [default: 128]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub outer_samples: Option<u64>,
    /// Points per volume inside a case [default: 32]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inner_samples: Option<u64>,
    /// Points for the blocked volume [default: 1024]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub blocked_samples: Option<u64>,
}

#[derive(Debug, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DisagreementArgs {
    /// Dimension [default: 2]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    /// Cube side [default: 12]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub side: Option<f64>,
    /// Fugacity [default: 0.25]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    /// Low corner of A [default: origin]
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a_low: Option<Vec<f64>>,
    /// High corner of A [default: (2, side, .., side)]
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a_high: Option<Vec<f64>>,
    /// Low corner of B [default: (2 + 7r, side/2 - 1, ..)]
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b_low: Option<Vec<f64>>,
    /// High corner of B [default: (4 + 7r, side/2 + 1, ..)]
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b_high: Option<Vec<f64>>,
    /// Extra forbidden ball of the second chain, inside A [default: (1, side/2, ..):0.9]
    #[arg(long = "tau-ball")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau_ball: Option<Vec<String>>,
    /// Time in units of n steps [default: the largest admissible value]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eta: Option<f64>,
    /// Coupled runs [default: 10000]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<u64>,
    /// Burn-in of the first chain [default: 10 n (1 + lambda)]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub burn_in: Option<u64>,
}

#[derive(Debug, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DensityArgs {
    /// Dimension [default: 2]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    /// Fugacities [default: 0.1,0.25,0.5]
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambdas: Option<Vec<f64>>,
    /// Cube sides [default: 10]
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sides: Option<Vec<f64>>,
    /// Recorded steps per replica [default: 50000]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub steps: Option<u64>,
    /// [default: 10 n (1 + lambda)]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub burn_in: Option<u64>,
    /// [default: 32]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub replicas: Option<u64>,
    /// [default: 10]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stride: Option<u64>,
}

#[derive(Debug, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StationarityArgs {
    /// [default: chain]
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<StationarityMode>,
    #[command(flatten)]
    #[serde(flatten)]
    pub model: ModelArgs,
    /// [default: single-center]
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kernel: Option<KernelArg>,
    /// Heat-bath radius in units of r [default: 2]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l_ratio: Option<f64>,
    /// Recorded steps per replica; chain steps in oracle mode [default: 100000, 1000000 in oracle mode]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub steps: Option<u64>,
    /// [default: 1000; 10000 in oracle mode]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub burn_in: Option<u64>,
    /// [default: 8; 20000 in ceiling mode]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub replicas: Option<u64>,
    /// [default: 1]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stride: Option<u64>,
    /// Largest passing TV [default: 0.02; 0.01 in oracle mode; eps in ceiling mode]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threshold: Option<f64>,
    /// Position bins per axis [default: 2]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bins: Option<usize>,
    /// Quadrature cells per axis [default: 200]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cells: Option<usize>,
    /// Rejection draws in oracle mode [default: 100000]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub draws: Option<u64>,
    /// Ceiling mode slack; the fugacity becomes (1 - gamma) 2^{1-d} [default: 0.5]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    /// Ceiling mode target TV [default: 0.05]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
}

#[derive(Debug, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SsmArgs {
    /// Dimension [default: 2]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    /// Box sides [default: 8,3]
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sides: Option<Vec<f64>>,
    /// [default: 0.5]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    /// Sides of the observed subregion at the low corner [default: 2, then the box sides]
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sub: Option<Vec<f64>>,
    /// Distances of the forbidden ball from the subregion [default: 0,0.5,1,2,3]
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub distances: Option<Vec<f64>>,
    /// Radius of the forbidden ball [default: 0.8]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    /// Samples per boundary condition [default: 4000]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<u64>,
    /// Occupancy cells per axis of the subregion [default: 4]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid_cells: Option<usize>,
    /// Chain-sampler burn-in [default: 10 n (1 + lambda)]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub burn_in: Option<u64>,
    /// Chain-sampler steps between samples [default: n]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stride: Option<u64>,
}

#[derive(Debug, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FreeVolumeArgs {
    /// Dimension [default: 2]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    /// Cube side [default: 10]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub side: Option<f64>,
    /// [default: 0.25]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    /// Recorded steps per replica [default: 50000]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub steps: Option<u64>,
    /// [default: 10 n (1 + lambda)]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub burn_in: Option<u64>,
    /// [default: 32]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub replicas: Option<u64>,
    /// [default: 100]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stride: Option<u64>,
    /// Points per free-volume estimate [default: 256]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub free_samples: Option<u64>,
}
