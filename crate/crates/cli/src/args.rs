use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "hilab", version, about = "Batch experiments for higher index theory at desk scale")]
#[command(args_override_self = true)]
pub struct Cli {
    /// JSON file whose keys are flag names of the chosen subcommand.
    /// An optional "experiment" key selects the subcommand.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<String>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Volume of a geodesic simplex with a quadrature convergence sweep.
    SimplexVolume(SimplexVolumeArgs),
    /// Evaluate the area cocycle at explicit group elements.
    CocycleEval(CocycleEvalArgs),
    /// Check the cocycle identity on random tuples.
    CocycleCheck(CocycleCheckArgs),
    /// Maximal cocycle values over radius shells.
    GrowthProfile(GrowthProfileArgs),
    /// Van Est round trip of the Euclidean area cocycle.
    VanestRoundtrip(VanestArgs),
    /// Chern pairings of lattice idempotents with group cocycles.
    ConvPairing(ConvPairingArgs),
    /// Lattice against spectral evaluation of the area cocycle.
    FourierCheck(FourierArgs),
    /// Both sides of the Morita identity for a kernel idempotent.
    MoritaCheck(MoritaArgs),
    /// Trace pairings of the four index projectors of a random operator.
    FredholmDemo(FredholmArgs),
    /// Topological side of the higher index formula.
    IndexRhs(IndexRhsArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::SimplexVolume(_) => "simplex-volume",
            Command::CocycleEval(_) => "cocycle-eval",
            Command::CocycleCheck(_) => "cocycle-check",
            Command::GrowthProfile(_) => "growth-profile",
            Command::VanestRoundtrip(_) => "vanest-roundtrip",
            Command::ConvPairing(_) => "conv-pairing",
            Command::FourierCheck(_) => "fourier-check",
            Command::MoritaCheck(_) => "morita-check",
            Command::FredholmDemo(_) => "fredholm-demo",
            Command::IndexRhs(_) => "index-rhs",
        }
    }
}

pub const SUBCOMMANDS: [&str; 10] = [
    "simplex-volume",
    "cocycle-eval",
    "cocycle-check",
    "growth-profile",
    "vanest-roundtrip",
    "conv-pairing",
    "fourier-check",
    "morita-check",
    "fredholm-demo",
    "index-rhs",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Model {
    Euclidean,
    Hyperbolic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MoritaCocycle {
    Constant,
    Area,
    Inhomogeneous,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum IndexCase {
    Flat,
    Magnetic,
    Exact,
}

/// Output directory shared by every subcommand.
#[derive(Debug, Clone, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct Output {
    /// Directory receiving summary.json and table.csv.
    #[arg(long, value_name = "DIR")]
    pub out: Option<String>,
}

#[derive(Debug, Clone, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct SimplexVolumeArgs {
    #[arg(long, value_enum, default_value = "euclidean")]
    pub model: Model,
    /// Vertices as `x,y;x,y;...`; hyperbolic vertices are points x + iy of the upper half-plane.
    #[arg(long, default_value = "0,0;2,0;0,2")]
    pub vertices: String,
    /// Largest quadrature order of the sweep.
    #[arg(long, default_value_t = 16)]
    pub order: usize,
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct CocycleEvalArgs {
    #[arg(long, value_enum, default_value = "euclidean")]
    pub model: Model,
    /// Three vertices `x,y;x,y;x,y` of the orbit triangle.
    #[arg(long, default_value = "0,0;1,0;0,1")]
    pub points: String,
    #[arg(long, default_value_t = 64)]
    pub order: usize,
    /// Allowed gap to the closed-form area.
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct CocycleCheckArgs {
    #[arg(long, value_enum, default_value = "euclidean")]
    pub model: Model,
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
    /// Sampling radius; group distance for the hyperbolic model.
    #[arg(long, default_value_t = 3.0)]
    pub radius: f64,
    #[arg(long, default_value_t = 32)]
    pub order: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Defaults to 1e-9 (Euclidean) or 1e-6 (hyperbolic).
    #[arg(long)]
    pub tol: Option<f64>,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct GrowthProfileArgs {
    #[arg(long, value_enum, default_value = "hyperbolic")]
    pub model: Model,
    /// Only the area cocycle (degree 2) is available.
    #[arg(long, default_value_t = 2)]
    pub degree: usize,
    /// `start:stop[:step]` or a comma-separated list.
    #[arg(long, default_value = "1:10")]
    pub radii: String,
    /// Samples per shell; defaults to 10 (hyperbolic) or 200 (Euclidean).
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long, default_value_t = 128)]
    pub order: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Largest admissible fitted exponent for the Euclidean model.
    #[arg(long, default_value_t = 2.05)]
    pub max_exponent: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct VanestArgs {
    #[arg(long, default_value_t = 5)]
    pub points: usize,
    #[arg(long, default_value_t = 0.05)]
    pub spacing: f64,
    #[arg(long, default_value_t = 1.0)]
    pub eps: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 5e-3)]
    pub tol: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct ConvPairingArgs {
    #[arg(long, default_value_t = 5)]
    pub trials: usize,
    #[arg(long = "box", default_value_t = 12)]
    #[serde(rename = "box")]
    pub radius: i64,
    #[arg(long, default_value_t = 1.0)]
    pub spacing: f64,
    /// Nonzero sites of each random entry.
    #[arg(long, default_value_t = 2)]
    pub sites: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct FourierArgs {
    #[arg(long, default_value_t = 10)]
    pub trios: usize,
    #[arg(long = "box", default_value_t = 32)]
    #[serde(rename = "box")]
    pub radius: i64,
    #[arg(long, default_value_t = 0.25)]
    pub spacing: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Relative tolerance.
    #[arg(long, default_value_t = 1e-2)]
    pub tol: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct MoritaArgs {
    /// Group dimension.
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    #[arg(long = "box", default_value_t = 16)]
    #[serde(rename = "box")]
    pub radius: i64,
    /// Number of slice points on a circle.
    #[arg(long, default_value_t = 8)]
    pub slice: usize,
    #[arg(long, default_value_t = 0.5)]
    pub spacing: f64,
    /// Rank of the slice projection.
    #[arg(long, default_value_t = 1)]
    pub rank: usize,
    #[arg(long, default_value_t = 2)]
    pub sites: usize,
    #[arg(long, value_enum, default_value = "area")]
    pub cocycle: MoritaCocycle,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct FredholmArgs {
    #[arg(long, default_value_t = 5)]
    pub p: usize,
    #[arg(long, default_value_t = 3)]
    pub q: usize,
    /// Rank of D+; full rank when absent.
    #[arg(long)]
    pub rank: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct IndexRhsArgs {
    #[arg(long = "case", value_enum, default_value = "flat")]
    #[serde(rename = "case")]
    pub case: IndexCase,
    /// Magnetic field strength B.
    #[arg(long, default_value_t = 1.0)]
    pub field: f64,
    #[arg(long, default_value_t = 0.05)]
    pub spacing: f64,
    #[arg(long, default_value_t = 0.5)]
    pub eps: f64,
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: Output,
}
