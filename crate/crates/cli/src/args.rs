use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Certified bounds and feedback synthesis for switched linear systems.
#[derive(Debug, Parser)]
#[command(name = "switchstab", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Lower and upper bounds on the stabilization radius.
    Bounds(BoundsArgs),
    /// Control-Lyapunov value tables for planar systems.
    Lyap(LyapArgs),
    /// Orbit of rational lines under the Stanford–Urbano pair.
    Orbit(OrbitArgs),
    /// Full Stanford–Urbano case study.
    CaseStanford(CaseArgs),
    /// Sample-and-hold simulation of a continuous-time switched system.
    Ct(CtArgs),
    /// Write a built-in instance as a matrix-set file.
    Export(ExportArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Sv,
    Cone,
    Alg1,
    BestResponse,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    /// Built-in instance name or matrix-set JSON file.
    pub input: String,
    #[arg(long, value_enum, default_value_t = Method::Sv)]
    pub method: Method,
    /// Largest product length for sv, cone and alg1.
    #[arg(long, default_value_t = 6)]
    pub t_max: usize,
    /// Largest word length for best-response.
    #[arg(long, default_value_t = 9)]
    pub t_bar: usize,
    /// Number of directions on the full circle.
    #[arg(long, default_value_t = 4096)]
    pub grid: usize,
    /// Entrywise tolerance for merging equal products.
    #[arg(long, default_value_t = switchstab_core::linalg::DEFAULT_DEDUP_TOL)]
    pub dedup_tol: f64,
    /// Refuse horizons whose product count exceeds this.
    #[arg(long, default_value_t = switchstab_core::linalg::DEFAULT_PRODUCT_CAP)]
    pub cap: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Vhat,
    Vlam,
}

#[derive(Debug, Args)]
pub struct LyapArgs {
    pub input: String,
    #[arg(long, value_enum, default_value_t = Kind::Vhat)]
    pub kind: Kind,
    #[arg(long)]
    pub lambda: f64,
    /// Angular nodes on [0, π).
    #[arg(long, default_value_t = 4096)]
    pub grid: usize,
    /// Stopping increment for vhat.
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    #[arg(long, default_value_t = 100_000)]
    pub max_iter: usize,
    /// Horizon for vlam.
    #[arg(long, default_value_t = 24)]
    pub horizon: usize,
    /// Also extract a feedback partition with this rate.
    #[arg(long)]
    pub feedback: Option<f64>,
    /// Value table as CSV (angle,value).
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Level set {V = 1} as SVG.
    #[arg(long)]
    pub plot: Option<PathBuf>,
    /// Decrease ratio V(Ax)/V(x) per node as SVG.
    #[arg(long)]
    pub ratio_plot: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OrbitArgs {
    #[arg(long, default_value_t = 12)]
    pub depth: usize,
    /// Tangent p/q to look up; repeatable.
    #[arg(long)]
    pub query: Vec<String>,
    /// Report the rotation angle of A2·A1.
    #[arg(long)]
    pub rotation: bool,
    /// Largest gap between the first n multiples of the rotation angle; repeatable.
    #[arg(long)]
    pub density: Vec<usize>,
    /// Edge list output path.
    #[arg(long)]
    pub edges: Option<PathBuf>,
    #[arg(long, default_value_t = switchstab_core::orbit::DEFAULT_NODE_CAP)]
    pub node_cap: usize,
}

#[derive(Debug, Args)]
pub struct CaseArgs {
    /// Number of angles for F(α) on [0, π).
    #[arg(long, default_value_t = 8192)]
    pub grid: usize,
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long)]
    pub plot: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CtArgs {
    /// Generators of the continuous-time system.
    pub input: String,
    #[arg(long, default_value_t = 0.1)]
    pub delta: f64,
    #[arg(long = "T", default_value_t = 10.0)]
    pub horizon: f64,
    /// Initial state, comma separated; defaults to the first basis vector.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub x0: Option<Vec<f64>>,
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Compare with the system shifted by γ·Id along the realised schedule.
    #[arg(long, allow_hyphen_values = true)]
    pub shift_gamma: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    pub name: String,
    #[arg(long)]
    pub out: PathBuf,
}
