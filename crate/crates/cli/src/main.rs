//! `dctcs`: sparsify, corrupt, reconstruct and score 8-bit PGM/PPM images.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "dctcs", version, about = "Block-DCT L1 recovery of missing and impulse-corrupted pixels")]
pub struct Cli {
    /// Seed for every random choice; echoed in the manifest.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Keep only the largest DCT coefficients of every block.
    Sparsify(SparsifyArgs),
    /// Remove pixels at random or add salt-and-pepper noise.
    Corrupt(CorruptArgs),
    /// Recover missing pixels by block-DCT L1 gradient descent.
    Reconstruct(ReconstructArgs),
    /// Median-filter baseline.
    Median(MedianArgs),
    /// MSE and PSNR of an image against a reference.
    Metrics(MetricsArgs),
}

#[derive(Args, Debug)]
pub struct SparsifyArgs {
    #[arg(short, long)]
    pub input: PathBuf,
    #[arg(short, long)]
    pub output: PathBuf,
    #[arg(long, default_value_t = 8)]
    pub block_size: usize,
    /// Coefficients retained per block.
    #[arg(long, default_value_t = 8)]
    pub keep_k: usize,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum CorruptMode {
    Missing,
    Saltpepper,
}

#[derive(Args, Debug)]
pub struct CorruptArgs {
    #[arg(short, long)]
    pub input: PathBuf,
    /// Corrupted image; missing pixels are drawn white (255).
    #[arg(short, long)]
    pub output: PathBuf,
    /// Availability mask (255 = known, 0 = missing). Required in missing mode.
    #[arg(long)]
    pub mask: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = CorruptMode::Missing)]
    pub mode: CorruptMode,
    /// Fraction of pixels removed or corrupted.
    #[arg(long)]
    pub density: f64,
    /// Share of impulses that are salt (255) rather than pepper (0).
    #[arg(long, default_value_t = 0.5)]
    pub salt_fraction: f64,
    /// Map [0, 255] onto [1, 254] first so that impulse detection is exact.
    #[arg(long)]
    pub prescale: bool,
}

#[derive(Args, Debug)]
pub struct ReconstructArgs {
    #[arg(short, long)]
    pub input: PathBuf,
    #[arg(long, required_unless_present = "detect_saltpepper", conflicts_with = "detect_saltpepper")]
    pub mask: Option<PathBuf>,
    /// Treat every 0/255 pixel as missing and start it at 128.
    #[arg(long)]
    pub detect_saltpepper: bool,
    #[arg(short, long)]
    pub output: PathBuf,
    #[arg(long, default_value_t = 8)]
    pub block_size: usize,
    #[arg(long, default_value_t = 128.0)]
    pub delta0: f64,
    /// Defaults to 1 / block size.
    #[arg(long)]
    pub mu_over_delta: Option<f64>,
    #[arg(long, default_value_t = 0.1)]
    pub reduction: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub delta_min: f64,
    #[arg(long, default_value_t = 2000)]
    pub max_iters: usize,
    #[arg(long, default_value_t = 1)]
    pub patience: usize,
    /// Starting value of missing pixels (default 0, or 128 with --detect-saltpepper).
    #[arg(long)]
    pub init_value: Option<f64>,
    /// Per-block convergence trace (`iter, J, delta` rows).
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Image to score against; defaults to the input.
    #[arg(long)]
    pub reference: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct MedianArgs {
    #[arg(short, long)]
    pub input: PathBuf,
    #[arg(short, long)]
    pub output: PathBuf,
    /// 3 or 5.
    #[arg(long, default_value_t = 3)]
    pub window: usize,
    #[arg(long)]
    pub reference: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct MetricsArgs {
    #[arg(long)]
    pub reference: PathBuf,
    #[arg(long)]
    pub image: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(commands::exit_code(&err))
        }
    }
}
