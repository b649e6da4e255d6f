use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "chevron",
    version,
    about = "Two-layer power-law analysis of turbulent boundary-layer profiles"
)]
pub struct Cli {
    #[command(flatten)]
    pub opts: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalOpts {
    /// Lower edge of the fit window in wall units.
    #[arg(long, global = true, default_value_t = 30.0)]
    pub eta_min: f64,

    /// Velocity fraction of U that ends the fit window (outer plateau cut).
    #[arg(long, global = true, default_value_t = 0.99)]
    pub outer_fraction: f64,

    /// Minimum samples per segment in the breakpoint scan.
    #[arg(long, global = true, default_value_t = 4)]
    pub min_points: usize,

    /// SSE improvement factor two segments must achieve over one segment.
    #[arg(long, global = true, default_value_t = 2.0)]
    pub min_improvement: f64,

    /// Minimum |exponent gap| between the segments of a genuine chevron.
    #[arg(long, global = true, default_value_t = 0.02)]
    pub min_slope_gap: f64,

    /// Accept the second region only when it is steeper than the first.
    #[arg(long, global = true)]
    pub require_steeper_outer: bool,

    /// Half-width of the constant-Re band around the median ln Re_Lambda.
    #[arg(long, global = true, default_value_t = 0.3)]
    pub re_band_tol: f64,

    /// Centered moving-average window for C_p smoothing (1 disables).
    #[arg(long, global = true, default_value_t = 1)]
    pub smooth_window: usize,

    /// Output format for reports.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,

    /// Directory for plot data files and figures.
    #[arg(long, global = true)]
    pub plot_dir: Option<PathBuf>,

    /// Base seed for synthetic generation.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Analyze one profile file and report its station record.
    Analyze {
        /// Profile file, either (y, u) with flow headers or (eta, phi).
        profile: PathBuf,
    },

    /// Analyze every profile listed in a manifest, in order.
    Batch {
        /// Text file with one profile path per line, `#` comments allowed.
        manifest: PathBuf,
        /// Write the full station records as JSON to this file.
        #[arg(long)]
        records_out: Option<PathBuf>,
    },

    /// Join a pressure-coefficient series onto existing station records.
    Pressure {
        /// C_p(x) file with U and nu headers.
        #[arg(long)]
        cp: PathBuf,
        /// Optional (x, u_star) table; falls back to per-record u_star.
        #[arg(long)]
        ustar: Option<PathBuf>,
        /// Station records JSON produced by batch.
        #[arg(long)]
        records: PathBuf,
        /// Write the augmented records as JSON to this file.
        #[arg(long)]
        records_out: Option<PathBuf>,
    },

    /// Regress the outer prefactor B against 1/beta at constant Re.
    Relation {
        /// Station records JSON produced by batch or pressure.
        #[arg(long)]
        records: PathBuf,
    },

    /// Generate synthetic stations with known ground truth.
    Synth {
        /// TOML spec file; explicit flags below override its fields.
        #[arg(long)]
        spec: Option<PathBuf>,
        #[arg(long)]
        ln_re_lambda: Option<f64>,
        #[arg(long)]
        beta: Option<f64>,
        #[arg(long)]
        break_eta: Option<f64>,
        /// Grid range in wall units, written LO:HI.
        #[arg(long)]
        eta_range: Option<String>,
        #[arg(long)]
        n_points: Option<usize>,
        #[arg(long)]
        noise_sigma: Option<f64>,
        /// Number of stations; seeds count up from the base seed.
        #[arg(long, default_value_t = 1)]
        stations: usize,
        /// Directory for the profile files and their manifest.
        #[arg(long)]
        out_dir: PathBuf,
    },

    /// Re-render a records file without recomputing anything.
    Report {
        /// Station records JSON.
        #[arg(long)]
        records: PathBuf,
    },
}
