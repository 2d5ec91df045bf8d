use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

mod commands;
mod config;
mod output;

use config::NumericFlags;

pub const EXIT_INPUT: u8 = 2;
pub const EXIT_COLLISION: u8 = 3;
pub const EXIT_INCONCLUSIVE: u8 = 4;

/// Bad flags, malformed files and other caller mistakes (exit 2).
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

#[derive(Parser, Debug)]
#[command(name = "rootlab", version, about = "Root selection, tracking and obstruction certificates for monic polynomial families")]
pub struct Cli {
    /// JSON file with default controls; flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// RNG seed for solver start points and sampling.
    #[arg(long, global = true, env = "ROOTLAB_SEED")]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate a quadratic root selector over a rectangle of (a0, a1).
    Quad {
        /// Canonical selector: empty, full, plus or minus.
        #[arg(long, conflicts_with = "custom")]
        selector: Option<String>,
        /// Custom selector description (JSON).
        #[arg(long)]
        custom: Option<PathBuf>,
        /// Rectangle a0_lo:a0_hi:a1_lo:a1_hi.
        #[arg(long = "box", allow_hyphen_values = true, default_value = "-4:4:-4:4")]
        rect: String,
        /// Points per axis.
        #[arg(long)]
        grid: Option<usize>,
        /// Emit a two-point discontinuity witness instead of rows.
        #[arg(long)]
        witness: bool,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Track all roots along a preset or a sampled path file.
    Track {
        #[arg(long, conflicts_with = "file", required_unless_present = "file")]
        preset: Option<String>,
        #[arg(long)]
        file: Option<PathBuf>,
        /// `csv`: trajectories (summary to --summary or stderr); `json`: full bundle.
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Where to write the summary JSON in csv mode.
        #[arg(long)]
        summary: Option<PathBuf>,
        #[command(flatten)]
        numeric: NumericFlags,
    },
    /// Monodromy permutation of a closed loop.
    Monodromy {
        #[arg(long, conflicts_with = "file", required_unless_present = "file")]
        preset: Option<String>,
        #[arg(long)]
        file: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        numeric: NumericFlags,
    },
    /// Emit (or re-validate) an obstruction certificate: deg2c, deg4r or deg5r.
    Certify {
        #[arg(required_unless_present = "recheck", conflicts_with = "recheck")]
        name: Option<String>,
        /// Recompute verdicts of a saved certificate from its margins.
        #[arg(long)]
        recheck: Option<PathBuf>,
        /// Samples per interval.
        #[arg(long)]
        samples: Option<usize>,
        /// Endpoint exclusion as a fraction of the interval length.
        #[arg(long)]
        eps_end_fraction: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        numeric: NumericFlags,
    },
    /// Verify the exponential-polynomial bound over coefficient and data boxes.
    Stability {
        /// Order of the equation.
        #[arg(long)]
        n: usize,
        /// Coefficient box lo:hi per coordinate (a0 first).
        #[arg(long, allow_hyphen_values = true)]
        box_a: String,
        /// Initial-value box lo:hi per coordinate; default [-1, 1]^n.
        #[arg(long, allow_hyphen_values = true)]
        box_w: Option<String>,
        #[arg(long)]
        grid_a: Option<usize>,
        #[arg(long)]
        grid_w: Option<usize>,
        /// Minimum RK4 steps on [0, xi_max].
        #[arg(long)]
        steps: Option<usize>,
        #[arg(long)]
        xi_max: Option<f64>,
        /// Add a Hurwitz raster of the coefficient box to the report.
        #[arg(long)]
        hurwitz_raster: bool,
        #[arg(long, default_value_t = 9)]
        raster_grid: usize,
        /// Write the raster as CSV (a_0..a_{n-1},stable).
        #[arg(long)]
        raster_csv: Option<PathBuf>,
        /// Write (xi, ratio) at the maximising (M, N) as CSV.
        #[arg(long)]
        ratio_csv: Option<PathBuf>,
        /// Also fit the Hölder-1/n modulus of the spectral abscissa on this many random pairs.
        #[arg(long)]
        continuity_pairs: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// All roots of one monic polynomial, coefficients a0,a1,... (`re` or `re:im`).
    Solve {
        #[arg(long, allow_hyphen_values = true)]
        coeffs: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        numeric: NumericFlags,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(commands::exit_code(&err))
        }
    }
}
