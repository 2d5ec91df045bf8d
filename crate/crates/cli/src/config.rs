//! JSON config file, merged under command-line flags.

use std::path::Path;

use anyhow::{Context, Result};
use serde::Deserialize;

use rootlab::monodromy::CertifyControls;
use rootlab::{SolveControls, TrackControls};

use crate::UsageError;

/// Every field is optional; flags win over the file, the file over defaults.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub seed: Option<u64>,
    pub tol: Option<f64>,
    pub max_iter: Option<usize>,
    pub h0: Option<f64>,
    pub h_min: Option<f64>,
    pub eps_cont: Option<f64>,
    pub guard: Option<f64>,
    pub samples: Option<usize>,
    pub eps_end_fraction: Option<f64>,
    pub grid: Option<usize>,
    pub grid_a: Option<usize>,
    pub grid_w: Option<usize>,
    pub steps: Option<usize>,
    pub xi_max: Option<f64>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else {
            return Ok(FileConfig::default());
        };
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))
            .map_err(|e| UsageError(format!("{e:#}")))?;
        serde_json::from_str(&text).map_err(|e| {
            UsageError(format!(
                "config {} line {} column {}: {e}",
                path.display(),
                e.line(),
                e.column()
            ))
            .into()
        })
    }
}

/// Solver/tracker overrides shared by several subcommands.
#[derive(Debug, Clone, Default, clap::Args)]
pub struct NumericFlags {
    /// Solver residual tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Solver iteration cap.
    #[arg(long)]
    pub max_iter: Option<usize>,
    /// Initial tracking step.
    #[arg(long)]
    pub h0: Option<f64>,
    /// Minimum tracking step.
    #[arg(long)]
    pub h_min: Option<f64>,
    /// Largest root displacement per accepted step.
    #[arg(long)]
    pub eps_cont: Option<f64>,
    /// Collision guard factor.
    #[arg(long)]
    pub guard: Option<f64>,
}

pub struct Resolved {
    pub seed: u64,
    pub file: FileConfig,
}

impl Resolved {
    pub fn solve(&self, f: &NumericFlags) -> SolveControls {
        let d = SolveControls::default();
        SolveControls {
            tol: f.tol.or(self.file.tol).unwrap_or(d.tol),
            max_iter: f.max_iter.or(self.file.max_iter).unwrap_or(d.max_iter),
            seed: self.seed,
        }
    }

    pub fn track(&self, f: &NumericFlags) -> TrackControls {
        let d = TrackControls::default();
        TrackControls {
            h0: f.h0.or(self.file.h0),
            h_min: f.h_min.or(self.file.h_min),
            eps_cont: f.eps_cont.or(self.file.eps_cont).unwrap_or(d.eps_cont),
            guard: f.guard.or(self.file.guard).unwrap_or(d.guard),
            solver: self.solve(f),
        }
    }

    pub fn certify(&self, f: &NumericFlags, samples: Option<usize>, eps_end_fraction: Option<f64>) -> CertifyControls {
        let d = CertifyControls::default();
        CertifyControls {
            samples: samples.or(self.file.samples).unwrap_or(d.samples),
            eps_end_fraction: eps_end_fraction
                .or(self.file.eps_end_fraction)
                .unwrap_or(d.eps_end_fraction),
            track: self.track(f),
        }
    }
}
