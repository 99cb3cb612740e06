//! Command-line configuration. The parsed struct doubles as the `config`
//! block echoed into every report.

use campanato_core::campanato::DiskGrid;
use campanato_core::hardy::QuadratureGrid;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::path::PathBuf;

use crate::CliError;

pub const MAX_ANGLES: usize = 4096;
pub const MAX_CIRCLE_NODES: usize = 1 << 16;
pub const MAX_RADIAL_NODES: usize = 4096;
pub const MAX_LEVEL_NODES: usize = 1 << 16;
pub const MAX_RAYS: usize = 64;
pub const MAX_CARLESON_DEPTH: u32 = 12;

#[derive(Debug, Clone, Parser, Serialize)]
#[command(name = "campanato", version, about = "Campanato seminorms and composition-operator criteria on the unit disk")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub options: Options,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Options {
    /// Deepest grid radius is 1 - 2^-k_sup (at most 14).
    #[arg(long, global = true, default_value_t = 14)]
    pub k_sup: u32,
    /// Angles per grid radius before boundary refinement.
    #[arg(long, global = true, default_value_t = 64)]
    pub angles: usize,
    /// Cap on angles per grid radius.
    #[arg(long, global = true, default_value_t = 256)]
    pub max_angles: usize,
    /// Circle nodes of the polar area rule (M).
    #[arg(long, global = true, default_value_t = 4096)]
    pub circle_nodes: usize,
    /// Radial nodes of the polar area rule (K).
    #[arg(long, global = true, default_value_t = 256)]
    pub radial_nodes: usize,
    /// Boundary samples for level sets and arc oscillations.
    #[arg(long, global = true, default_value_t = 8192)]
    pub level_nodes: usize,
    /// Boundary samples for self-map certificates.
    #[arg(long, global = true, default_value_t = 4096)]
    pub cert_samples: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, short, global = true)]
    #[serde(skip)]
    pub output: Option<PathBuf>,
    /// Record wall-clock timings (makes reports run-dependent).
    #[arg(long, global = true)]
    pub timings: bool,
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum Command {
    /// Star and arc seminorms, derivative growth and H^2 norm of a function.
    Norm {
        #[arg(long)]
        symbol: String,
        #[arg(long, default_value_t = 1.0)]
        p: f64,
        #[arg(long, default_value_t = 10)]
        arc_levels: u32,
    },
    /// Theta and derivative boundedness profiles for a self-map.
    Criterion {
        #[arg(long)]
        symbol: String,
        #[arg(long, default_value_t = 1.0)]
        p: f64,
        #[arg(long, default_value_t = 1.0)]
        q: f64,
        /// Threshold on |phi(a)| for the case split.
        #[arg(long, default_value_t = 0.9)]
        split: f64,
    },
    /// Theta and derivative quantities along rays where |phi(a)| -> 1.
    Vanishing {
        #[arg(long)]
        symbol: String,
        #[arg(long, default_value_t = 1.0)]
        p: f64,
        #[arg(long, default_value_t = 1.0)]
        q: f64,
        #[arg(long, default_value_t = 8)]
        rays: usize,
    },
    /// Integral identities and inequalities, for one symbol or the catalog.
    Identities {
        /// Run the whole catalog.
        #[arg(long)]
        all: bool,
        #[arg(long)]
        symbol: Option<String>,
    },
    /// Preimages, counting function and the counting-function identities.
    Nevanlinna {
        #[arg(long)]
        symbol: String,
        /// Function for the change of variables.
        #[arg(long, default_value = "monomial(1)")]
        f: String,
        /// Target for preimages and the counting function.
        #[arg(long)]
        w: Option<String>,
    },
    /// Carleson-box norm of |f'|^2 (1-|z|^2) dm and the fourth-moment comparison.
    Carleson {
        #[arg(long)]
        symbol: String,
        #[arg(long, default_value_t = 1.0)]
        p: f64,
        #[arg(long, default_value_t = 8)]
        depth: u32,
    },
    /// Every criterion and diagnostic for one self-map.
    FullReport {
        #[arg(long)]
        symbol: String,
        #[arg(long, default_value_t = 1.0)]
        p: f64,
        #[arg(long, default_value_t = 1.0)]
        q: f64,
        /// Test function for the norm transfer bound.
        #[arg(long, default_value = "monomial(1)")]
        f: String,
        #[arg(long, default_value_t = 8)]
        rays: usize,
    },
}

impl Options {
    pub fn disk_grid(&self) -> Result<DiskGrid, CliError> {
        if self.max_angles > MAX_ANGLES {
            return Err(CliError::Usage(format!("--max-angles is capped at {MAX_ANGLES}")));
        }
        Ok(DiskGrid::new(self.k_sup, self.angles, self.max_angles)?)
    }

    pub fn quadrature_grid(&self) -> Result<QuadratureGrid, CliError> {
        if !(16..=MAX_CIRCLE_NODES).contains(&self.circle_nodes) {
            return Err(CliError::Usage(format!("--circle-nodes must lie in [16, {MAX_CIRCLE_NODES}]")));
        }
        if !(8..=MAX_RADIAL_NODES).contains(&self.radial_nodes) {
            return Err(CliError::Usage(format!("--radial-nodes must lie in [8, {MAX_RADIAL_NODES}]")));
        }
        Ok(QuadratureGrid::new(self.circle_nodes, self.radial_nodes))
    }

    pub fn level_nodes(&self) -> Result<usize, CliError> {
        if !(64..=MAX_LEVEL_NODES).contains(&self.level_nodes) {
            return Err(CliError::Usage(format!("--level-nodes must lie in [64, {MAX_LEVEL_NODES}]")));
        }
        Ok(self.level_nodes)
    }
}

/// Criterion commands accept `p, q` in `[0, 2)`.
pub fn check_pair(p: f64, q: f64) -> Result<(), CliError> {
    for (name, v) in [("p", p), ("q", q)] {
        if !(0.0..2.0).contains(&v) {
            return Err(CliError::Usage(format!("--{name} must lie in [0, 2), got {v}")));
        }
    }
    Ok(())
}
