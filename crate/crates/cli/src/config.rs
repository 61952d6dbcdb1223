//! Run configuration: a TOML document with one table per subcommand. Command
//! line flags override the matching keys.

use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use lmcf_core::blowup::BlowupPlan;
use lmcf_core::curve::MeshDensity;
use lmcf_core::flow::Boundary;
use serde::{Deserialize, Serialize};

use crate::error::{io_error, validation, CliResult};

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub soliton: SolitonParams,
    #[serde(default)]
    pub flow: FlowParams,
    #[serde(default)]
    pub blowup: BlowupParams,
    #[serde(default)]
    pub symmetry: SymmetryParams,
    #[serde(default)]
    pub atlas: AtlasParams,
}

impl RunConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| validation(format!("{}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| validation(format!("{}: {e}", path.display())))
    }
}

/// Parses radians, optionally as a multiple of π: `1.2`, `0.6pi`, `pi`.
pub fn parse_angle(s: &str) -> Result<f64, String> {
    let t = s.trim();
    let value = match t.strip_suffix("pi").or_else(|| t.strip_suffix('π')) {
        Some("") => Ok(std::f64::consts::PI),
        Some(f) => f.trim_end_matches('*').parse::<f64>().map(|x| x * std::f64::consts::PI),
        None => t.parse::<f64>(),
    };
    value.map_err(|e| format!("bad angle {s:?}: {e}"))
}

/// Takes every field from `flags` when set, otherwise from `self`.
macro_rules! overlay {
    ($ty:ident { $($field:ident),* $(,)? }) => {
        impl $ty {
            pub fn overlay(self, flags: Self) -> Self {
                $ty { $($field: flags.$field.or(self.$field)),* }
            }
        }
    };
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum SolitonChoice {
    Cone,
    SpecialLagrangian,
    Shrinker,
    Expander,
    GrimReaper,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize, Args)]
#[serde(deny_unknown_fields)]
pub struct SolitonParams {
    #[arg(long, value_enum)]
    pub kind: Option<SolitonChoice>,
    #[arg(long)]
    pub n: Option<usize>,
    /// Shrinker winding number.
    #[arg(long)]
    pub p: Option<u32>,
    /// Shrinker curvature-maxima count.
    #[arg(long)]
    pub q: Option<u32>,
    /// Special Lagrangian scale.
    #[arg(long = "B", alias = "b")]
    pub b: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub k: Option<i64>,
    /// θ̄ in radians (accepts `0.5pi`).
    #[arg(long, value_parser = parse_angle, allow_negative_numbers = true)]
    pub theta: Option<f64>,
    /// Expander asymptote span (accepts `0.2pi`).
    #[arg(long, value_parser = parse_angle)]
    pub alpha: Option<f64>,
    /// Target node spacing of sampled curves.
    #[arg(long)]
    pub spacing: Option<f64>,
    /// Inner radius of cone samples.
    #[arg(long)]
    pub r_min: Option<f64>,
    /// Outer cut-off radius of noncompact samples.
    #[arg(long)]
    pub r_max: Option<f64>,
    /// Grim reaper half-width, below π/2.
    #[arg(long)]
    pub x_max: Option<f64>,
    /// Write an SVG figure.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub figure: Option<bool>,
}

overlay!(SolitonParams { kind, n, p, q, b, k, theta, alpha, spacing, r_min, r_max, x_max, figure });

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum InitialChoice {
    Circle,
    Neves,
    Soliton,
    GrimReaper,
    File,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize, Args)]
#[serde(deny_unknown_fields)]
pub struct FlowParams {
    #[arg(long)]
    pub n: Option<usize>,
    /// Initial curve generator.
    #[arg(long, value_enum)]
    pub initial: Option<InitialChoice>,
    /// Circle radius.
    #[arg(long)]
    pub radius: Option<f64>,
    /// Circle node count.
    #[arg(long)]
    pub nodes: Option<usize>,
    /// Neves wedge angle (accepts `0.6pi`).
    #[arg(long, value_parser = parse_angle)]
    pub beta: Option<f64>,
    /// Neves half-curve sample count.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Neves truncation radius.
    #[arg(long)]
    pub r_max: Option<f64>,
    /// Curve table to start from (`initial = "file"`).
    #[arg(long)]
    pub path: Option<PathBuf>,
    /// Whether the curve table is a closed loop.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub closed: Option<bool>,
    /// Initial soliton (`initial = "soliton"`), as in the `soliton` table.
    #[arg(skip)]
    pub soliton: Option<SolitonParams>,
    #[arg(long)]
    pub t_max: Option<f64>,
    #[arg(long)]
    pub r_floor: Option<f64>,
    #[arg(long)]
    pub cfl: Option<f64>,
    #[arg(long)]
    pub kappa_ceiling: Option<f64>,
    #[arg(long)]
    pub redistribution_period: Option<usize>,
    #[arg(long)]
    pub snapshot_every: Option<usize>,
    #[arg(long)]
    pub max_steps: Option<usize>,
    #[arg(skip)]
    pub boundary: Option<Boundary>,
    #[arg(skip)]
    pub mesh: Option<MeshDensity>,
    /// Uniform mesh spacing, shorthand for a uniform `mesh`.
    #[arg(long)]
    pub spacing: Option<f64>,
    /// Number of snapshot curve tables written.
    #[arg(long)]
    pub snapshot_files: Option<usize>,
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub figure: Option<bool>,
}

overlay!(FlowParams {
    n, initial, radius, nodes, beta, samples, r_max, path, closed, soliton, t_max, r_floor, cfl,
    kappa_ceiling, redistribution_period, snapshot_every, max_steps, boundary, mesh, spacing,
    snapshot_files, figure,
});

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize, Args)]
#[serde(deny_unknown_fields)]
pub struct BlowupParams {
    /// Output directory of a `flow` run.
    #[arg(long)]
    pub trajectory: Option<PathBuf>,
    /// Type I scales, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub scales: Option<Vec<f64>>,
    /// Rescaled time of the Type I curves.
    #[arg(long, allow_negative_numbers = true)]
    pub s: Option<f64>,
    /// Annulus of the cone fits as `r0,r1`.
    #[arg(long, value_delimiter = ',')]
    pub annulus: Option<Vec<f64>>,
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub figure: Option<bool>,
}

overlay!(BlowupParams { trajectory, scales, s, annulus, figure });

impl BlowupParams {
    pub fn plan(&self) -> CliResult<BlowupPlan> {
        let mut plan = BlowupPlan::default();
        if let Some(s) = &self.scales {
            if s.is_empty() || s.iter().any(|x| !(*x > 0.0)) {
                return Err(validation("scales must be positive"));
            }
            plan.scales = s.clone();
        }
        if let Some(s) = self.s {
            plan.s = s;
        }
        if let Some(a) = &self.annulus {
            match a[..] {
                [r0, r1] if r0 > 0.0 && r1 > r0 => plan.annulus = (r0, r1),
                _ => return Err(validation(format!("annulus {a:?} must be 0 < r0 < r1"))),
            }
        }
        Ok(plan)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize, Args)]
#[serde(deny_unknown_fields)]
pub struct SymmetryParams {
    /// `so(N)`, `torus(N)`, `su2-sym3` or `s1-so(P)-so(Q)`.
    #[arg(long)]
    pub preset: Option<String>,
    /// JSON action in the preset catalog format.
    #[arg(long)]
    pub basis: Option<PathBuf>,
    /// Random samples per check.
    #[arg(long)]
    pub samples: Option<usize>,
}

overlay!(SymmetryParams { preset, basis, samples });

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize, Args)]
#[serde(deny_unknown_fields)]
pub struct AtlasParams {
    #[arg(long)]
    pub n: Option<usize>,
    /// Largest curvature-maxima count q.
    #[arg(long)]
    pub q_max: Option<u32>,
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub figure: Option<bool>,
}

overlay!(AtlasParams { n, q_max, figure });

pub fn resolve_path(base: Option<&Path>, p: &Path) -> PathBuf {
    match base {
        Some(dir) if p.is_relative() => dir.join(p),
        _ => p.to_path_buf(),
    }
}

pub fn ensure_dir(dir: &Path) -> CliResult<()> {
    std::fs::create_dir_all(dir).map_err(|e| io_error(dir, e))
}
