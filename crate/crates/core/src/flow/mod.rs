//! Time integration of the equivariant flow `∂f/∂t⊥ = k⃗ − (n−1) f⊥/|f|²`.

mod avoidance;
mod barrier;
mod engine;
mod monitor;
mod singularity;

pub use avoidance::{avoidance_check, AvoidanceReport};
pub use barrier::neves_initial;
pub use engine::{evolve, normal_velocity, step};
pub use monitor::{monitor_estimates, MonitorReport};
pub use singularity::{classify_singularity_rate, extrapolate_singular_time, SingularityReport, TypeEvidence};

use serde::{Deserialize, Serialize};

use crate::curve::{angle_near_from, chord_derivatives, diagnostics_from, AngleProfile, CurveDiagnostics, MeshDensity, PlanarCurve};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Boundary {
    Closed,
    /// Open arc with fixed end nodes; nodes beyond `collar_radius` are held
    /// on the initial far field.
    PinnedAsymptotes { collar_radius: f64 },
    /// Open arc whose end nodes move with one-sided curvature.
    FreeEnds,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlowConfig {
    pub n: usize,
    #[serde(default = "default_cfl")]
    pub cfl: f64,
    #[serde(default = "default_redistribution_period")]
    pub redistribution_period: usize,
    pub r_floor: f64,
    #[serde(default = "default_kappa_ceiling")]
    pub kappa_ceiling: f64,
    pub t_max: f64,
    pub boundary: Boundary,
    pub mesh: MeshDensity,
    /// Steps between stored snapshots; a snapshot is also taken whenever the
    /// minimum radius has dropped by 10% since the previous one.
    #[serde(default = "default_snapshot_every")]
    pub snapshot_every: usize,
    #[serde(default = "default_max_steps")]
    pub max_steps: usize,
}

fn default_cfl() -> f64 {
    0.2
}
fn default_redistribution_period() -> usize {
    10
}
fn default_kappa_ceiling() -> f64 {
    1e8
}
fn default_snapshot_every() -> usize {
    200
}
fn default_max_steps() -> usize {
    5_000_000
}

impl FlowConfig {
    pub fn new(n: usize, boundary: Boundary, mesh: MeshDensity, r_floor: f64, t_max: f64) -> Self {
        FlowConfig {
            n,
            cfl: default_cfl(),
            redistribution_period: default_redistribution_period(),
            r_floor,
            kappa_ceiling: default_kappa_ceiling(),
            t_max,
            boundary,
            mesh,
            snapshot_every: default_snapshot_every(),
            max_steps: default_max_steps(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |m: String| Err(Error::Domain(m));
        if self.n == 0 {
            return fail("n must be at least 1".into());
        }
        if !(self.cfl > 0.0 && self.cfl <= 0.5) {
            return fail(format!("cfl = {} outside (0, 0.5]", self.cfl));
        }
        if !(self.r_floor > 0.0) {
            return fail(format!("r_floor = {} must be positive", self.r_floor));
        }
        if !(self.kappa_ceiling > 0.0) {
            return fail("kappa_ceiling must be positive".into());
        }
        if !(self.t_max > 0.0) {
            return fail("t_max must be positive".into());
        }
        if self.redistribution_period == 0 || self.snapshot_every == 0 {
            return fail("redistribution_period and snapshot_every must be positive".into());
        }
        if let Boundary::PinnedAsymptotes { collar_radius } = self.boundary {
            if !(collar_radius > 0.0) {
                return fail("collar radius must be positive".into());
            }
        }
        self.mesh.validate()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlowState {
    pub t: f64,
    pub steps: usize,
    pub curve: PlanarCurve,
    pub diagnostics: CurveDiagnostics,
    pub theta: AngleProfile,
}

impl FlowState {
    /// State for `curve` at time `t`, with the angle lift at node 0 placed
    /// nearest to `anchor`.
    pub fn new(curve: PlanarCurve, t: f64, steps: usize, n: usize, anchor: f64) -> Result<Self> {
        let derivs = chord_derivatives(&curve)?;
        let diagnostics = diagnostics_from(&curve, &derivs);
        let theta = angle_near_from(&curve, &derivs, n, anchor)?;
        Ok(FlowState { t, steps, curve, diagnostics, theta })
    }
}

/// Per-step diagnostics.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub step: usize,
    pub t: f64,
    pub max_kappa: f64,
    pub min_r: f64,
    pub theta_min: f64,
    pub theta_max: f64,
    /// sup over nodes of |H|²/(1 + 1/r²).
    pub h_ratio: f64,
    /// sup over nodes of (κ² + 3(n−1)p²)/(1 + 1/r²), p = |⟨γ,N⟩|/r².
    pub a_ratio: f64,
    pub nodes: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Termination {
    TMaxReached,
    SingularityTrigger { reason: String },
    MeshFailure { message: String },
    StepLimit,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlowTrajectory {
    pub config: FlowConfig,
    pub snapshots: Vec<FlowState>,
    pub summary: Vec<SummaryRow>,
    pub termination: Termination,
    pub singularity: Option<SingularityReport>,
}

impl FlowTrajectory {
    pub fn start_time(&self) -> f64 {
        self.snapshots[0].t
    }

    pub fn end_time(&self) -> f64 {
        self.snapshots.last().unwrap().t
    }

    pub fn final_state(&self) -> &FlowState {
        self.snapshots.last().unwrap()
    }

    pub fn is_singular(&self) -> bool {
        matches!(self.termination, Termination::SingularityTrigger { .. })
    }

    /// State at time `t`, re-integrated from the last snapshot at or before `t`.
    pub fn state_at(&self, t: f64) -> Result<FlowState> {
        if t < self.start_time() || t > self.end_time() {
            return Err(Error::Domain(format!(
                "time {t} outside the trajectory [{}, {}]",
                self.start_time(),
                self.end_time()
            )));
        }
        let idx = self.snapshots.partition_point(|s| s.t <= t);
        let mut state = self.snapshots[idx.saturating_sub(1)].clone();
        while state.t < t {
            state = engine::step_until(&state, &self.config, t)?;
        }
        Ok(state)
    }
}
