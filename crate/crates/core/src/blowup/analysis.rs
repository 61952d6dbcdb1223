use serde::{Deserialize, Serialize};

use super::{blowdown_consistency, fit_cone_pair, fit_special_lagrangian, type1_rescale, type2_rescale, BlowupMode, BlowupReport};
use crate::curve::{hausdorff_distance, PlanarCurve, Region};
use crate::error::{Error, Result};
use crate::flow::FlowTrajectory;

/// Rescalings and fit windows for [`analyze_blowup`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlowupPlan {
    /// Type I scales λ, increasing.
    #[serde(default = "default_scales")]
    pub scales: Vec<f64>,
    /// Rescaled time `s < 0` at which the Type I curves are taken.
    #[serde(default = "default_s")]
    pub s: f64,
    /// Annulus `[r0, r1]` of the Type I ray fits.
    #[serde(default = "default_annulus")]
    pub annulus: (f64, f64),
}

fn default_scales() -> Vec<f64> {
    vec![1000.0, 1500.0, 2000.0]
}
fn default_s() -> f64 {
    -1.0
}
fn default_annulus() -> (f64, f64) {
    (5.0, 10.0)
}

impl Default for BlowupPlan {
    fn default() -> Self {
        BlowupPlan {
            scales: default_scales(),
            s: default_s(),
            annulus: default_annulus(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScaleFit {
    pub scale: f64,
    pub time: f64,
    /// Cone-pair fit on the annulus, or why it failed.
    pub cone: std::result::Result<BlowupReport, String>,
    /// Hausdorff distance on the disk of radius `annulus.1` to `√(−s/T)` times
    /// the initial curve, the blowup a self-similarly shrinking run would give.
    pub self_similar_distance: Option<f64>,
    #[serde(skip)]
    pub curve: PlanarCurve,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Type2Fit {
    pub time: f64,
    pub scale: f64,
    /// Curvature peak in rescaled coordinates.
    pub peak: [f64; 2],
    pub model: std::result::Result<BlowupReport, String>,
    #[serde(skip)]
    pub curve: PlanarCurve,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BlowupAnalysis {
    pub t_est: f64,
    pub type1: Vec<ScaleFit>,
    pub type2: Type2Fit,
    /// Type II model against the cone fit at the largest scale; false when
    /// either fit is missing.
    pub consistency: bool,
}

impl BlowupAnalysis {
    /// Cone fit at the largest scale.
    pub fn final_cone(&self) -> Option<&BlowupReport> {
        self.type1
            .iter()
            .max_by(|a, b| a.scale.total_cmp(&b.scale))
            .and_then(|f| f.cone.as_ref().ok())
    }
}

/// Both blowups of a singular run and their blowdown consistency.
///
/// Fit failures are recorded in the result; only a run without a singularity
/// or rescaling times outside the run are errors.
pub fn analyze_blowup(traj: &FlowTrajectory, plan: &BlowupPlan) -> Result<BlowupAnalysis> {
    if !traj.is_singular() {
        return Err(Error::Domain("trajectory has no singularity".into()));
    }
    let t_est = traj
        .singularity
        .as_ref()
        .map_or(traj.end_time(), |r| r.t_est);
    let n = traj.config.n;
    let curves = type1_rescale(traj, t_est, &plan.scales, plan.s)?;
    let initial = traj.snapshots[0].curve.scaled((-plan.s / (t_est - traj.start_time())).sqrt())?;
    let disk = Region::Disk { center: [0.0, 0.0], radius: plan.annulus.1 };
    let type1 = plan
        .scales
        .iter()
        .zip(curves)
        .map(|(&scale, curve)| ScaleFit {
            scale,
            time: t_est + plan.s / (scale * scale),
            cone: fit_cone_pair(&curve, plan.annulus, n)
                .map(|f| BlowupReport::from(&f))
                .map_err(|e| e.to_string()),
            self_similar_distance: hausdorff_distance(&curve, &initial, &disk).ok(),
            curve,
        })
        .collect::<Vec<_>>();
    let rescaled = type2_rescale(traj)?;
    let model = fit_special_lagrangian(&rescaled.curve, n)
        .map(|fit| BlowupReport {
            mode: BlowupMode::TypeII,
            theta_bar: fit.theta_bar,
            k: fit.k,
            b: Some(fit.b),
            residual: fit.residual,
            measured_gap: None,
            translation: Some(fit.translation),
            consistency: None,
        })
        .map_err(|e| e.to_string());
    let mut analysis = BlowupAnalysis {
        t_est,
        type1,
        type2: Type2Fit {
            time: rescaled.time,
            scale: rescaled.scale,
            peak: rescaled.peak,
            model,
            curve: rescaled.curve,
        },
        consistency: false,
    };
    let consistency = match (analysis.final_cone(), analysis.type2.model.as_ref()) {
        (Some(cone), Ok(model)) => blowdown_consistency(cone, model, n),
        _ => false,
    };
    analysis.consistency = consistency;
    for f in &mut analysis.type1 {
        if let Ok(r) = f.cone.as_mut() {
            r.consistency = Some(consistency);
        }
    }
    if let Ok(r) = analysis.type2.model.as_mut() {
        r.consistency = Some(consistency);
    }
    Ok(analysis)
}
