use serde::{Deserialize, Serialize};

use crate::curve::PlanarCurve;
use crate::error::{Error, Result};
use crate::flow::FlowTrajectory;

/// Curves `λ·f(T_est + s/λ²)` for each scale λ, blowing up at the origin.
pub fn type1_rescale(traj: &FlowTrajectory, t_est: f64, scales: &[f64], s: f64) -> Result<Vec<PlanarCurve>> {
    if !(s < 0.0) {
        return Err(Error::Domain(format!("rescaled time s = {s} must be negative")));
    }
    scales
        .iter()
        .map(|&lambda| {
            if !(lambda > 0.0) {
                return Err(Error::Domain(format!("scale {lambda} must be positive")));
            }
            let t = t_est + s / (lambda * lambda);
            if t < traj.start_time() {
                return Err(Error::Domain(format!("scale {lambda} needs time {t} before the run starts")));
            }
            if t > traj.end_time() {
                return Err(Error::Domain(format!(
                    "scale {lambda} needs time {t} after the last step {}",
                    traj.end_time()
                )));
            }
            traj.state_at(t)?.curve.scaled(lambda)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Type2Rescaling {
    /// The curve scaled by `scale`, so that max|κ| = 1. It is not translated:
    /// the physical origin stays at the origin and the fit region is centred
    /// on `peak` instead.
    pub curve: PlanarCurve,
    pub time: f64,
    pub scale: f64,
    /// Curvature peak in rescaled coordinates.
    pub peak: [f64; 2],
}

/// Discrete Type II rescaling: the step maximizing `max κ² · (T_cut − t)` with
/// `T_cut` the last recorded time.
pub fn type2_rescale(traj: &FlowTrajectory) -> Result<Type2Rescaling> {
    if !traj.is_singular() {
        return Err(Error::Domain("trajectory never reached a singularity trigger".into()));
    }
    let t_cut = traj.summary.last().unwrap().t;
    let best = traj
        .summary
        .iter()
        .map(|row| (row.t, row.max_kappa.powi(2) * (t_cut - row.t)))
        .fold((traj.start_time(), f64::NEG_INFINITY), |a, b| if b.1 > a.1 { b } else { a });
    let state = traj.state_at(best.0)?;
    let (idx, kappa) = state.diagnostics.max_abs_kappa();
    let peak = state.curve.nodes()[idx] * kappa;
    Ok(Type2Rescaling {
        curve: state.curve.scaled(kappa)?,
        time: state.t,
        scale: kappa,
        peak: [peak.re, peak.im],
    })
}
