use serde::{Deserialize, Serialize};

use super::FlowTrajectory;
use crate::curve::polyline_separation;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AvoidanceReport {
    pub min_separation: f64,
    pub time_of_min: f64,
    /// Separation exceeded the coarser node spacing at every sampled time.
    pub disjoint: bool,
    pub samples: Vec<(f64, f64)>,
}

/// Separation of two flows sampled at `count` common times over the overlap
/// of their time ranges.
pub fn avoidance_check(a: &FlowTrajectory, b: &FlowTrajectory, count: usize) -> Result<AvoidanceReport> {
    let t0 = a.start_time().max(b.start_time());
    let t1 = a.end_time().min(b.end_time());
    if t1 < t0 {
        return Err(Error::Domain(format!("time ranges do not overlap: [{t0}, {t1}]")));
    }
    let count = count.max(2);
    let mut samples = Vec::with_capacity(count);
    let mut disjoint = true;
    let mut best = (f64::INFINITY, t0);
    for j in 0..count {
        let t = t0 + (t1 - t0) * j as f64 / (count - 1) as f64;
        let ca = a.state_at(t)?.curve;
        let cb = b.state_at(t)?.curve;
        let sep = polyline_separation(&ca, &cb);
        let spacing = ca.max_spacing().max(cb.max_spacing());
        if !(sep > spacing) {
            disjoint = false;
        }
        if sep < best.0 {
            best = (sep, t);
        }
        samples.push((t, sep));
    }
    Ok(AvoidanceReport { min_separation: best.0, time_of_min: best.1, disjoint, samples })
}
