use serde::{Deserialize, Serialize};

use super::FlowTrajectory;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonitorReport {
    pub h_ratio_initial: f64,
    pub h_ratio_sup: f64,
    pub a_ratio_initial: f64,
    pub a_ratio_sup: f64,
    /// Either ratio grew past `growth_limit` times its initial value.
    pub flagged: bool,
}

/// Running suprema of `|H|²/(1 + 1/r²)` and of `(κ² + 3(n−1)p²)/(1 + 1/r²)`.
pub fn monitor_estimates(traj: &FlowTrajectory, growth_limit: f64) -> MonitorReport {
    let first = traj.summary[0];
    let h_sup = traj.summary.iter().map(|r| r.h_ratio).fold(0.0, f64::max);
    let a_sup = traj.summary.iter().map(|r| r.a_ratio).fold(0.0, f64::max);
    let grew = |sup: f64, init: f64| sup > growth_limit * init.max(f64::MIN_POSITIVE);
    MonitorReport {
        h_ratio_initial: first.h_ratio,
        h_ratio_sup: h_sup,
        a_ratio_initial: first.a_ratio,
        a_ratio_sup: a_sup,
        flagged: grew(h_sup, first.h_ratio) || grew(a_sup, first.a_ratio),
    }
}
