use serde::{Deserialize, Serialize};

use super::{FlowTrajectory, SummaryRow};
use crate::error::{Error, Result};

/// σ at or below this counts as the Type I rate.
pub const TYPE_THRESHOLD: f64 = 0.55;
const MIN_SAMPLES: usize = 5;
const MIN_R_SQUARED: f64 = 0.9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TypeEvidence {
    TypeI,
    TypeII,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SingularityReport {
    pub t_est: f64,
    /// Position of the innermost node at the last step, when min r is seen
    /// to decay to zero.
    pub location: Option<[f64; 2]>,
    /// Fit of max|κ| ~ (T−t)^(−σ).
    pub sigma: Option<f64>,
    /// Fit of min r ~ a (T−t)^γ.
    pub radius_exponent: Option<f64>,
    pub fit_r_squared: Option<f64>,
    /// min r decreased through the last decade of `T_est − t`.
    pub trend_confirmed: bool,
    pub type_evidence: TypeEvidence,
}

impl SingularityReport {
    pub(crate) fn inconclusive(traj: &FlowTrajectory) -> Self {
        SingularityReport {
            t_est: traj.end_time(),
            location: None,
            sigma: None,
            radius_exponent: None,
            fit_r_squared: None,
            trend_confirmed: false,
            type_evidence: TypeEvidence::Inconclusive,
        }
    }
}

struct LineFit {
    slope: f64,
    intercept: f64,
    sse: f64,
    r_squared: f64,
}

fn line_fit(x: &[f64], y: &[f64]) -> LineFit {
    let m = x.len() as f64;
    let mx = x.iter().sum::<f64>() / m;
    let my = y.iter().sum::<f64>() / m;
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let syy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse = x.iter().zip(y).map(|(a, b)| (b - intercept - slope * a).powi(2)).sum::<f64>();
    let r_squared = if syy > 0.0 { 1.0 - sse / syy } else { 1.0 };
    LineFit { slope, intercept, sse, r_squared }
}

/// Rows over which min r shrinks by the last factor of ten.
fn final_window(summary: &[SummaryRow]) -> &[SummaryRow] {
    let r_end = summary.last().map_or(0.0, |r| r.min_r);
    let start = summary
        .iter()
        .rposition(|row| row.min_r > 10.0 * r_end)
        .map_or(0, |i| i + 1);
    &summary[start..]
}

fn radius_fit(rows: &[SummaryRow], t_sing: f64) -> LineFit {
    let x: Vec<f64> = rows.iter().map(|r| (t_sing - r.t).ln()).collect();
    let y: Vec<f64> = rows.iter().map(|r| r.min_r.ln()).collect();
    line_fit(&x, &y)
}

/// Singular time from a least-squares fit of `min r ≈ a (T−t)^γ` over the
/// rows where min r falls through its last decade.
///
/// T is found by golden-section search on `ln(T − t_end)`; γ and a follow by
/// linear regression. Returns `(T, γ, a)`.
pub fn extrapolate_singular_time(summary: &[SummaryRow]) -> Result<(f64, f64, f64)> {
    let rows = final_window(summary);
    if rows.len() < MIN_SAMPLES {
        return Err(Error::NoFit(format!("only {} samples in the final decade of min r", rows.len())));
    }
    let t_end = rows.last().unwrap().t;
    let span = t_end - rows[0].t;
    if !(span > 0.0) {
        return Err(Error::NoFit("final decade has zero duration".into()));
    }
    let cost = |u: f64| radius_fit(rows, t_end + u.exp()).sse;
    // Coarse scan then golden refinement, since the cost can be flat far out.
    let (lo, hi) = ((1e-8 * span).ln(), (10.0 * span).ln());
    let grid = 200;
    let mut best = (lo, f64::INFINITY);
    for j in 0..=grid {
        let u = lo + (hi - lo) * j as f64 / grid as f64;
        let c = cost(u);
        if c < best.1 {
            best = (u, c);
        }
    }
    let h = (hi - lo) / grid as f64;
    let (mut a, mut b) = (best.0 - h, best.0 + h);
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    for _ in 0..100 {
        if cost(c) < cost(d) {
            b = d;
        } else {
            a = c;
        }
        c = b - g * (b - a);
        d = a + g * (b - a);
    }
    let t_sing = t_end + (0.5 * (a + b)).exp();
    let fit = radius_fit(rows, t_sing);
    Ok((t_sing, fit.slope, fit.intercept.exp()))
}

/// Blow-up rate of max|κ| over the final decade of `T_est − t`.
pub fn classify_singularity_rate(traj: &FlowTrajectory) -> Result<SingularityReport> {
    if !traj.is_singular() {
        return Ok(SingularityReport::inconclusive(traj));
    }
    let (t_est, gamma, _) = extrapolate_singular_time(&traj.summary)?;
    let t_end = traj.summary.last().unwrap().t;
    let tau_end = t_est - t_end;
    let rows: Vec<&SummaryRow> = traj
        .summary
        .iter()
        .filter(|r| t_est - r.t <= 10.0 * tau_end)
        .collect();
    if rows.len() < MIN_SAMPLES {
        return Err(Error::NoFit(format!("only {} samples in the final decade of T − t", rows.len())));
    }
    let x: Vec<f64> = rows.iter().map(|r| (t_est - r.t).ln()).collect();
    let y: Vec<f64> = rows.iter().map(|r| r.max_kappa.ln()).collect();
    let fit = line_fit(&x, &y);
    let sigma = -fit.slope;
    let trend_confirmed = gamma > 0.0 && radius_decreasing(&rows, t_est, tau_end);
    let location = trend_confirmed.then(|| {
        let d = &traj.final_state().diagnostics;
        let z = traj.final_state().curve.nodes()[d.min_r().0];
        [z.re, z.im]
    });
    let type_evidence = if fit.r_squared < MIN_R_SQUARED {
        TypeEvidence::Inconclusive
    } else if sigma <= TYPE_THRESHOLD {
        TypeEvidence::TypeI
    } else {
        TypeEvidence::TypeII
    };
    Ok(SingularityReport {
        t_est,
        location,
        sigma: Some(sigma),
        radius_exponent: Some(gamma),
        fit_r_squared: Some(fit.r_squared),
        trend_confirmed,
        type_evidence,
    })
}

/// min r at eleven log-spaced times across `T − t ∈ [τ, 10τ]` is strictly decreasing.
fn radius_decreasing(rows: &[&SummaryRow], t_est: f64, tau_end: f64) -> bool {
    let mut prev = f64::INFINITY;
    for j in (0..=10).rev() {
        let tau = tau_end * 10f64.powf(j as f64 / 10.0);
        let t = t_est - tau;
        let Some(row) = rows.iter().rev().find(|r| r.t <= t).or(rows.first()) else {
            return false;
        };
        if j < 10 && !(row.min_r < prev) {
            return false;
        }
        prev = row.min_r;
    }
    true
}
