use std::f64::consts::TAU;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::shooting::{integrate_with, locate_event, ShootingState, STEP_FRACTION};
use super::{gcd, SolitonKind, SolitonSpec};
use crate::curve::{PlanarCurve, Topology};
use crate::error::{Error, Result};

/// Integrate from the apsis at `r_apsis` to the next apsis of the same kind and
/// return the swept angle of arg γ together with the end state.
fn full_period(r_apsis: f64, lambda: f64, n: usize, fraction: f64) -> Result<(f64, ShootingState)> {
    let start = ShootingState::apsis(r_apsis, 0.0);
    let budget = 200.0 * (r_apsis + 1.0 / r_apsis);
    let mut crossings = 0;
    let mut prev_sign = 0.0;
    let mut found: Option<(ShootingState, f64)> = None;
    let trace = integrate_with(start, lambda, n, budget, fraction, |a, b| {
        let g = b.radial_speed();
        if prev_sign == 0.0 {
            prev_sign = g.signum();
            return false;
        }
        if g.signum() != prev_sign && g != 0.0 {
            prev_sign = g.signum();
            crossings += 1;
            if crossings == 2 {
                found = Some((*a, b.s - a.s));
                return true;
            }
        }
        false
    });
    trace.map_err(|e| Error::Domain(format!("non-oscillatory start r = {r_apsis}: {e}")))?;
    let (from, h) = found.ok_or_else(|| {
        Error::Domain(format!("non-oscillatory start r = {r_apsis}: no return to an apsis"))
    })?;
    let end = locate_event(&from, h, lambda, n, |s| s.radial_speed())?;
    Ok((end.swept_angle, end))
}

/// Angle of arg γ swept over one radial oscillation started at an apsis.
pub fn period_angle(r_apsis: f64, lambda: f64, n: usize) -> Result<f64> {
    period_angle_with_step(r_apsis, lambda, n, STEP_FRACTION)
}

pub fn period_angle_with_step(r_apsis: f64, lambda: f64, n: usize, fraction: f64) -> Result<f64> {
    if !(r_apsis > 0.0) || lambda <= 0.0 {
        return Err(Error::Domain("period angle needs r > 0 and λ > 0".into()));
    }
    let r_circle = (n as f64 / lambda).sqrt();
    if ((r_apsis - r_circle) / r_circle).abs() < 1e-9 {
        return Err(Error::Domain("start on the stationary circle has no oscillation".into()));
    }
    full_period(r_apsis, lambda, n, fraction).map(|x| x.0)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShrinkerSolution {
    pub spec: SolitonSpec,
    /// Outer apsis radius of the closed orbit.
    pub r_apsis: f64,
    pub period_angle: f64,
    pub closure_gap: f64,
    pub direction_gap: f64,
    pub curve: PlanarCurve,
}

fn outer_radius_ok(r: f64, n: usize) -> bool {
    full_period(r, 1.0, n, STEP_FRACTION).is_ok()
}

/// Outer apsis radii `(√n, r_edge)` whose orbits return to an apsis.
///
/// The upper edge is where the inner turning point falls below the integrator's
/// radius floor, located by bisection on turning-point existence. For `n = 1`
/// the origin is not singular and the search stops at `10⁴·√n`.
pub fn oscillatory_window(n: usize) -> Result<(f64, f64)> {
    let rc = (n as f64).sqrt();
    let cap = 1e4 * rc;
    let mut ok = rc * 1.5;
    if !outer_radius_ok(ok, n) {
        return Err(Error::Numerical(format!("no oscillation near the circle for n = {n}")));
    }
    let mut bad = ok * 2.0;
    while outer_radius_ok(bad, n) {
        ok = bad;
        bad *= 2.0;
        if bad > cap {
            return Ok((rc, cap));
        }
    }
    while (bad - ok) > 1e-6 * ok {
        let mid = 0.5 * (ok + bad);
        if outer_radius_ok(mid, n) {
            ok = mid;
        } else {
            bad = mid;
        }
    }
    Ok((rc, ok))
}

/// Outer apsis radius whose period angle equals `target`.
///
/// A geometric scan outward from the circle brackets the first sign change;
/// bisection then refines it to relative width `1e-10`. Starts that fail to
/// oscillate count as lying beyond the root, since Δα decreases toward π/n at
/// the window edge.
fn solve_apsis(target: f64, n: usize, fraction: f64) -> Result<f64> {
    let rc = (n as f64).sqrt();
    let f = |r: f64| match full_period(r, 1.0, n, fraction) {
        Ok((a, _)) => Some(a - target),
        Err(_) => None,
    };
    let mut lo = rc * (1.0 + 1e-4);
    match f(lo) {
        Some(v) if v > 0.0 => {}
        _ => return Err(Error::Numerical("period angle near the circle is below the target".into())),
    }
    let mut hi = lo;
    loop {
        hi *= 1.25;
        match f(hi) {
            Some(v) if v > 0.0 => lo = hi,
            _ => break,
        }
        if hi > 1e4 * rc {
            return Err(Error::Numerical("no bracket for the period angle".into()));
        }
    }
    while hi - lo > 1e-10 * lo {
        let mid = 0.5 * (lo + hi);
        match f(mid) {
            Some(v) if v > 0.0 => lo = mid,
            _ => hi = mid,
        }
    }
    match f(lo) {
        Some(v) if v.abs() < 1e-7 => Ok(lo),
        Some(v) => Err(Error::Numerical(format!(
            "period angle root not reachable inside the window (mismatch {v:e})"
        ))),
        None => Err(Error::Numerical("root sits on the window edge".into())),
    }
}

/// Trace `q` radial periods from the outer apsis.
fn trace_petals(r_apsis: f64, q: u32, n: usize, fraction: f64) -> Result<(Vec<ShootingState>, ShootingState)> {
    let start = ShootingState::apsis(r_apsis, 0.0);
    let budget = q as f64 * 200.0 * (r_apsis + 1.0 / r_apsis);
    let target = 2 * q as usize;
    let mut crossings = 0;
    let mut prev_sign = 0.0;
    let mut last: Option<(ShootingState, f64)> = None;
    let trace = integrate_with(start, 1.0, n, budget, fraction, |a, b| {
        let g = b.radial_speed();
        if prev_sign == 0.0 {
            prev_sign = g.signum();
            return false;
        }
        if g.signum() != prev_sign && g != 0.0 {
            prev_sign = g.signum();
            crossings += 1;
            if crossings == target {
                last = Some((*a, b.s - a.s));
                return true;
            }
        }
        false
    })?;
    let (from, h) = last.ok_or_else(|| Error::Numerical("orbit did not complete its petals".into()))?;
    let end = locate_event(&from, h, 1.0, n, |s| s.radial_speed())?;
    let mut states = trace.states;
    states.pop();
    Ok((states, end))
}

/// Closed shrinker with winding `p` and `q` curvature maxima.
pub fn find_shrinker(p: u32, q: u32, n: usize) -> Result<ShrinkerSolution> {
    let spec = SolitonSpec::new(n, SolitonKind::Shrinker { p, q })?;
    let target = TAU * p as f64 / q as f64;
    let mut fraction = STEP_FRACTION;
    let mut attempt = 0;
    loop {
        let r = solve_apsis(target, n, fraction)?;
        let (mut states, end) = trace_petals(r, q, n, fraction)?;
        let start = states[0];
        let closure_gap = (end.position - start.position).norm();
        let direction_gap = (end.direction - start.direction).norm();
        if closure_gap <= 1e-6 && direction_gap <= 1e-6 {
            // Drop a trailing node that would nearly duplicate the seam.
            let typical = fraction * r;
            while states.len() > 1 && (states[states.len() - 1].position - start.position).norm() < 0.5 * typical {
                states.pop();
            }
            let curve = PlanarCurve::new(states.iter().map(|s| s.position).collect(), Topology::ClosedLoop)?;
            return Ok(ShrinkerSolution {
                spec,
                r_apsis: r,
                period_angle: end.swept_angle / q as f64,
                closure_gap,
                direction_gap,
                curve,
            });
        }
        attempt += 1;
        if attempt == 3 {
            return Err(Error::Numerical(format!(
                "({p},{q}) closure gap {closure_gap:e} after refinement"
            )));
        }
        fraction *= 0.5;
    }
}

/// Coprime `(p, q)` with `q ≤ q_max` and `p/q ∈ (1/2n, 1/√(2n))`, ordered by `(q, p)`.
pub fn admissible_pairs(n: usize, q_max: u32) -> Vec<(u32, u32)> {
    let lo = 1.0 / (2.0 * n as f64);
    let hi = 1.0 / (2.0 * n as f64).sqrt();
    let mut out = vec![];
    for q in 1..=q_max {
        for p in 1..q {
            let ratio = p as f64 / q as f64;
            if gcd(p, q) == 1 && ratio > lo && ratio < hi {
                out.push((p, q));
            }
        }
    }
    out
}

/// Shrinkers for every admissible pair, computed in parallel and returned in
/// the order of [`admissible_pairs`].
pub fn shrinker_atlas(n: usize, q_max: u32) -> Vec<((u32, u32), Result<ShrinkerSolution>)> {
    admissible_pairs(n, q_max)
        .into_par_iter()
        .map(|(p, q)| ((p, q), find_shrinker(p, q, n)))
        .collect()
}
