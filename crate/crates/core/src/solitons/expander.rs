use serde::{Deserialize, Serialize};

use super::shooting::{integrate_with, locate_event, ShootingState, STEP_FRACTION};
use super::{SolitonKind, SolitonSpec};
use crate::curve::{PlanarCurve, Topology};
use crate::error::{Error, Result};

/// Ratio of the asymptote measurement radius to the apsis distance.
pub const MEASURE_RATIO: f64 = 1e3;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpanderSolution {
    pub spec: SolitonSpec,
    pub apsis_distance: f64,
    /// Span re-measured on the returned solution.
    pub measured_span: f64,
    /// Both branches, from one far end through the apsis to the other.
    pub curve: PlanarCurve,
}

enum Exit {
    Far(ShootingState, f64),
    Straight,
}

/// Half-branch of the λ = −1 profile from the apsis at distance `d` on the
/// positive real axis out to radius `MEASURE_RATIO·d`.
///
/// The tangent relaxes onto the radial direction at a Gaussian rate. Once the
/// angle between them is below round-off the rest of the branch is a ray, and
/// it is continued in closed form up to the measurement radius.
fn half_branch(d: f64, n: usize) -> Result<Vec<ShootingState>> {
    let r_far = MEASURE_RATIO * d;
    let start = ShootingState::apsis(d, 0.0);
    let mut exit: Option<Exit> = None;
    let trace = integrate_with(start, -1.0, n, 10.0 * r_far, STEP_FRACTION, |a, b| {
        if b.position.norm() >= r_far {
            exit = Some(Exit::Far(*a, b.s - a.s));
            return true;
        }
        let r = b.position.norm();
        if r > 4.0 * d && (b.position.conj() * b.direction).im.abs() < 1e-15 * r {
            exit = Some(Exit::Straight);
            return true;
        }
        false
    })?;
    let mut states = trace.states;
    match exit {
        Some(Exit::Far(from, h)) => {
            let end = locate_event(&from, h, -1.0, n, |s| s.position.norm() - r_far)?;
            states.pop();
            states.push(end);
        }
        Some(Exit::Straight) => {
            let last = *states.last().unwrap();
            let p = last.position;
            let t = last.direction;
            // Solve |p + σt| = r_far for σ > 0.
            let b = (p.conj() * t).re;
            let sigma = -b + (b * b - p.norm_sqr() + r_far * r_far).sqrt();
            let steps = 16;
            for j in 1..=steps {
                let ds = sigma * j as f64 / steps as f64;
                states.push(ShootingState {
                    position: p + t * ds,
                    direction: t,
                    s: last.s + ds,
                    swept_angle: last.swept_angle,
                });
            }
        }
        None => {
            return Err(Error::Numerical(format!("expander from d = {d} never reached r = {r_far}")));
        }
    }
    Ok(states)
}

/// Angle between the asymptotic directions of the expander through the apsis
/// at distance `d`, read off the tangent at `r = MEASURE_RATIO·d`.
///
/// The curve is symmetric about the apsis line, so the span is twice the
/// tangent's angle to that line.
pub fn asymptote_span(d: f64, n: usize) -> Result<f64> {
    if !(d > 0.0) {
        return Err(Error::Domain(format!("apsis distance {d} must be positive")));
    }
    let states = half_branch(d, n)?;
    Ok(2.0 * states.last().unwrap().direction.arg())
}

/// Expander whose asymptotes span `alpha`, by bisection on the apsis distance.
///
/// The span decreases from π/n (d → 0) toward 0 (d → ∞); the bracket is grown
/// geometrically before bisecting.
pub fn find_expander(alpha: f64, n: usize) -> Result<ExpanderSolution> {
    let spec = SolitonSpec::new(n, SolitonKind::Expander { alpha })?;
    let f = |d: f64| asymptote_span(d, n).map(|s| s - alpha);
    let mut lo = 1e-2;
    while f(lo)? <= 0.0 {
        lo *= 0.5;
        if lo < 1e-8 {
            return Err(Error::Numerical(format!("span {alpha} too close to π/{n}")));
        }
    }
    let mut hi = 2.0 * lo;
    while f(hi)? > 0.0 {
        lo = hi;
        hi *= 2.0;
        if hi > 1e3 {
            return Err(Error::Numerical(format!("no bracket for span {alpha}")));
        }
    }
    let mut d = 0.5 * (lo + hi);
    for _ in 0..200 {
        d = 0.5 * (lo + hi);
        let v = f(d)?;
        if v.abs() < 1e-12 || hi - lo < 1e-15 * hi {
            break;
        }
        if v > 0.0 {
            lo = d;
        } else {
            hi = d;
        }
    }
    let half = half_branch(d, n)?;
    let measured_span = 2.0 * half.last().unwrap().direction.arg();
    let mut nodes: Vec<_> = half.iter().rev().map(|s| s.position.conj()).collect();
    nodes.extend(half.iter().skip(1).map(|s| s.position));
    Ok(ExpanderSolution {
        spec,
        apsis_distance: d,
        measured_span,
        curve: PlanarCurve::new(nodes, Topology::OpenArc)?,
    })
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;

    use crate::curve::wedge_hull;
    use crate::solitons::soliton_residual;

    #[test]
    fn span_is_monotone_and_tends_to_cone_angle() {
        for n in 1..4 {
            let ds = [0.01, 0.1, 0.3, 0.6, 1.0, 2.0, 4.0];
            let spans: Vec<f64> = ds.iter().map(|&d| asymptote_span(d, n).unwrap()).collect();
            assert!(spans.windows(2).all(|w| w[1] < w[0]), "{spans:?}");
            assert!((spans[0] - PI / n as f64).abs() < 3e-2);
        }
    }

    #[test]
    fn quarter_turn_expander_re_measures() {
        let sol = find_expander(PI / 4.0, 2).unwrap();
        assert!((sol.measured_span - PI / 4.0).abs() < 1e-6);
        assert!((asymptote_span(sol.apsis_distance, 2).unwrap() - PI / 4.0).abs() < 1e-6);
        // Finite truncation: the hull is the asymptote span up to the far tangent error.
        let hull = wedge_hull(&sol.curve);
        assert!(hull.span < PI / 2.0 + PI / 4.0);
        assert!(hull.bisector.abs() < 1e-9);
        let near = sol.curve.nodes().iter().filter(|z| z.norm() < 3.0).count();
        assert!(near > 100);
    }

    #[test]
    fn expander_satisfies_soliton_equation() {
        let sol = find_expander(0.4 * PI / 2.0, 2).unwrap();
        let nodes: Vec<_> = sol.curve.nodes().iter().cloned().filter(|z| z.norm() < 5.0 * sol.apsis_distance).collect();
        let core = PlanarCurve::open(nodes).unwrap();
        assert!(soliton_residual(&core, -1.0, 2).unwrap() < 1e-4);
    }

    #[test]
    fn out_of_range_alpha() {
        assert!(matches!(find_expander(PI / 2.0, 2), Err(Error::Domain(_))));
    }
}
