use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::curve::{PlanarCurve, Topology};
use crate::error::{Error, Result};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Arclength step as a fraction of the current radius.
pub const STEP_FRACTION: f64 = 1e-3;

/// Radius below which the profile ODE is treated as singular.
pub const R_FLOOR: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShootingState {
    pub position: Complex64,
    /// Unit tangent.
    pub direction: Complex64,
    pub s: f64,
    /// Accumulated change of arg γ.
    pub swept_angle: f64,
}

impl ShootingState {
    /// State at `r e^{iφ}` moving counterclockwise, perpendicular to the position.
    pub fn apsis(r: f64, phi: f64) -> Self {
        let u = Complex64::from_polar(1.0, phi);
        ShootingState { position: u * r, direction: I * u, s: 0.0, swept_angle: 0.0 }
    }

    /// `⟨γ, T⟩`, zero exactly at apsides.
    pub fn radial_speed(&self) -> f64 {
        (self.position.conj() * self.direction).re
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RhsValue {
    pub velocity: Complex64,
    /// Rate of rotation of the tangent, the signed curvature.
    pub curvature: f64,
    pub swept_rate: f64,
}

/// Right-hand side of `k⃗ + (λ − (n−1)/r²) γ⊥ = 0` in arclength.
pub fn soliton_rhs(state: &ShootingState, lambda: f64, n: usize) -> Result<RhsValue> {
    rhs(state.position, state.direction, lambda, n)
}

fn rhs(p: Complex64, d: Complex64, lambda: f64, n: usize) -> Result<RhsValue> {
    let r2 = p.norm_sqr();
    let r = r2.sqrt();
    if r < R_FLOOR || !r.is_finite() {
        return Err(Error::SingularRadius { r, floor: R_FLOOR });
    }
    let normal = I * d;
    let radial = p.re * normal.re + p.im * normal.im;
    Ok(RhsValue {
        velocity: d,
        curvature: -(lambda - (n as f64 - 1.0) / r2) * radial,
        swept_rate: (p.conj() * d).im / r2,
    })
}

/// One classical Runge–Kutta step of length `h`, integrating the heading angle.
pub(crate) fn rk4_step(state: &ShootingState, lambda: f64, n: usize, h: f64) -> Result<ShootingState> {
    let p = state.position;
    let d = state.direction;
    let turn = |a: f64| Complex64::from_polar(1.0, a);
    let k1 = rhs(p, d, lambda, n)?;
    let k2 = rhs(p + k1.velocity * (0.5 * h), d * turn(0.5 * h * k1.curvature), lambda, n)?;
    let k3 = rhs(p + k2.velocity * (0.5 * h), d * turn(0.5 * h * k2.curvature), lambda, n)?;
    let k4 = rhs(p + k3.velocity * h, d * turn(h * k3.curvature), lambda, n)?;
    let w = h / 6.0;
    Ok(ShootingState {
        position: p + (k1.velocity + (k2.velocity + k3.velocity) * 2.0 + k4.velocity) * w,
        direction: d * turn(w * (k1.curvature + 2.0 * (k2.curvature + k3.curvature) + k4.curvature)),
        s: state.s + h,
        swept_angle: state.swept_angle
            + w * (k1.swept_rate + 2.0 * (k2.swept_rate + k3.swept_rate) + k4.swept_rate),
    })
}

/// States visited by the integrator.
#[derive(Clone, Debug, PartialEq)]
pub struct ShootingTrace {
    pub states: Vec<ShootingState>,
}

impl ShootingTrace {
    pub fn last(&self) -> &ShootingState {
        self.states.last().expect("trace is never empty")
    }

    pub fn curve(&self, topology: Topology) -> Result<PlanarCurve> {
        PlanarCurve::new(self.states.iter().map(|s| s.position).collect(), topology)
    }
}

/// Integrate from `start` until arclength `max_length`, with steps of
/// `STEP_FRACTION·r`.
pub fn integrate_soliton(start: ShootingState, lambda: f64, n: usize, max_length: f64) -> Result<ShootingTrace> {
    integrate_with(start, lambda, n, max_length, STEP_FRACTION, |_, _| false)
}

/// Step length: `fraction·r`, further limited so that `h` times the
/// relaxation rate `|λ|r + (n−1)/r` of the tangent toward the radial direction
/// stays inside the stability region of RK4. The second bound only binds far
/// from the origin on expanders.
pub(crate) fn step_size(state: &ShootingState, lambda: f64, n: usize, fraction: f64) -> f64 {
    let r = state.position.norm();
    let rate = lambda.abs() * r + (n as f64 - 1.0) / r;
    (fraction * r).min(0.5 / rate)
}

/// Integrate until `max_length` or until `stop(prev, next)` returns true.
pub(crate) fn integrate_with(
    start: ShootingState,
    lambda: f64,
    n: usize,
    max_length: f64,
    fraction: f64,
    mut stop: impl FnMut(&ShootingState, &ShootingState) -> bool,
) -> Result<ShootingTrace> {
    let mut states = vec![start];
    let end = start.s + max_length;
    loop {
        let cur = *states.last().unwrap();
        if cur.s >= end {
            break;
        }
        let h = step_size(&cur, lambda, n, fraction).min(end - cur.s);
        let next = rk4_step(&cur, lambda, n, h)?;
        let done = stop(&cur, &next);
        states.push(next);
        if done {
            break;
        }
    }
    Ok(ShootingTrace { states })
}

/// Bisect inside one step for the zero of `g` between `from` and a step of `h`.
pub(crate) fn locate_event(
    from: &ShootingState,
    h: f64,
    lambda: f64,
    n: usize,
    g: impl Fn(&ShootingState) -> f64,
) -> Result<ShootingState> {
    let g0 = g(from);
    let (mut lo, mut hi) = (0.0, h);
    let mut best = *from;
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        let st = rk4_step(from, lambda, n, mid)?;
        let gm = g(&st);
        best = st;
        if gm == 0.0 {
            break;
        }
        if (gm > 0.0) == (g0 > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-16 * h.max(1.0) {
            break;
        }
    }
    Ok(best)
}
