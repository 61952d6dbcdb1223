use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::geometry::{chord_derivatives, curvature_and_radial};
use super::{wrap_pi, PlanarCurve};
use crate::error::{Error, Result};

/// Continuous lift of the Lagrangian angle `arg γ' + (n-1) arg γ` along a curve.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AngleProfile {
    pub theta: Vec<f64>,
    /// Multiple of π added to the raw lift so node 0 lands on the chosen branch.
    pub branch_offset: i64,
}

impl AngleProfile {
    /// Values reduced to `[0, π)`.
    pub fn reduced(&self) -> Vec<f64> {
        self.theta.iter().map(|t| t.rem_euclid(PI)).collect()
    }

    pub fn range(&self) -> (f64, f64) {
        self.theta
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &t| (lo.min(t), hi.max(t)))
    }
}

fn raw_angles(curve: &PlanarCurve, n: usize) -> Result<Vec<f64>> {
    raw_angles_from(curve, &chord_derivatives(curve)?, n)
}

fn raw_angles_from(curve: &PlanarCurve, derivs: &[(Complex64, Complex64)], n: usize) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::Domain("dimension n must be at least 1".into()));
    }
    Ok(curve
        .nodes()
        .iter()
        .zip(derivs)
        .map(|(z, (d1, _))| d1.arg() + (n as f64 - 1.0) * z.arg())
        .collect())
}

/// Nearest-branch continuation modulo 2π starting from `start`.
fn lift(raw: &[f64], start: f64) -> Result<Vec<f64>> {
    let mut theta = Vec::with_capacity(raw.len());
    theta.push(start);
    for i in 1..raw.len() {
        let jump = wrap_pi(raw[i] - raw[i - 1]);
        if jump.abs() >= FRAC_PI_2 {
            return Err(Error::LiftFailure { node: i, jump });
        }
        theta.push(theta[i - 1] + jump);
    }
    Ok(theta)
}

/// Lagrangian angle with the node-0 branch chosen in `[0, π)`.
pub fn lagrangian_angle(curve: &PlanarCurve, n: usize) -> Result<AngleProfile> {
    let raw = raw_angles(curve, n)?;
    let shift = -(raw[0] / PI).floor();
    let theta = lift(&raw, raw[0] + shift * PI)?;
    Ok(AngleProfile { theta, branch_offset: shift as i64 })
}

/// Lagrangian angle with the node-0 branch closest to `anchor`.
///
/// Used to keep a lift continuous in time when a curve evolves.
pub fn lagrangian_angle_near(curve: &PlanarCurve, n: usize, anchor: f64) -> Result<AngleProfile> {
    angle_near_from(curve, &chord_derivatives(curve)?, n, anchor)
}

pub(crate) fn angle_near_from(
    curve: &PlanarCurve,
    derivs: &[(Complex64, Complex64)],
    n: usize,
    anchor: f64,
) -> Result<AngleProfile> {
    let raw = raw_angles_from(curve, derivs, n)?;
    let shift = ((anchor - raw[0]) / PI).round();
    let theta = lift(&raw, raw[0] + shift * PI)?;
    Ok(AngleProfile { theta, branch_offset: shift as i64 })
}

/// Largest mismatch between the finite-difference derivative of θ and
/// `κ + (n-1) dα/ds`, where α = arg γ.
///
/// Open arcs skip their end nodes.
pub fn angle_derivative_check(curve: &PlanarCurve, n: usize) -> Result<f64> {
    let raw = raw_angles(curve, n)?;
    let diag = curvature_and_radial(curve)?;
    let h = curve.segment_lengths();
    let z = curve.nodes();
    let len = z.len();
    let range = if curve.is_closed() { 0..len } else { 1..len - 1 };
    let mut worst: f64 = 0.0;
    for i in range {
        let im = (i + len - 1) % len;
        let ip = (i + 1) % len;
        let (hm, hp) = (h[im], h[i]);
        let back = wrap_pi(raw[i] - raw[im]);
        let fwd = wrap_pi(raw[ip] - raw[i]);
        let dtheta = (hm * hm * fwd + hp * hp * back) / (hm * hp * (hm + hp));
        let r2 = diag.r[i] * diag.r[i];
        let dalpha = -diag.radial[i] / r2;
        let rhs = diag.kappa[i] + (n as f64 - 1.0) * dalpha;
        worst = worst.max((dtheta - rhs).abs());
    }
    Ok(worst)
}
