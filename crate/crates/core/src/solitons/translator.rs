use std::f64::consts::{FRAC_PI_2, TAU};

use num_complex::Complex64;

use super::closed_form::grim_reaper;
use crate::curve::{curvature_and_radial, frame, PlanarCurve};
use crate::error::Result;

/// Largest mismatch between the equivariant normal velocity and the normal
/// component of a constant velocity `v`, over interior nodes.
///
/// A translating profile would make this vanish identically.
pub fn translator_residual(curve: &PlanarCurve, n: usize, v: Complex64) -> Result<f64> {
    let d = curvature_and_radial(curve)?;
    let fr = frame(curve)?;
    let len = curve.len();
    let range = if curve.is_closed() { 0..len } else { 1..len - 1 };
    let m = n as f64 - 1.0;
    Ok(range
        .map(|i| {
            let vel = d.kappa[i] - m * d.radial[i] / (d.r[i] * d.r[i]);
            let nrm = fr[i].1;
            let vn = v.re * nrm.re + v.im * nrm.im;
            (vel - vn).abs()
        })
        .fold(0.0, f64::max))
}

/// Smallest translator residual over a coarse sweep of shifted, scaled and
/// rotated grim reapers and of constant velocities.
///
/// For `n = 1` the unshifted grim reaper with velocity `−i` is in the sweep, so
/// the minimum is at discretization level. For `n ≥ 2` the orbital term keeps it
/// bounded away from zero.
pub fn min_translator_residual(n: usize) -> Result<f64> {
    let base = grim_reaper((-1.2, 1.2), 0.01)?;
    let mut best = f64::INFINITY;
    for &scale in &[0.5, 1.0, 2.0] {
        for &shift in &[0.0, 0.5, 2.0, 5.0] {
            for rot in 0..4 {
                let phi = rot as f64 * FRAC_PI_2;
                let u = Complex64::from_polar(1.0, phi);
                let curve = base.map(|z| u * (z * scale + Complex64::new(0.0, shift)))?;
                for &speed in &[0.25, 0.5, 1.0, 2.0] {
                    for dir in 0..16 {
                        let v = Complex64::from_polar(speed, TAU * dir as f64 / 16.0);
                        best = best.min(translator_residual(&curve, n, v)?);
                    }
                }
            }
        }
    }
    Ok(best)
}
