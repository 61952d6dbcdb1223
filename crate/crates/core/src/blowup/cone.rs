use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::split_phase;
use crate::curve::{point_polyline_distance, wrap_pi, PlanarCurve, Region};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConePairFit {
    pub theta_bar: f64,
    /// Branch of the counterclockwise ray `c̃_{k,θ̄}`; the other ray is `c̃_{k−1,θ̄}`.
    pub k: i64,
    /// Hausdorff distance between the curve and the constrained ray pair on the annulus.
    pub residual: f64,
    /// Angles of the two fitted rays with the gap fixed at π/n.
    pub rays: (f64, f64),
    /// Angle between the two arms fitted independently.
    pub measured_gap: f64,
}

impl ConePairFit {
    /// `θ̄ + kπ`, continuous across the `θ̄ = 0` seam modulo `2nπ`.
    pub fn phase(&self) -> f64 {
        self.theta_bar + self.k as f64 * PI
    }
}

/// Weighted circular mean of node arguments, weights `r²`.
fn arm_angle(points: &[Complex64]) -> f64 {
    let s: Complex64 = points.iter().map(|z| z * z.norm()).sum();
    s.arg()
}

fn ray_distance(z: Complex64, angle: f64) -> f64 {
    let u = z * Complex64::from_polar(1.0, -angle);
    if u.re > 0.0 {
        u.im.abs()
    } else {
        z.norm()
    }
}

/// Fit `c̃_{k−1,θ̄} ∪ c̃_{k,θ̄}` to the part of `curve` inside `annulus`.
pub fn fit_cone_pair(curve: &PlanarCurve, annulus: (f64, f64), n: usize) -> Result<ConePairFit> {
    let (r0, r1) = annulus;
    if n == 0 || !(r0 > 0.0 && r1 > r0) {
        return Err(Error::Domain(format!("invalid annulus [{r0}, {r1}] or n = {n}")));
    }
    let region = Region::Annulus { inner: r0, outer: r1 };
    let z = curve.nodes();
    // Maximal runs of consecutive nodes inside the annulus.
    let mut runs: Vec<Vec<Complex64>> = Vec::new();
    let mut current = Vec::new();
    for &p in z {
        if region.contains(p) {
            current.push(p);
        } else if !current.is_empty() {
            runs.push(std::mem::take(&mut current));
        }
    }
    if !current.is_empty() {
        if curve.is_closed() && region.contains(z[0]) && !runs.is_empty() {
            runs[0].extend(current);
        } else {
            runs.push(current);
        }
    }
    // Merge runs pointing the same way.
    let mut clusters: Vec<Vec<Complex64>> = Vec::new();
    for run in runs {
        let a = arm_angle(&run);
        match clusters.iter_mut().find(|c| wrap_pi(arm_angle(c) - a).abs() < 0.25 * PI / n as f64) {
            Some(c) => c.extend(run),
            None => clusters.push(run),
        }
    }
    if clusters.len() < 2 {
        return Err(Error::NoFit(format!("found {} ray cluster(s) in the annulus", clusters.len())));
    }
    clusters.sort_by_key(|c| std::cmp::Reverse(c.len()));
    let (a, b) = (&clusters[0], &clusters[1]);
    let (mut lo, mut hi) = (arm_angle(a), arm_angle(b));
    let (mut w_lo, mut w_hi) = (a.iter().map(|z| z.norm_sqr()).sum::<f64>(), b.iter().map(|z| z.norm_sqr()).sum::<f64>());
    if (hi - lo).rem_euclid(2.0 * PI) > PI {
        std::mem::swap(&mut lo, &mut hi);
        std::mem::swap(&mut w_lo, &mut w_hi);
    }
    let measured_gap = (hi - lo).rem_euclid(2.0 * PI);
    let half = 0.5 * PI / n as f64;
    // Bisector minimizing the weighted squared angular misfit of both arms.
    let bisector = hi - half - w_lo * wrap_pi((hi - half) - (lo + half)) / (w_lo + w_hi);
    let rays = (bisector - half, bisector + half);
    let (theta_bar, k) = split_phase(n as f64 * rays.1, n);

    let mut residual: f64 = 0.0;
    for &p in z.iter().filter(|&&p| region.contains(p)) {
        residual = residual.max(ray_distance(p, rays.0).min(ray_distance(p, rays.1)));
    }
    let samples = 200;
    for ray in [rays.0, rays.1] {
        let dir = Complex64::from_polar(1.0, ray);
        for j in 0..=samples {
            let p = dir * (r0 + (r1 - r0) * j as f64 / samples as f64);
            residual = residual.max(point_polyline_distance(p, curve));
        }
    }
    Ok(ConePairFit { theta_bar, k, residual, rays, measured_gap })
}
