use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::geometry::curvature_and_radial;
use super::{wrap_pi, PlanarCurve};
use crate::error::{Error, Result};

/// Total change of arg γ around a closed loop, in turns.
pub fn winding_number(curve: &PlanarCurve) -> Result<i64> {
    if !curve.is_closed() {
        return Err(Error::Domain("winding number needs a closed loop".into()));
    }
    let total: f64 = (0..curve.segment_count())
        .map(|i| {
            let (a, b) = curve.segment(i);
            (b / a).arg()
        })
        .sum();
    Ok((total / TAU).round() as i64)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MaximaCount {
    /// Curvature is constant to within the circle tolerance.
    Circle,
    Count(usize),
}

/// Number of strict local maxima of the signed curvature around a closed loop.
///
/// The sign is taken relative to the loop's total turning, so reversing the
/// node order gives the same count. Counting |κ| instead would double the
/// count on orbits whose curvature changes sign. Neighbouring values closer
/// than `1e-8·max|κ|` are merged into plateaus, so a peak that falls between
/// two nodes is still counted once.
pub fn curvature_maxima_count(curve: &PlanarCurve) -> Result<MaximaCount> {
    if !curve.is_closed() {
        return Err(Error::Domain("curvature maxima are counted on closed loops".into()));
    }
    let diag = curvature_and_radial(curve)?;
    let lengths = curve.segment_lengths();
    let turning: f64 = diag.kappa.iter().zip(&lengths).map(|(k, h)| k * h).sum();
    let sign = if turning < 0.0 { -1.0 } else { 1.0 };
    let k: Vec<f64> = diag.kappa.iter().map(|x| sign * x).collect();
    let max = k.iter().map(|x| x.abs()).fold(0.0, f64::max);
    let spread = k.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - k.iter().cloned().fold(f64::INFINITY, f64::min);
    if max == 0.0 || spread / max < 1e-6 {
        return Ok(MaximaCount::Circle);
    }
    let tol = 1e-8 * max;
    // Plateau runs: consecutive nodes whose values differ by less than tol.
    let n = k.len();
    let start = (0..n)
        .find(|&i| (k[i] - k[(i + n - 1) % n]).abs() >= tol)
        .expect("non-constant curvature has a break");
    let mut runs: Vec<f64> = vec![];
    let mut acc = vec![k[start]];
    for step in 1..n {
        let i = (start + step) % n;
        let prev = (i + n - 1) % n;
        if (k[i] - k[prev]).abs() < tol {
            acc.push(k[i]);
        } else {
            runs.push(acc.iter().sum::<f64>() / acc.len() as f64);
            acc = vec![k[i]];
        }
    }
    runs.push(acc.iter().sum::<f64>() / acc.len() as f64);
    let m = runs.len();
    let count = (0..m)
        .filter(|&j| runs[j] > runs[(j + m - 1) % m] && runs[j] > runs[(j + 1) % m])
        .count();
    Ok(MaximaCount::Count(count))
}

/// Smallest wedge with apex at the origin containing the curve.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Wedge {
    pub span: f64,
    pub bisector: f64,
}

/// The lift of arg γ along the polyline is continuous, so its range is an
/// interval; a closed loop that winds around the origin covers every direction.
pub fn wedge_hull(curve: &PlanarCurve) -> Wedge {
    let z = curve.nodes();
    let mut a = z[0].arg();
    let (mut lo, mut hi) = (a, a);
    for i in 0..curve.segment_count() {
        let (p, q) = curve.segment(i);
        a += (q / p).arg();
        lo = lo.min(a);
        hi = hi.max(a);
    }
    if hi - lo >= TAU {
        return Wedge { span: TAU, bisector: wrap_pi(z[0].arg() + PI) };
    }
    Wedge { span: hi - lo, bisector: wrap_pi(0.5 * (lo + hi)) }
}

/// Region used to clip curves before measuring distances.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Region {
    Annulus { inner: f64, outer: f64 },
    Disk { center: [f64; 2], radius: f64 },
    Everywhere,
}

impl Region {
    pub fn contains(&self, z: Complex64) -> bool {
        match *self {
            Region::Annulus { inner, outer } => {
                let r = z.norm();
                r >= inner && r <= outer
            }
            Region::Disk { center, radius } => (z - Complex64::new(center[0], center[1])).norm() <= radius,
            Region::Everywhere => true,
        }
    }
}

fn point_segment_distance(p: Complex64, a: Complex64, b: Complex64) -> f64 {
    let d = b - a;
    let len2 = d.norm_sqr();
    let t = if len2 == 0.0 { 0.0 } else { (((p - a) * d.conj()).re / len2).clamp(0.0, 1.0) };
    (p - (a + d * t)).norm()
}

/// Distance from a point to the polyline of a curve.
pub fn point_polyline_distance(p: Complex64, curve: &PlanarCurve) -> f64 {
    (0..curve.segment_count())
        .map(|i| {
            let (a, b) = curve.segment(i);
            point_segment_distance(p, a, b)
        })
        .fold(f64::INFINITY, f64::min)
}

fn directed(a: &PlanarCurve, b: &PlanarCurve, region: &Region) -> Option<f64> {
    let mut worst: Option<f64> = None;
    for &p in a.nodes().iter().filter(|&&p| region.contains(p)) {
        let d = point_polyline_distance(p, b);
        worst = Some(worst.map_or(d, |w: f64| w.max(d)));
    }
    worst
}

/// Symmetric Hausdorff distance restricted to a region.
///
/// Nodes of each curve inside the region are measured against the full
/// polyline of the other curve, so identical geometry sampled differently
/// still reports a distance near zero.
pub fn hausdorff_distance(a: &PlanarCurve, b: &PlanarCurve, region: &Region) -> Result<f64> {
    let ab = directed(a, b, region);
    let ba = directed(b, a, region);
    match (ab, ba) {
        (Some(x), Some(y)) => Ok(x.max(y)),
        _ => Err(Error::Domain("a curve has no nodes inside the region".into())),
    }
}

fn segments_intersect(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> bool {
    let cross = |u: Complex64, v: Complex64| u.re * v.im - u.im * v.re;
    let d1 = cross(b - a, c - a);
    let d2 = cross(b - a, d - a);
    let d3 = cross(d - c, a - c);
    let d4 = cross(d - c, b - c);
    d1 * d2 < 0.0 && d3 * d4 < 0.0
}

/// Smallest distance between two polylines, zero if they cross.
pub fn polyline_separation(a: &PlanarCurve, b: &PlanarCurve) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..a.segment_count() {
        let (p, q) = a.segment(i);
        for j in 0..b.segment_count() {
            let (u, v) = b.segment(j);
            if segments_intersect(p, q, u, v) {
                return 0.0;
            }
            let d = point_segment_distance(p, u, v)
                .min(point_segment_distance(q, u, v))
                .min(point_segment_distance(u, p, q))
                .min(point_segment_distance(v, p, q));
            best = best.min(d);
        }
    }
    best
}
