//! Discrete immersed curves in the profile plane, identified with ℂ.

mod angle;
mod geometry;
mod measure;
mod resample;

pub(crate) use angle::angle_near_from;
pub use angle::{angle_derivative_check, lagrangian_angle, lagrangian_angle_near, AngleProfile};
pub(crate) use geometry::{chord_derivatives, diagnostics_from};
pub use geometry::{curvature_and_radial, frame, CurveDiagnostics};
pub use measure::{
    curvature_maxima_count, hausdorff_distance, point_polyline_distance, polyline_separation,
    wedge_hull, winding_number, MaximaCount, Region, Wedge,
};
pub use resample::{redistribute, redistribute_with, MeshDensity};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MIN_NODES: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Topology {
    ClosedLoop,
    OpenArc,
}

/// Ordered nodes of a polygonal curve in ℂ \ {0}.
///
/// Orientation is the node order. Closed loops store each point once; the
/// segment from the last node back to the first is implicit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawCurve", into = "RawCurve")]
pub struct PlanarCurve {
    nodes: Vec<Complex64>,
    topology: Topology,
}

#[derive(Serialize, Deserialize)]
struct RawCurve {
    topology: Topology,
    nodes: Vec<[f64; 2]>,
}

impl TryFrom<RawCurve> for PlanarCurve {
    type Error = Error;
    fn try_from(raw: RawCurve) -> Result<Self> {
        let nodes = raw.nodes.iter().map(|p| Complex64::new(p[0], p[1])).collect();
        PlanarCurve::new(nodes, raw.topology)
    }
}

impl From<PlanarCurve> for RawCurve {
    fn from(c: PlanarCurve) -> Self {
        RawCurve {
            topology: c.topology,
            nodes: c.nodes.iter().map(|z| [z.re, z.im]).collect(),
        }
    }
}

impl PlanarCurve {
    pub fn new(nodes: Vec<Complex64>, topology: Topology) -> Result<Self> {
        if nodes.len() < MIN_NODES {
            return Err(Error::Mesh(format!(
                "{} nodes, at least {MIN_NODES} required",
                nodes.len()
            )));
        }
        if let Some(i) = nodes.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Mesh(format!("node {i} is not finite")));
        }
        if let Some(i) = nodes.iter().position(|z| z.norm() == 0.0) {
            return Err(Error::Domain(format!("node {i} sits at the origin")));
        }
        let curve = PlanarCurve { nodes, topology };
        for i in 0..curve.segment_count() {
            let (a, b) = curve.segment(i);
            if a == b {
                let what = if i + 1 == curve.len() { "duplicated seam point" } else { "repeated node" };
                return Err(Error::Mesh(format!("{what} at segment {i}")));
            }
        }
        Ok(curve)
    }

    pub fn closed(nodes: Vec<Complex64>) -> Result<Self> {
        Self::new(nodes, Topology::ClosedLoop)
    }

    pub fn open(nodes: Vec<Complex64>) -> Result<Self> {
        Self::new(nodes, Topology::OpenArc)
    }

    /// Regular polygon inscribed in a circle, counterclockwise from `phase`.
    pub fn circle(center: Complex64, radius: f64, count: usize, phase: f64) -> Result<Self> {
        let nodes = (0..count)
            .map(|i| {
                let s = phase + std::f64::consts::TAU * i as f64 / count as f64;
                center + Complex64::from_polar(radius, s)
            })
            .collect();
        Self::closed(nodes)
    }

    pub fn nodes(&self) -> &[Complex64] {
        &self.nodes
    }

    pub fn into_nodes(self) -> Vec<Complex64> {
        self.nodes
    }

    pub fn topology(&self) -> Topology {
        self.topology
    }

    pub fn is_closed(&self) -> bool {
        self.topology == Topology::ClosedLoop
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn segment_count(&self) -> usize {
        if self.is_closed() {
            self.nodes.len()
        } else {
            self.nodes.len() - 1
        }
    }

    /// Endpoints of segment `i` (wrapping for closed loops).
    pub fn segment(&self, i: usize) -> (Complex64, Complex64) {
        (self.nodes[i], self.nodes[(i + 1) % self.nodes.len()])
    }

    pub fn segment_lengths(&self) -> Vec<f64> {
        (0..self.segment_count())
            .map(|i| {
                let (a, b) = self.segment(i);
                (b - a).norm()
            })
            .collect()
    }

    pub fn length(&self) -> f64 {
        self.segment_lengths().iter().sum()
    }

    pub fn min_spacing(&self) -> f64 {
        self.segment_lengths().into_iter().fold(f64::INFINITY, f64::min)
    }

    pub fn max_spacing(&self) -> f64 {
        self.segment_lengths().into_iter().fold(0.0, f64::max)
    }

    pub fn min_radius(&self) -> (usize, f64) {
        self.nodes
            .iter()
            .enumerate()
            .map(|(i, z)| (i, z.norm()))
            .fold((0, f64::INFINITY), |a, b| if b.1 < a.1 { b } else { a })
    }

    /// Apply a map to every node and revalidate.
    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Result<Self> {
        Self::new(self.nodes.iter().map(|&z| f(z)).collect(), self.topology)
    }

    pub fn rotated(&self, phi: f64) -> Result<Self> {
        let u = Complex64::from_polar(1.0, phi);
        self.map(|z| u * z)
    }

    pub fn scaled(&self, lambda: f64) -> Result<Self> {
        self.map(|z| z * lambda)
    }

    pub fn reversed(&self) -> Self {
        let mut nodes = self.nodes.clone();
        nodes.reverse();
        PlanarCurve { nodes, topology: self.topology }
    }

    /// Closed loop with node `k` moved to the front.
    pub fn with_seam_at(&self, k: usize) -> Self {
        let mut nodes = self.nodes.clone();
        nodes.rotate_left(k % self.nodes.len());
        PlanarCurve { nodes, topology: self.topology }
    }
}

/// Sample `count` points of a parametric curve on `[t0, t1]`, equally spaced in
/// the weighted length `∫ |dz| / h(z)`.
///
/// Arclength is accumulated on a dense chord table and inverted linearly in the
/// parameter; every returned node lies exactly on the curve.
pub fn sample_parametric(
    f: impl Fn(f64) -> Complex64,
    t0: f64,
    t1: f64,
    count: usize,
    local_spacing: impl Fn(Complex64) -> f64,
) -> Vec<Complex64> {
    assert!(count >= 2);
    let dense = (count * 64).max(4096);
    let ts: Vec<f64> = (0..=dense).map(|j| t0 + (t1 - t0) * j as f64 / dense as f64).collect();
    let zs: Vec<Complex64> = ts.iter().map(|&t| f(t)).collect();
    let mut w = vec![0.0; dense + 1];
    for j in 0..dense {
        let mid = f(0.5 * (ts[j] + ts[j + 1]));
        let len = (zs[j + 1] - zs[j]).norm();
        w[j + 1] = w[j] + len / local_spacing(mid);
    }
    let total = w[dense];
    let mut out = Vec::with_capacity(count);
    let mut j = 0;
    for i in 0..count {
        let target = total * i as f64 / (count - 1) as f64;
        if i == 0 {
            out.push(zs[0]);
            continue;
        }
        if i == count - 1 {
            out.push(zs[dense]);
            continue;
        }
        while j + 1 < dense && w[j + 1] < target {
            j += 1;
        }
        let frac = (target - w[j]) / (w[j + 1] - w[j]);
        out.push(f(ts[j] + frac * (ts[j + 1] - ts[j])));
    }
    out
}

/// Wrap an angle to `(-π, π]`.
pub fn wrap_pi(a: f64) -> f64 {
    use std::f64::consts::{PI, TAU};
    let mut x = a.rem_euclid(TAU);
    if x > PI {
        x -= TAU;
    }
    x
}

/// Distance between two angles taken modulo `period`.
pub fn angle_distance_mod(a: f64, b: f64, period: f64) -> f64 {
    let d = (a - b).rem_euclid(period);
    d.min(period - d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_short_or_degenerate_meshes() {
        let few: Vec<_> = (1..5).map(|i| Complex64::new(i as f64, 0.0)).collect();
        assert!(matches!(PlanarCurve::open(few), Err(Error::Mesh(_))));

        let mut nodes: Vec<_> = (1..10).map(|i| Complex64::new(i as f64, 0.0)).collect();
        nodes[4] = nodes[3];
        assert!(matches!(PlanarCurve::open(nodes), Err(Error::Mesh(_))));

        let mut ring = PlanarCurve::circle(Complex64::new(0.0, 0.0), 1.0, 12, 0.0)
            .unwrap()
            .into_nodes();
        ring.push(ring[0]);
        assert!(matches!(PlanarCurve::closed(ring), Err(Error::Mesh(_))));
    }

    #[test]
    fn rejects_origin() {
        let nodes: Vec<_> = (0..9).map(|i| Complex64::new(i as f64, 0.0)).collect();
        assert!(matches!(PlanarCurve::open(nodes), Err(Error::Domain(_))));
    }

    #[test]
    fn parametric_sampling_is_uniform_in_arclength() {
        let f = |t: f64| Complex64::new(t, t * t);
        let pts = sample_parametric(f, 0.5, 2.0, 50, |_| 1.0);
        let d: Vec<f64> = pts.windows(2).map(|w| (w[1] - w[0]).norm()).collect();
        let mean = d.iter().sum::<f64>() / d.len() as f64;
        // Chords fall short of arcs by at most κ²h²/24 relative, κ ≤ 2 here.
        let bound = 4.0 * mean * mean / 24.0;
        for x in d {
            assert!((x - mean).abs() < bound * mean);
        }
    }

    #[test]
    fn serde_round_trip() {
        let c = PlanarCurve::circle(Complex64::new(0.1, 0.0), 1.0, 10, 0.3).unwrap();
        let s = serde_json::to_string(&c).unwrap();
        let back: PlanarCurve = serde_json::from_str(&s).unwrap();
        assert_eq!(c, back);
    }
}
