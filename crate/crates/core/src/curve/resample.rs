use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::geometry::chord_derivatives;
use super::{PlanarCurve, MIN_NODES};
use crate::error::{Error, Result};

/// Target node spacing as a function of position.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum MeshDensity {
    /// Constant spacing.
    Uniform { spacing: f64 },
    /// Spacing `ratio·|z|`, capped at `max_spacing`.
    ///
    /// This is uniform in the scale-invariant length `∫ |dz|/|z|`, so meshes
    /// follow a neck as it shrinks toward the origin.
    RadiusScaled { ratio: f64, max_spacing: f64 },
}

impl MeshDensity {
    pub fn spacing_at(&self, z: Complex64) -> f64 {
        match *self {
            MeshDensity::Uniform { spacing } => spacing,
            MeshDensity::RadiusScaled { ratio, max_spacing } => (ratio * z.norm()).min(max_spacing),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            MeshDensity::Uniform { spacing } => spacing > 0.0,
            MeshDensity::RadiusScaled { ratio, max_spacing } => ratio > 0.0 && max_spacing > 0.0,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Domain(format!("mesh spacing must be positive: {self:?}")))
        }
    }
}

fn hermite(p0: Complex64, p1: Complex64, m0: Complex64, m1: Complex64, h: f64, u: f64) -> Complex64 {
    let s = u / h;
    let s2 = s * s;
    let s3 = s2 * s;
    p0 * (2.0 * s3 - 3.0 * s2 + 1.0)
        + m0 * (h * (s3 - 2.0 * s2 + s))
        + p1 * (-2.0 * s3 + 3.0 * s2)
        + m1 * (h * (s3 - s2))
}

/// Re-place nodes at equal arclength.
pub fn redistribute(curve: &PlanarCurve, spacing: f64) -> Result<PlanarCurve> {
    redistribute_with(curve, &MeshDensity::Uniform { spacing })
}

/// Re-place nodes so each segment has unit length in the metric `|dz|/h(z)`.
///
/// Positions come from cubic Hermite interpolation with tangents taken from the
/// three-point stencils. Open arcs keep both endpoints; closed loops keep node 0.
pub fn redistribute_with(curve: &PlanarCurve, density: &MeshDensity) -> Result<PlanarCurve> {
    density.validate()?;
    let z = curve.nodes();
    let len = z.len();
    let tangents: Vec<Complex64> = chord_derivatives(curve)?.into_iter().map(|d| d.0).collect();
    let segs = curve.segment_count();
    let h = curve.segment_lengths();
    // Weighted length of each segment by Simpson's rule on the cubic.
    let mut w = Vec::with_capacity(segs + 1);
    w.push(0.0);
    for i in 0..segs {
        let j = (i + 1) % len;
        let mid = hermite(z[i], z[j], tangents[i], tangents[j], h[i], 0.5 * h[i]);
        let inv = |p: Complex64| 1.0 / density.spacing_at(p);
        let wi = h[i] * (inv(z[i]) + 4.0 * inv(mid) + inv(z[j])) / 6.0;
        w.push(w[i] + wi);
    }
    let total = w[segs];
    let min_segments = if curve.is_closed() { MIN_NODES } else { MIN_NODES - 1 };
    let m = (total.round() as usize).max(min_segments);
    let count = if curve.is_closed() { m } else { m + 1 };
    let mut nodes = Vec::with_capacity(count);
    let mut seg = 0;
    for k in 0..count {
        if !curve.is_closed() && k == count - 1 {
            nodes.push(z[len - 1]);
            break;
        }
        let target = total * k as f64 / m as f64;
        while seg + 1 < segs && w[seg + 1] <= target {
            seg += 1;
        }
        let frac = ((target - w[seg]) / (w[seg + 1] - w[seg])).clamp(0.0, 1.0);
        let j = (seg + 1) % len;
        nodes.push(hermite(z[seg], z[j], tangents[seg], tangents[j], h[seg], frac * h[seg]));
    }
    PlanarCurve::new(nodes, curve.topology())
}
