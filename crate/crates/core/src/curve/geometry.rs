use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::PlanarCurve;
use crate::error::{Error, Result};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Per-node curvature data of a profile curve.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveDiagnostics {
    /// Signed curvature, positive when turning counterclockwise.
    pub kappa: Vec<f64>,
    /// ⟨γ, N⟩ with N = iT.
    pub radial: Vec<f64>,
    pub r: Vec<f64>,
    pub arclength: Vec<f64>,
}

impl CurveDiagnostics {
    pub fn max_abs_kappa(&self) -> (usize, f64) {
        self.kappa
            .iter()
            .enumerate()
            .map(|(i, k)| (i, k.abs()))
            .fold((0, 0.0), |a, b| if b.1 > a.1 { b } else { a })
    }

    pub fn min_r(&self) -> (usize, f64) {
        self.r
            .iter()
            .enumerate()
            .map(|(i, &r)| (i, r))
            .fold((0, f64::INFINITY), |a, b| if b.1 < a.1 { b } else { a })
    }
}

/// First and second derivative at `x` of the quadratic through `(t_k, z_k)`.
pub(crate) fn quadratic_derivs(t: [f64; 3], z: [Complex64; 3], x: f64) -> (Complex64, Complex64) {
    let d0 = (t[0] - t[1]) * (t[0] - t[2]);
    let d1 = (t[1] - t[0]) * (t[1] - t[2]);
    let d2 = (t[2] - t[0]) * (t[2] - t[1]);
    let first = z[0] * ((x - t[1]) + (x - t[2])) / d0
        + z[1] * ((x - t[0]) + (x - t[2])) / d1
        + z[2] * ((x - t[0]) + (x - t[1])) / d2;
    let second = z[0] * (2.0 / d0) + z[1] * (2.0 / d1) + z[2] * (2.0 / d2);
    (first, second)
}

/// Derivatives with respect to chord length at every node.
///
/// Interior nodes (all nodes of a closed loop) use the centred three-point
/// stencil; the ends of an open arc use one-sided stencils.
pub(crate) fn chord_derivatives(curve: &PlanarCurve) -> Result<Vec<(Complex64, Complex64)>> {
    let z = curve.nodes();
    let n = z.len();
    let h = curve.segment_lengths();
    let scale = h.iter().sum::<f64>() / h.len() as f64;
    if let Some(i) = h.iter().position(|&x| x <= 1e-12 * scale) {
        return Err(Error::Mesh(format!("segment {i} has degenerate length {:e}", h[i])));
    }
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let d = if curve.is_closed() || (i > 0 && i + 1 < n) {
            let im = (i + n - 1) % n;
            let ip = (i + 1) % n;
            let hm = h[im];
            let hp = h[i];
            quadratic_derivs([-hm, 0.0, hp], [z[im], z[i], z[ip]], 0.0)
        } else if i == 0 {
            quadratic_derivs([0.0, h[0], h[0] + h[1]], [z[0], z[1], z[2]], 0.0)
        } else {
            let a = h[n - 3];
            let b = h[n - 2];
            quadratic_derivs([-(a + b), -b, 0.0], [z[n - 3], z[n - 2], z[n - 1]], 0.0)
        };
        if d.0.norm() < 1e-12 {
            return Err(Error::Mesh(format!("vanishing tangent at node {i}")));
        }
        out.push(d);
    }
    Ok(out)
}

/// Unit tangent and normal `N = iT` at every node.
pub fn frame(curve: &PlanarCurve) -> Result<Vec<(Complex64, Complex64)>> {
    Ok(chord_derivatives(curve)?
        .into_iter()
        .map(|(d1, _)| {
            let t = d1 / d1.norm();
            (t, I * t)
        })
        .collect())
}

pub fn curvature_and_radial(curve: &PlanarCurve) -> Result<CurveDiagnostics> {
    Ok(diagnostics_from(curve, &chord_derivatives(curve)?))
}

pub(crate) fn diagnostics_from(curve: &PlanarCurve, derivs: &[(Complex64, Complex64)]) -> CurveDiagnostics {
    let z = curve.nodes();
    let mut kappa = Vec::with_capacity(z.len());
    let mut radial = Vec::with_capacity(z.len());
    for (&p, &(d1, d2)) in z.iter().zip(derivs) {
        let speed = d1.norm();
        kappa.push((d1.conj() * d2).im / (speed * speed * speed));
        let normal = I * d1 / speed;
        radial.push(p.re * normal.re + p.im * normal.im);
    }
    let mut arclength = Vec::with_capacity(z.len());
    let mut s = 0.0;
    arclength.push(0.0);
    for w in z.windows(2) {
        s += (w[1] - w[0]).norm();
        arclength.push(s);
    }
    CurveDiagnostics {
        kappa,
        radial,
        r: z.iter().map(|p| p.norm()).collect(),
        arclength,
    }
}
