use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{SolitonKind, SolitonSpec};
use crate::curve::{sample_parametric, PlanarCurve, MIN_NODES};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SamplerConfig {
    /// Noncompact curves are cut where |z| exceeds this radius.
    pub r_max: f64,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig { r_max: 100.0 }
    }
}

fn dense_length(f: &impl Fn(f64) -> Complex64, t0: f64, t1: f64) -> f64 {
    let m = 20_000;
    let mut prev = f(t0);
    let mut total = 0.0;
    for j in 1..=m {
        let z = f(t0 + (t1 - t0) * j as f64 / m as f64);
        total += (z - prev).norm();
        prev = z;
    }
    total
}

fn node_count(length: f64, spacing: f64) -> Result<usize> {
    if !(spacing > 0.0) {
        return Err(Error::Domain(format!("spacing {spacing} must be positive")));
    }
    Ok(((length / spacing).ceil() as usize + 1).max(MIN_NODES))
}

/// Ray `c̃_{k,θ̄}(r) = r e^{i(θ̄ + kπ)/n}` on `[r_min, r_max]`.
pub fn sample_cone(spec: &SolitonSpec, r_range: (f64, f64), spacing: f64) -> Result<PlanarCurve> {
    let SolitonKind::Cone { k, theta_bar } = spec.kind else {
        return Err(Error::Domain("sample_cone needs a cone spec".into()));
    };
    spec.validate()?;
    let (r0, r1) = r_range;
    if !(r0 > 0.0 && r1 > r0) {
        return Err(Error::Domain(format!("invalid radius range [{r0}, {r1}]")));
    }
    let dir = Complex64::from_polar(1.0, (theta_bar + k as f64 * PI) / spec.n as f64);
    let count = node_count(r1 - r0, spacing)?;
    let nodes = (0..count)
        .map(|j| dir * (r0 + (r1 - r0) * j as f64 / (count - 1) as f64))
        .collect();
    PlanarCurve::open(nodes)
}

/// Closed form `l̃_{B,k,θ̄}(α) = B cos(nα)^{−1/n} e^{i(α + θ̄/n − π/2n + kπ/n)}`.
pub fn special_lagrangian_point(b: f64, k: i64, theta_bar: f64, n: usize, alpha: f64) -> Complex64 {
    let nf = n as f64;
    let r = b * (nf * alpha).cos().powf(-1.0 / nf);
    Complex64::from_polar(r, alpha + theta_bar / nf - PI / (2.0 * nf) + k as f64 * PI / nf)
}

/// Arclength-uniform samples of `l̃` for α in `alpha_range`, cut at `r_max`.
pub fn sample_special_lagrangian(
    spec: &SolitonSpec,
    alpha_range: (f64, f64),
    spacing: f64,
    config: &SamplerConfig,
) -> Result<PlanarCurve> {
    let SolitonKind::SpecialLagrangian { b, k, theta_bar } = spec.kind else {
        return Err(Error::Domain("sample_special_lagrangian needs a special-lagrangian spec".into()));
    };
    spec.validate()?;
    let n = spec.n;
    let edge = PI / (2.0 * n as f64);
    let (a0, a1) = alpha_range;
    if a0 <= -edge || a1 >= edge {
        return Err(Error::SingularEndpoint(format!(
            "alpha range [{a0}, {a1}] reaches ±π/{}",
            2 * n
        )));
    }
    if a1 <= a0 {
        return Err(Error::Domain(format!("empty alpha range [{a0}, {a1}]")));
    }
    // r(α) ≤ r_max ⟺ |α| ≤ acos((B/r_max)^n)/n.
    let cut = if b >= config.r_max {
        0.0
    } else {
        (b / config.r_max).powi(n as i32).acos() / n as f64
    };
    let (a0, a1) = (a0.max(-cut), a1.min(cut));
    if a1 <= a0 {
        return Err(Error::Domain("alpha range lies entirely beyond r_max".into()));
    }
    let f = |a: f64| special_lagrangian_point(b, k, theta_bar, n, a);
    let count = node_count(dense_length(&f, a0, a1), spacing)?;
    PlanarCurve::open(sample_parametric(f, a0, a1, count, |_| 1.0))
}

/// The two asymptotic cones `c̃_{k−1,θ̄}` and `c̃_{k,θ̄}` of `l̃_{B,k,θ̄}`.
pub fn asymptotes_of(spec: &SolitonSpec) -> Result<(SolitonSpec, SolitonSpec)> {
    let SolitonKind::SpecialLagrangian { k, theta_bar, .. } = spec.kind else {
        return Err(Error::Domain("asymptotes_of needs a special-lagrangian spec".into()));
    };
    spec.validate()?;
    Ok((
        SolitonSpec { n: spec.n, kind: SolitonKind::Cone { k: k - 1, theta_bar } },
        SolitonSpec { n: spec.n, kind: SolitonKind::Cone { k, theta_bar } },
    ))
}

pub fn grim_reaper_point(x: f64) -> Complex64 {
    Complex64::new(x, x.cos().ln())
}

/// Graph of `log cos x` on `x_range`, arclength-uniform.
///
/// The curve passes through the origin; the node count is adjusted so that no
/// node lands exactly on it.
pub fn grim_reaper(x_range: (f64, f64), spacing: f64) -> Result<PlanarCurve> {
    let (x0, x1) = x_range;
    if x0 <= -FRAC_PI_2 || x1 >= FRAC_PI_2 {
        return Err(Error::SingularEndpoint(format!("range [{x0}, {x1}] reaches ±π/2")));
    }
    if x1 <= x0 {
        return Err(Error::Domain(format!("empty range [{x0}, {x1}]")));
    }
    let mut count = node_count(dense_length(&grim_reaper_point, x0, x1), spacing)?;
    loop {
        let nodes = sample_parametric(grim_reaper_point, x0, x1, count, |_| 1.0);
        if nodes.iter().all(|z| z.norm() > 1e-9) {
            return PlanarCurve::open(nodes);
        }
        count += 1;
    }
}
