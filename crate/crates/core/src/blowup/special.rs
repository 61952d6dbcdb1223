use std::f64::consts::PI;

use argmin::core::{CostFunction, Executor};
use argmin::solver::neldermead::NelderMead;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::split_phase;
use crate::curve::{curvature_and_radial, frame, point_polyline_distance, PlanarCurve};
use crate::error::{Error, Result};

/// Fits with a Hausdorff residual above this are rejected.
pub const RESIDUAL_CAP: f64 = 0.5;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpecialLagrangianFit {
    pub b: f64,
    pub k: i64,
    pub theta_bar: f64,
    /// Centre of the fitted model.
    pub translation: [f64; 2],
    /// Largest distance from a node within the unit ball around the curvature
    /// peak to the fitted model.
    pub residual: f64,
}

impl SpecialLagrangianFit {
    /// `θ̄ + kπ`, continuous across the `θ̄ = 0` seam modulo `2nπ`.
    pub fn phase(&self) -> f64 {
        self.theta_bar + self.k as f64 * PI
    }
}

/// Model `B cos(nα)^{−1/n} e^{iα}` with its tip on the positive real axis.
fn canonical(b: f64, n: f64, a: f64) -> Complex64 {
    Complex64::from_polar(b * (n * a).cos().powf(-1.0 / n), a)
}

/// Distance from `u` to the canonical model.
fn canonical_distance(u: Complex64, b: f64, n: f64) -> f64 {
    let edge = 0.5 * PI / n * (1.0 - 1e-9);
    let grid = 96;
    let at = |j: usize| -edge + 2.0 * edge * j as f64 / grid as f64;
    let dist = |a: f64| (u - canonical(b, n, a)).norm_sqr();
    let j = (0..=grid).min_by(|&i, &j| dist(at(i)).total_cmp(&dist(at(j)))).unwrap();
    let (mut lo, mut hi) = (at(j.saturating_sub(1)), at((j + 1).min(grid)));
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = hi - g * (hi - lo);
    let mut d = lo + g * (hi - lo);
    let (mut fc, mut fd) = (dist(c), dist(d));
    for _ in 0..80 {
        if fc < fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - g * (hi - lo);
            fc = dist(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + g * (hi - lo);
            fd = dist(d);
        }
    }
    dist(0.5 * (lo + hi)).min(dist(at(j))).sqrt()
}

#[derive(Clone, Copy)]
struct Placement {
    b: f64,
    phi: f64,
    center: Complex64,
}

impl Placement {
    fn from_params(p: &[f64]) -> Self {
        Placement { b: p[0].exp(), phi: p[1], center: Complex64::new(p[2], p[3]) }
    }

    fn to_canonical(&self, w: Complex64) -> Complex64 {
        (w - self.center) * Complex64::from_polar(1.0, -self.phi)
    }

    fn to_world(&self, u: Complex64) -> Complex64 {
        self.center + u * Complex64::from_polar(1.0, self.phi)
    }
}

struct Misfit<'a> {
    points: &'a [Complex64],
    n: f64,
}

impl CostFunction for Misfit<'_> {
    type Param = Vec<f64>;
    type Output = f64;

    fn cost(&self, p: &Self::Param) -> std::result::Result<f64, argmin::core::Error> {
        let pl = Placement::from_params(p);
        Ok(self
            .points
            .iter()
            .map(|&w| canonical_distance(pl.to_canonical(w), pl.b, self.n).powi(2))
            .sum())
    }
}

fn minimize(points: &[Complex64], n: f64, start: Vec<f64>) -> Result<Vec<f64>> {
    let steps = [0.05, 0.05, 0.05, 0.05];
    let mut simplex = vec![start.clone()];
    for (i, h) in steps.iter().enumerate() {
        let mut v = start.clone();
        v[i] += h;
        simplex.push(v);
    }
    let solver = NelderMead::new(simplex)
        .with_sd_tolerance(1e-24)
        .map_err(|e| Error::Numerical(e.to_string()))?;
    let res = Executor::new(Misfit { points, n }, solver)
        .configure(|s| s.max_iters(4000))
        .run()
        .map_err(|e| Error::Numerical(e.to_string()))?;
    res.state
        .best_param
        .ok_or_else(|| Error::Numerical("optimizer returned no parameters".into()))
}

/// Largest node-to-model distance on the unit ball around `peak`, and the
/// largest distance from the model's part of the ball to the polyline.
fn ball_misfit(curve: &PlanarCurve, pl: &Placement, n: f64, peak: Complex64) -> (f64, f64) {
    let inside = |w: Complex64| (w - peak).norm() <= 1.0;
    let mut nodes: f64 = 0.0;
    for &w in curve.nodes().iter().filter(|&&w| inside(w)) {
        nodes = nodes.max(canonical_distance(pl.to_canonical(w), pl.b, n));
    }
    let edge = 0.5 * PI / n * (1.0 - 1e-9);
    let m = 4000;
    let mut cover: f64 = 0.0;
    for j in 0..=m {
        let a = -edge + 2.0 * edge * j as f64 / m as f64;
        let w = pl.to_world(canonical(pl.b, n, a));
        if inside(w) {
            cover = cover.max(point_polyline_distance(w, curve));
        }
    }
    (nodes, cover)
}

/// Least-squares fit of `e^{iφ}·l̃_B + c` to the nodes within distance 1 of the
/// curvature peak.
pub fn fit_special_lagrangian(curve: &PlanarCurve, n: usize) -> Result<SpecialLagrangianFit> {
    if n < 2 {
        return Err(Error::Domain("special Lagrangian models need n ≥ 2".into()));
    }
    let nf = n as f64;
    let d = curvature_and_radial(curve)?;
    let fr = frame(curve)?;
    let (idx, kmax) = d.max_abs_kappa();
    if !(kmax > 0.0) {
        return Err(Error::NoFit("curve has no curvature peak".into()));
    }
    let peak = curve.nodes()[idx];
    let points: Vec<Complex64> = curve.nodes().iter().copied().filter(|w| (w - peak).norm() <= 1.0).collect();
    if points.len() < 5 {
        return Err(Error::NoFit(format!("only {} nodes within the unit ball", points.len())));
    }
    // The tip curvature of l̃_B is (n−1)/B and its centre lies on the convex side.
    let b0 = (nf - 1.0) / kmax;
    let toward = fr[idx].1 * d.kappa[idx].signum();
    let c0 = peak - toward * b0;
    let start = vec![b0.ln(), toward.arg(), c0.re, c0.im];
    let mut best = minimize(&points, nf, start)?;
    // A restart from the first optimum tightens the simplex.
    best = minimize(&points, nf, best)?;
    let pl = Placement::from_params(&best);
    let (residual, cover) = ball_misfit(curve, &pl, nf, peak);
    if !(residual <= RESIDUAL_CAP) {
        return Err(Error::NoFit(format!("residual {residual:.3e} exceeds cap {RESIDUAL_CAP}")));
    }
    if cover > RESIDUAL_CAP.max(curve.max_spacing()) {
        return Err(Error::NoFit(format!("model strays {cover:.3e} from the curve inside the ball")));
    }
    let (theta_bar, k) = split_phase(nf * pl.phi + 0.5 * PI, n);
    Ok(SpecialLagrangianFit {
        b: pl.b,
        k,
        theta_bar,
        translation: [pl.center.re, pl.center.im],
        residual,
    })
}
