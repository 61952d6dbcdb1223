use std::f64::consts::PI;

use num_complex::Complex64;

use crate::curve::{sample_parametric, PlanarCurve};
use crate::error::{Error, Result};

/// The wide barrier curve `η₀(s) = sin(πs/β)^(−β/π) e^{is}`, truncated where
/// `|η₀| = r_max`.
///
/// Nodes are equally spaced in `∫|dz|/|z|`, and the node set is exactly
/// symmetric under reflection across the bisector `arg z = β/2`.
pub fn neves_initial(beta: f64, n: usize, samples: usize, r_max: f64) -> Result<PlanarCurve> {
    if n == 0 || !(beta > 0.0 && beta < 2.0 * PI / n as f64) {
        return Err(Error::Domain(format!("beta = {beta} outside (0, 2π/n) for n = {n}")));
    }
    if !(r_max > 1.0) {
        return Err(Error::Domain(format!("r_max = {r_max} must exceed the tip radius 1")));
    }
    let eta = |s: f64| Complex64::from_polar((PI * s / beta).sin().powf(-beta / PI), s);
    let eps = beta / PI * r_max.powf(-PI / beta).asin();
    let half = samples.div_ceil(2).max(5);
    let first = sample_parametric(eta, eps, 0.5 * beta, half, |z| z.norm());
    let mirror = Complex64::from_polar(1.0, beta);
    let mut nodes = first.clone();
    let tip = nodes.pop().unwrap();
    let tip = Complex64::from_polar(1.0, 0.5 * beta).scale(tip.norm());
    nodes.push(tip);
    nodes.extend(first.iter().rev().skip(1).map(|z| mirror * z.conj()));
    PlanarCurve::open(nodes)
}
