//! Classified solitons of the reduced flow: cones, special Lagrangians,
//! shrinkers, expanders and the grim reaper.

mod closed_form;
mod expander;
mod shooting;
mod shrinker;
mod translator;

pub use closed_form::{
    asymptotes_of, grim_reaper, grim_reaper_point, sample_cone, sample_special_lagrangian,
    special_lagrangian_point, SamplerConfig,
};
pub use expander::{asymptote_span, find_expander, ExpanderSolution};
pub use shooting::{integrate_soliton, soliton_rhs, RhsValue, ShootingState, ShootingTrace, STEP_FRACTION};
pub use shrinker::{
    admissible_pairs, find_shrinker, oscillatory_window, period_angle, period_angle_with_step, shrinker_atlas,
    ShrinkerSolution,
};
pub use translator::{min_translator_residual, translator_residual};

use serde::{Deserialize, Serialize};

use crate::curve::{curvature_and_radial, PlanarCurve};
use crate::error::{Error, Result};

/// Parameters of one classified model.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SolitonKind {
    Cone { k: i64, theta_bar: f64 },
    SpecialLagrangian { b: f64, k: i64, theta_bar: f64 },
    Shrinker { p: u32, q: u32 },
    Expander { alpha: f64 },
    GrimReaper,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolitonSpec {
    pub n: usize,
    #[serde(flatten)]
    pub kind: SolitonKind,
}

pub fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl SolitonSpec {
    pub fn new(n: usize, kind: SolitonKind) -> Result<Self> {
        let spec = SolitonSpec { n, kind };
        spec.validate()?;
        Ok(spec)
    }

    /// Signed rate in `κ = −(λ − (n−1)/r²)⟨γ,N⟩`: +1 shrinks, −1 expands.
    pub fn lambda(&self) -> f64 {
        match self.kind {
            SolitonKind::Shrinker { .. } => 1.0,
            SolitonKind::Expander { .. } => -1.0,
            _ => 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Domain("dimension n must be at least 1".into()));
        }
        let n = self.n as f64;
        match self.kind {
            SolitonKind::Cone { theta_bar, .. } if !theta_bar.is_finite() => {
                Err(Error::Domain("theta_bar must be finite".into()))
            }
            SolitonKind::SpecialLagrangian { b, theta_bar, .. } => {
                if !(b > 0.0 && b.is_finite()) {
                    Err(Error::Domain(format!("B = {b} must be positive")))
                } else if !theta_bar.is_finite() {
                    Err(Error::Domain("theta_bar must be finite".into()))
                } else {
                    Ok(())
                }
            }
            SolitonKind::Shrinker { p, q } => {
                if p == 0 || q == 0 || gcd(p, q) != 1 {
                    return Err(Error::Domain(format!("({p},{q}) is not a coprime pair")));
                }
                let ratio = p as f64 / q as f64;
                let lo = 1.0 / (2.0 * n);
                let hi = 1.0 / (2.0 * n).sqrt();
                if ratio > lo && ratio < hi {
                    Ok(())
                } else {
                    Err(Error::Domain(format!(
                        "p/q = {ratio:.6} outside the open interval ({lo:.6}, {hi:.6})"
                    )))
                }
            }
            SolitonKind::Expander { alpha } => {
                if alpha > 0.0 && alpha < std::f64::consts::PI / n {
                    Ok(())
                } else {
                    Err(Error::Domain(format!("alpha = {alpha} outside (0, π/{})", self.n)))
                }
            }
            _ => Ok(()),
        }
    }
}

/// Largest soliton-equation mismatch `|κ + (λ − (n−1)/r²)⟨γ,N⟩|` over nodes.
///
/// End nodes of open arcs are skipped.
pub fn soliton_residual(curve: &PlanarCurve, lambda: f64, n: usize) -> Result<f64> {
    let d = curvature_and_radial(curve)?;
    let len = curve.len();
    let range = if curve.is_closed() { 0..len } else { 1..len - 1 };
    let m = n as f64 - 1.0;
    Ok(range
        .map(|i| {
            let r2 = d.r[i] * d.r[i];
            (d.kappa[i] + (lambda - m / r2) * d.radial[i]).abs()
        })
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn shrinker_interval_is_open() {
        assert!(SolitonSpec::new(2, SolitonKind::Shrinker { p: 1, q: 3 }).is_ok());
        assert!(SolitonSpec::new(2, SolitonKind::Shrinker { p: 1, q: 2 }).is_err());
        assert!(SolitonSpec::new(2, SolitonKind::Shrinker { p: 1, q: 4 }).is_err());
        assert!(SolitonSpec::new(2, SolitonKind::Shrinker { p: 2, q: 6 }).is_err());
        assert!(SolitonSpec::new(1, SolitonKind::Shrinker { p: 3, q: 5 }).is_ok());
    }

    #[test]
    fn expander_interval() {
        use std::f64::consts::PI;
        assert!(SolitonSpec::new(2, SolitonKind::Expander { alpha: PI / 4.0 }).is_ok());
        assert!(SolitonSpec::new(2, SolitonKind::Expander { alpha: PI / 2.0 }).is_err());
        assert!(SolitonSpec::new(2, SolitonKind::Expander { alpha: 0.0 }).is_err());
    }

    #[test]
    fn circle_residuals() {
        let n = 2;
        let r = (n as f64).sqrt();
        let circle = PlanarCurve::circle(Complex64::new(0.0, 0.0), r, 2000, 0.0).unwrap();
        // Three-point curvature on the inscribed polygon is 1/(R cos²(δ/2)).
        let delta = std::f64::consts::TAU / 2000.0;
        let fd_error = (1.0 / (delta / 2.0).cos().powi(2) - 1.0) / r;
        // Round-off of the second difference is about ε·R/h² ≈ 2e-11 here.
        let res = soliton_residual(&circle, 1.0, n).unwrap();
        assert!((res - fd_error).abs() < 1e-9, "{res} vs {fd_error}");
        let unit = PlanarCurve::circle(Complex64::new(0.0, 0.0), 1.0, 2000, 0.0).unwrap();
        assert!((soliton_residual(&unit, 0.0, 2).unwrap() - 2.0).abs() < 1e-5);
    }
}
