//! Type I and Type II rescalings of singular flows and fits of the limiting
//! models.

mod analysis;
mod cone;
mod rescale;
mod special;

pub use analysis::{analyze_blowup, BlowupAnalysis, BlowupPlan, ScaleFit, Type2Fit};
pub use cone::{fit_cone_pair, ConePairFit};
pub use rescale::{type1_rescale, type2_rescale, Type2Rescaling};
pub use special::{fit_special_lagrangian, SpecialLagrangianFit};

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::curve::angle_distance_mod;

/// Angular tolerance for matching blowup models.
pub const ANGLE_TOLERANCE: f64 = 0.02;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BlowupMode {
    #[serde(rename = "I")]
    TypeI,
    #[serde(rename = "II")]
    TypeII,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlowupReport {
    pub mode: BlowupMode,
    pub theta_bar: f64,
    pub k: i64,
    /// Mode II only.
    pub b: Option<f64>,
    pub residual: f64,
    /// Unconstrained angle between the fitted rays (mode I).
    pub measured_gap: Option<f64>,
    /// Offset of the fitted model centre from the rescaled origin (mode II).
    pub translation: Option<[f64; 2]>,
    pub consistency: Option<bool>,
}

impl From<&ConePairFit> for BlowupReport {
    fn from(fit: &ConePairFit) -> Self {
        BlowupReport {
            mode: BlowupMode::TypeI,
            theta_bar: fit.theta_bar,
            k: fit.k,
            b: None,
            residual: fit.residual,
            measured_gap: Some(fit.measured_gap),
            translation: None,
            consistency: None,
        }
    }
}

/// `θ̄ ∈ [0, π)` and branch `k ∈ [0, 2n)` from the phase `θ̄ + kπ`.
pub(crate) fn split_phase(phase: f64, n: usize) -> (f64, i64) {
    let k = (phase / PI).floor();
    let theta_bar = phase - k * PI;
    (theta_bar, (k as i64).rem_euclid(2 * n as i64))
}

/// Whether a Type II model has the Type I cone pair as its asymptotes.
///
/// Compares the phases `θ̄ + kπ` modulo `2nπ`, so a shift of the branch index
/// by one counts as a mismatch.
pub fn blowdown_consistency(type1: &BlowupReport, type2: &BlowupReport, n: usize) -> bool {
    let a = type1.theta_bar + type1.k as f64 * PI;
    let b = type2.theta_bar + type2.k as f64 * PI;
    angle_distance_mod(a, b, 2.0 * PI * n as f64) <= ANGLE_TOLERANCE
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report(mode: BlowupMode, theta_bar: f64, k: i64) -> BlowupReport {
        BlowupReport {
            mode,
            theta_bar,
            k,
            b: None,
            residual: 0.0,
            measured_gap: None,
            translation: None,
            consistency: None,
        }
    }

    #[test]
    fn matching_models_agree() {
        let a = report(BlowupMode::TypeI, 0.1 * PI, 1);
        assert!(blowdown_consistency(&a, &report(BlowupMode::TypeII, 0.1 * PI + 0.01, 1), 2));
        // Phases just across the θ̄ = 0 seam.
        let a = report(BlowupMode::TypeI, PI - 0.005, 0);
        assert!(blowdown_consistency(&a, &report(BlowupMode::TypeII, 0.005, 1), 2));
    }

    #[test]
    fn mismatches_are_caught() {
        let a = report(BlowupMode::TypeI, 0.1 * PI, 1);
        assert!(!blowdown_consistency(&a, &report(BlowupMode::TypeII, 0.3 * PI, 1), 2));
        assert!(!blowdown_consistency(&a, &report(BlowupMode::TypeII, 0.1 * PI, 2), 2));
        assert!(!blowdown_consistency(&a, &report(BlowupMode::TypeII, 0.1 * PI, 0), 2));
    }

    #[test]
    fn phase_split() {
        let (t, k) = split_phase(2.5 * PI, 2);
        assert!((t - 0.5 * PI).abs() < 1e-12);
        assert_eq!(k, 2);
        assert_eq!(split_phase(-0.5 * PI, 2).1, 3);
    }
}
