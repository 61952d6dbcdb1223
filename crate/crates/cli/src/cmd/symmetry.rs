use std::collections::BTreeSet;
use std::f64::consts::TAU;

use lmcf_core::curve::PlanarCurve;
use lmcf_core::symmetry::{
    ambient_angle_check, cyclic_symmetry_order, equivariance_residual, explore_cyclic_orders, lift_lagrangian, moment,
    orbit_dimension, orthogonal_decomposition_residual, zero_level_and_isotropic, CVector, CyclicWitness, GroupAction,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::Context;
use crate::config::{ensure_dir, SymmetryParams};
use crate::error::{validation, CliResult};
use crate::output::write_report;

const ZERO_TOL: f64 = 1e-10;

pub fn load_action(ctx: &Context, params: &SymmetryParams) -> CliResult<GroupAction> {
    match (&params.preset, &params.basis) {
        (Some(_), Some(_)) => Err(validation("give either a preset or a basis file, not both")),
        (Some(name), None) => Ok(GroupAction::preset(name)?),
        (None, Some(path)) => {
            let path = ctx.input(path);
            let text = std::fs::read_to_string(&path).map_err(|e| validation(format!("{}: {e}", path.display())))?;
            serde_json::from_str(&text).map_err(|e| validation(format!("{}: {e}", path.display())))
        }
        (None, None) => Err(validation("symmetry needs --preset or --basis")),
    }
}

fn random_vector(rng: &mut ChaCha8Rng, n: usize) -> CVector {
    CVector::from_fn(n, |_, _| Complex64::new(rng.random::<f64>() * 2.0 - 1.0, rng.random::<f64>() * 2.0 - 1.0))
}

/// A complex multiple of a real vector.
fn random_real_line(rng: &mut ChaCha8Rng, n: usize) -> CVector {
    let c = Complex64::from_polar(0.5 + rng.random::<f64>(), TAU * rng.random::<f64>());
    CVector::from_fn(n, |_, _| Complex64::new(rng.random::<f64>() * 2.0 - 1.0, 0.0) * c)
}

fn moment_gap(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

#[derive(Serialize)]
pub struct MomentChecks {
    pub base_point: Vec<f64>,
    pub base_point_max_abs: f64,
    pub equivariance_max: f64,
    /// `max |μ(λz) − λ²μ(z)| / λ²`.
    pub scaling_max: f64,
    /// `max |μ(e^{iφ}z) − μ(z)|`.
    pub phase_max: f64,
}

#[derive(Serialize)]
pub struct OrbitChecks {
    /// Union of the two sample families below.
    pub observed_dimensions: Vec<usize>,
    /// Dimensions seen at generic points.
    pub generic_dimensions: Vec<usize>,
    /// Dimensions seen at complex multiples of real vectors.
    pub real_line_dimensions: Vec<usize>,
    pub zero_level_points: usize,
    pub isotropic_points: usize,
    pub isotropy_max_omega: f64,
    pub decomposition_max: f64,
}

#[derive(Serialize)]
pub struct LiftChecks {
    pub points: usize,
    pub symplectic_residual: f64,
    pub moment_drift: f64,
    pub min_frame_rank: usize,
}

#[derive(Serialize)]
pub struct SymmetryReport {
    pub command: &'static str,
    pub seed: u64,
    pub action: String,
    pub n: usize,
    pub group_dim: usize,
    pub samples: usize,
    pub expected_m: Option<u32>,
    pub moment: MomentChecks,
    pub orbits: OrbitChecks,
    /// The recorded order's witness, or every divisor of `2n` when none is recorded.
    pub cyclic: Vec<CyclicWitness>,
    pub cyclic_order: Option<u32>,
    pub angle_max: f64,
    pub lift: LiftChecks,
}

pub fn analyze(action: &GroupAction, samples: usize, seed: u64) -> CliResult<SymmetryReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = action.n_ambient;
    let base = moment(action, &action.base_point).coefficients;

    let mut equivariance_max = 0.0f64;
    let mut scaling_max = 0.0f64;
    let mut phase_max = 0.0f64;
    let mut generic = BTreeSet::new();
    let mut real_line = BTreeSet::new();
    for _ in 0..samples {
        let z = random_vector(&mut rng, n);
        let coords = action.random_coords(&mut rng, TAU);
        equivariance_max = equivariance_max.max(equivariance_residual(action, &z, &coords)?);
        let mu = moment(action, &z).coefficients;
        let lambda = 0.1 + 3.0 * rng.random::<f64>();
        let scaled: Vec<f64> = moment(action, &(&z * Complex64::new(lambda, 0.0))).coefficients;
        let expect: Vec<f64> = mu.iter().map(|m| m * lambda * lambda).collect();
        scaling_max = scaling_max.max(moment_gap(&scaled, &expect) / (lambda * lambda));
        let phase = Complex64::from_polar(1.0, TAU * rng.random::<f64>());
        phase_max = phase_max.max(moment_gap(&moment(action, &(&z * phase)).coefficients, &mu));
        generic.insert(orbit_dimension(action, &z));
        real_line.insert(orbit_dimension(action, &random_real_line(&mut rng, n)));
    }

    let mut zero_level_points = 0;
    let mut isotropic_points = 0;
    let mut isotropy_max_omega = 0.0f64;
    let mut decomposition_max = 0.0f64;
    for _ in 0..samples {
        let z = action.random_admissible(&mut rng);
        let iso = zero_level_and_isotropic(action, &z, ZERO_TOL);
        zero_level_points += iso.zero_level as usize;
        isotropic_points += iso.isotropic as usize;
        isotropy_max_omega = isotropy_max_omega.max(iso.max_omega);
        decomposition_max = decomposition_max.max(orthogonal_decomposition_residual(action, &z)?);
    }

    let cyclic = match action.expected_m {
        Some(m) => vec![cyclic_symmetry_order(action, &action.base_point, m)],
        None => explore_cyclic_orders(action, &action.base_point),
    };
    let cyclic_order = cyclic.iter().filter(|w| w.witnessed).map(|w| w.m).max();

    let mut angle_max = 0.0f64;
    for _ in 0..samples {
        let w = Complex64::from_polar(0.5 + rng.random::<f64>(), TAU * rng.random::<f64>());
        let tangent = Complex64::from_polar(1.0, TAU * rng.random::<f64>());
        let coords = action.random_coords(&mut rng, TAU);
        angle_max = angle_max.max(ambient_angle_check(action, w, tangent, &coords)?.residual);
    }

    let circle = PlanarCurve::circle(Complex64::new(0.0, 0.0), 1.0, 32, 0.0)?;
    let cloud = lift_lagrangian(action, &circle, 8, &mut rng)?;

    Ok(SymmetryReport {
        command: "symmetry",
        seed,
        action: action.name.clone(),
        n,
        group_dim: action.group_dim(),
        samples,
        expected_m: action.expected_m,
        moment: MomentChecks {
            base_point_max_abs: base.iter().fold(0.0, |a, c| a.max(c.abs())),
            base_point: base,
            equivariance_max,
            scaling_max,
            phase_max,
        },
        orbits: OrbitChecks {
            observed_dimensions: generic.union(&real_line).copied().collect(),
            generic_dimensions: generic.into_iter().collect(),
            real_line_dimensions: real_line.into_iter().collect(),
            zero_level_points,
            isotropic_points,
            isotropy_max_omega,
            decomposition_max,
        },
        cyclic,
        cyclic_order,
        angle_max,
        lift: LiftChecks {
            points: cloud.points.len(),
            symplectic_residual: cloud.symplectic_residual,
            moment_drift: cloud.moment_drift,
            min_frame_rank: cloud.min_frame_rank,
        },
    })
}

pub fn run(ctx: &Context, params: &SymmetryParams) -> CliResult<()> {
    let action = load_action(ctx, params)?;
    let samples = params.samples.unwrap_or(100);
    if samples == 0 {
        return Err(validation("samples must be positive"));
    }
    ctx.log(format!("{} on C^{}", action.name, action.n_ambient));
    let report = analyze(&action, samples, ctx.seed)?;
    ensure_dir(&ctx.out)?;
    write_report(&ctx.out, &report)
}
