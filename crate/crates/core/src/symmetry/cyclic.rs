use std::f64::consts::TAU;

use argmin::core::{CostFunction, Executor, Gradient, State};
use argmin::solver::linesearch::MoreThuenteLineSearch;
use argmin::solver::quasinewton::BFGS;
use nalgebra::DVector;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{CMatrix, CVector, GroupAction};

/// Residual below which a group element counts as a witness.
pub const WITNESS_TOLERANCE: f64 = 1e-6;
pub const MULTISTARTS: usize = 32;
const SEARCH_SEED: u64 = 0x5eed_c1c1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WitnessSource {
    Analytic,
    Search,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CyclicWitness {
    pub m: u32,
    pub witnessed: bool,
    /// `‖g·z − e^{2πi/m}z‖ / ‖z‖` for the best element found.
    pub residual: f64,
    pub source: WitnessSource,
    /// Algebra coordinates of the witness when it came from the search.
    pub coords: Option<Vec<f64>>,
}

fn relative_residual(g: &CMatrix, z: &CVector, m: u32) -> f64 {
    let target = z * Complex64::from_polar(1.0, TAU / m as f64);
    (g * z - target).norm() / z.norm()
}

/// Real unit vector `x` with `z ∈ ℂ·x`, from the largest coordinate's phase.
fn real_direction(z: &CVector) -> Option<DVector<f64>> {
    let (j, _) = z
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))?;
    let phase = Complex64::from_polar(1.0, -z[j].arg());
    let x = z.map(|c| (c * phase).re);
    let len = x.norm();
    (len > 0.0).then(|| x / len)
}

/// Closed-form elements of the presets: a rotation by π in the plane of `x` for
/// `SO(n)`, the central `e^{2πi/n}` for the torus, the anti-diagonal element for `Sym³`.
fn analytic_witness(action: &GroupAction, z: &CVector, m: u32) -> Option<CMatrix> {
    let n = action.n_ambient;
    let name = action.name.as_str();
    if name.starts_with("so(") && m == 2 {
        let x = real_direction(z)?;
        // Any unit y ⟂ x completes the plane of the half-turn.
        let k = (0..n).min_by(|&a, &b| x[a].abs().total_cmp(&x[b].abs()))?;
        let mut y = DVector::zeros(n);
        y[k] = 1.0;
        y -= &x * x[k];
        y /= y.norm();
        let real = nalgebra::DMatrix::identity(n, n) - (&x * x.transpose()) * 2.0 - (&y * y.transpose()) * 2.0;
        Some(real.map(|v| Complex64::new(v, 0.0)))
    } else if name.starts_with("torus(") && m as usize == n {
        Some(CMatrix::identity(n, n) * Complex64::from_polar(1.0, TAU / n as f64))
    } else if name == "su2-sym3" && m == 4 {
        let i = Complex64::new(0.0, 1.0);
        Some(CMatrix::from_fn(4, 4, |r, c| if r + c == 3 { i } else { Complex64::new(0.0, 0.0) }))
    } else {
        None
    }
}

struct WitnessCost<'a> {
    action: &'a GroupAction,
    z: &'a CVector,
    target: CVector,
}

impl WitnessCost<'_> {
    fn eval(&self, c: &[f64]) -> f64 {
        match self.action.group_element(c) {
            Ok(g) => (g * self.z - &self.target).norm_squared(),
            Err(_) => f64::INFINITY,
        }
    }
}

impl CostFunction for WitnessCost<'_> {
    type Param = Vec<f64>;
    type Output = f64;

    fn cost(&self, p: &Self::Param) -> std::result::Result<f64, argmin::core::Error> {
        Ok(self.eval(p))
    }
}

impl Gradient for WitnessCost<'_> {
    type Param = Vec<f64>;
    type Gradient = Vec<f64>;

    fn gradient(&self, p: &Self::Param) -> std::result::Result<Vec<f64>, argmin::core::Error> {
        let h = 1e-6;
        let mut q = p.clone();
        Ok((0..p.len())
            .map(|a| {
                q[a] = p[a] + h;
                let up = self.eval(&q);
                q[a] = p[a] - h;
                let down = self.eval(&q);
                q[a] = p[a];
                (up - down) / (2.0 * h)
            })
            .collect())
    }
}

fn descend(cost: WitnessCost<'_>, start: Vec<f64>) -> Option<Vec<f64>> {
    let d = start.len();
    let identity: Vec<Vec<f64>> = (0..d).map(|i| (0..d).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
    let solver = BFGS::new(MoreThuenteLineSearch::new())
        .with_tolerance_grad(1e-9)
        .ok()?;
    let res = Executor::new(cost, solver)
        .configure(|s| s.param(start).inv_hessian(identity).max_iters(200).target_cost(1e-24))
        .run()
        .ok()?;
    res.state.get_best_param().cloned()
}

/// Multistart quasi-Newton search for `g = exp(Σ c_a X_a)` with `g·z = e^{2πi/m}z`.
///
/// Starts run in parallel; ties in the residual go to the lower start index.
pub fn search_witness(action: &GroupAction, z: &CVector, m: u32, seed: u64) -> CyclicWitness {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let starts: Vec<Vec<f64>> = (0..MULTISTARTS).map(|_| action.random_coords(&mut rng, TAU)).collect();
    let target = z * Complex64::from_polar(1.0, TAU / m as f64);
    let best = starts
        .into_par_iter()
        .enumerate()
        .filter_map(|(idx, start)| {
            let cost = WitnessCost { action, z, target: target.clone() };
            let c = descend(cost, start)?;
            let g = action.group_element(&c).ok()?;
            Some((relative_residual(&g, z, m), idx, c))
        })
        .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    match best {
        Some((residual, _, c)) => CyclicWitness {
            m,
            witnessed: residual <= WITNESS_TOLERANCE,
            residual,
            source: WitnessSource::Search,
            coords: Some(c),
        },
        None => CyclicWitness {
            m,
            witnessed: false,
            residual: f64::INFINITY,
            source: WitnessSource::Search,
            coords: None,
        },
    }
}

/// Is `e^{2πi/m}z` in the orbit `G·z`? Analytic witnesses first, then the search.
pub fn cyclic_symmetry_order(action: &GroupAction, z: &CVector, m: u32) -> CyclicWitness {
    if let Some(g) = analytic_witness(action, z, m) {
        let residual = relative_residual(&g, z, m);
        if residual <= WITNESS_TOLERANCE {
            return CyclicWitness {
                m,
                witnessed: true,
                residual,
                source: WitnessSource::Analytic,
                coords: None,
            };
        }
    }
    search_witness(action, z, m, SEARCH_SEED ^ m as u64)
}

/// Witness attempts for every divisor `m ≥ 2` of `2n`; the largest witnessed `m` is the order.
pub fn explore_cyclic_orders(action: &GroupAction, z: &CVector) -> Vec<CyclicWitness> {
    let two_n = 2 * action.n_ambient as u32;
    (2..=two_n)
        .filter(|m| two_n % m == 0)
        .map(|m| cyclic_symmetry_order(action, z, m))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preset_orders_at_base_points() {
        for (a, m) in [
            (GroupAction::so(3).unwrap(), 2),
            (GroupAction::so(5).unwrap(), 2),
            (GroupAction::torus(4).unwrap(), 4),
            (GroupAction::torus(3).unwrap(), 3),
            (GroupAction::su2_sym3().unwrap(), 4),
        ] {
            let w = cyclic_symmetry_order(&a, &a.base_point, m);
            assert!(w.witnessed && w.residual <= 1e-12, "{}: {w:?}", a.name);
            assert_eq!(w.source, WitnessSource::Analytic);
            assert_eq!((2 * a.n_ambient as u32) % m, 0);
        }
    }

    #[test]
    fn search_recovers_sym3_witness() {
        let a = GroupAction::su2_sym3().unwrap();
        let w = search_witness(&a, &a.base_point, 4, 1);
        assert!(w.witnessed, "{w:?}");
        let wrong = search_witness(&a, &a.base_point, 8, 1);
        assert!(!wrong.witnessed);
    }

    #[test]
    fn random_admissible_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for a in [GroupAction::so(4).unwrap(), GroupAction::torus(3).unwrap(), GroupAction::su2_sym3().unwrap()] {
            let m = a.expected_m.unwrap();
            for _ in 0..3 {
                let z = a.random_admissible(&mut rng);
                let w = cyclic_symmetry_order(&a, &z, m);
                assert!(w.witnessed, "{}: {w:?}", a.name);
            }
        }
    }

    #[test]
    fn exploratory_order_for_s1_so_so() {
        let a = GroupAction::s1_so_so(3, 3).unwrap();
        let found: Vec<u32> = explore_cyclic_orders(&a, &a.base_point)
            .into_iter()
            .filter(|w| w.witnessed)
            .map(|w| w.m)
            .collect();
        assert_eq!(found, vec![2, 4]);
    }

    #[test]
    fn torus_has_no_larger_order() {
        let a = GroupAction::torus(3).unwrap();
        let w = cyclic_symmetry_order(&a, &a.base_point, 6);
        assert!(!w.witnessed);
    }
}
