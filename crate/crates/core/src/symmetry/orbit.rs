use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

use super::{moment, omega, CMatrix, CVector, GroupAction};
use crate::curve::{frame, PlanarCurve};
use crate::error::{Error, Result};

/// Relative singular-value cutoff for real ranks.
const RANK_TOL: f64 = 1e-8;

/// Infinitesimal orbit `{ρ_z(X_a) = −X_a z}` at a point, with an optional profile tangent.
#[derive(Clone, Debug, PartialEq)]
pub struct OrbitFrame {
    pub base: CVector,
    pub vectors: Vec<CVector>,
    pub tangent: Option<CVector>,
}

impl OrbitFrame {
    pub fn at(action: &GroupAction, z: &CVector) -> Self {
        OrbitFrame {
            base: z.clone(),
            vectors: action.basis.iter().map(|x| -(x * z)).collect(),
            tangent: None,
        }
    }

    pub fn with_tangent(mut self, tangent: CVector) -> Self {
        self.tangent = Some(tangent);
        self
    }

    /// Orbit vectors followed by the tangent, if any.
    pub fn columns(&self) -> Vec<CVector> {
        let mut cols = self.vectors.clone();
        cols.extend(self.tangent.iter().cloned());
        cols
    }

    pub fn real_rank(&self) -> usize {
        real_rank(&self.columns())
    }
}

/// Columns `(Re v, Im v)` in `ℝ²ⁿ`.
fn realify(vs: &[CVector]) -> DMatrix<f64> {
    let n = vs.first().map_or(0, |v| v.len());
    DMatrix::from_fn(2 * n, vs.len(), |i, j| if i < n { vs[j][i].re } else { vs[j][i - n].im })
}

/// Real rank of `vs` from singular values above `RANK_TOL` times the largest.
fn real_rank(vs: &[CVector]) -> usize {
    if vs.is_empty() {
        return 0;
    }
    let sv = realify(vs).singular_values();
    let top = sv.max();
    sv.iter().filter(|&&s| top > 0.0 && s > RANK_TOL * top).count()
}

/// Real-orthonormal basis of the real span of `vs`.
///
/// Column-pivoted Gram–Schmidt with a second orthogonalisation pass; the
/// singular vectors are unreliable when singular values come in equal pairs.
pub(crate) fn real_basis(vs: &[CVector]) -> Vec<CVector> {
    let rank = real_rank(vs);
    let mut rest: Vec<CVector> = vs.to_vec();
    let mut basis: Vec<CVector> = Vec::with_capacity(rank);
    while basis.len() < rank {
        let (j, _) = rest
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
            .expect("rank bounded by the number of vectors");
        let mut v = rest.swap_remove(j);
        for _ in 0..2 {
            for u in &basis {
                v -= u * Complex64::new(real_dot(u, &v), 0.0);
            }
        }
        v /= Complex64::new(v.norm(), 0.0);
        for r in rest.iter_mut() {
            *r -= &v * Complex64::new(real_dot(&v, r), 0.0);
        }
        basis.push(v);
    }
    basis
}

/// `⟨u, v⟩_ℝ = Re(u* v)`.
fn real_dot(u: &CVector, v: &CVector) -> f64 {
    u.dotc(v).re
}

pub fn orbit_dimension(action: &GroupAction, z: &CVector) -> usize {
    OrbitFrame::at(action, z).real_rank()
}

#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct IsotropyCheck {
    /// `max_a |μ_a(z)| ≤ tol`.
    pub zero_level: bool,
    pub max_moment: f64,
    /// `max_{a,b} |ω(ρ_z(X_a), ρ_z(X_b))|`.
    pub max_omega: f64,
    pub isotropic: bool,
}

/// Zero-level test with the direct isotropy evaluation alongside.
///
/// For abelian actions every orbit is isotropic, so `isotropic` may hold off
/// the zero level.
pub fn zero_level_and_isotropic(action: &GroupAction, z: &CVector, tol: f64) -> IsotropyCheck {
    let max_moment = moment(action, z).max_abs();
    let vs = OrbitFrame::at(action, z).vectors;
    let mut max_omega = 0.0f64;
    for (a, u) in vs.iter().enumerate() {
        for v in &vs[a + 1..] {
            max_omega = max_omega.max(omega(u, v).abs());
        }
    }
    IsotropyCheck {
        zero_level: max_moment <= tol,
        max_moment,
        max_omega,
        isotropic: max_omega <= tol,
    }
}

fn require_cohomogeneity_one(action: &GroupAction, z: &CVector) -> Result<()> {
    let dim = orbit_dimension(action, z);
    let want = action.n_ambient - 1;
    if dim != want {
        return Err(Error::Domain(format!("orbit dimension {dim} at z, expected {want}")));
    }
    Ok(())
}

/// Largest cross-block entry of the real Gram matrix of `P_z`, `T_zO` and `J T_zO`.
pub fn orthogonal_decomposition_residual(action: &GroupAction, z: &CVector) -> Result<f64> {
    require_cohomogeneity_one(action, z)?;
    let i = Complex64::new(0.0, 1.0);
    let orbit = OrbitFrame::at(action, z).vectors;
    let rotated: Vec<CVector> = orbit.iter().map(|v| v * i).collect();
    let blocks = [
        real_basis(&[z.clone(), z * i]),
        real_basis(&orbit),
        real_basis(&rotated),
    ];
    let mut worst = 0.0f64;
    for (a, left) in blocks.iter().enumerate() {
        for right in &blocks[a + 1..] {
            for u in left {
                for v in right {
                    worst = worst.max(real_dot(u, v).abs());
                }
            }
        }
    }
    Ok(worst)
}

/// `G·l` sampled at every profile node, `profile ⊂ ℂ·z₀` with `z₀` the action's base point.
#[derive(Clone, Debug)]
pub struct LiftedCloud {
    pub points: Vec<CVector>,
    pub frames: Vec<OrbitFrame>,
    /// `max |ω(u, v)| / (|u||v|)` over frame pairs.
    pub symplectic_residual: f64,
    /// `max ‖μ(p) − μ(p₀)‖` over the cloud.
    pub moment_drift: f64,
    /// Smallest real rank of a frame; `n` for an immersed Lagrangian.
    pub min_frame_rank: usize,
}

pub fn lift_lagrangian(
    action: &GroupAction,
    profile: &PlanarCurve,
    orbit_samples: usize,
    rng: &mut impl Rng,
) -> Result<LiftedCloud> {
    let z0 = &action.base_point;
    require_cohomogeneity_one(action, z0)?;
    let tangents = frame(profile)?;
    let group: Vec<CMatrix> = (0..orbit_samples.max(1))
        .map(|_| action.group_element(&action.random_coords(rng, std::f64::consts::TAU)))
        .collect::<Result<_>>()?;
    let mut points = Vec::new();
    let mut frames = Vec::new();
    for (&w, &(t, _)) in profile.nodes().iter().zip(&tangents) {
        for g in &group {
            let p = g * (z0 * w);
            let f = OrbitFrame::at(action, &p).with_tangent(g * (z0 * t));
            points.push(p);
            frames.push(f);
        }
    }
    let reference = moment(action, &points[0]);
    let moment_drift = points
        .iter()
        .map(|p| {
            moment(action, p)
                .coefficients
                .iter()
                .zip(&reference.coefficients)
                .map(|(a, b)| (a - b).powi(2))
                .sum::<f64>()
                .sqrt()
        })
        .fold(0.0, f64::max);
    let mut symplectic_residual = 0.0f64;
    let mut min_frame_rank = usize::MAX;
    for f in &frames {
        let cols = f.columns();
        for (a, u) in cols.iter().enumerate() {
            for v in &cols[a + 1..] {
                let scale = u.norm() * v.norm();
                if scale > 0.0 {
                    symplectic_residual = symplectic_residual.max(omega(u, v).abs() / scale);
                }
            }
        }
        min_frame_rank = min_frame_rank.min(f.real_rank());
    }
    Ok(LiftedCloud {
        points,
        frames,
        symplectic_residual,
        moment_drift,
        min_frame_rank,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct AngleCheck {
    /// `arg det` of the ambient frame, less the calibration offset.
    pub ambient: f64,
    /// `arg τ + (n−1) arg w`.
    pub profile: f64,
    /// `arg det` at `w = 1`, `τ = 1`, `g = e`; absorbs the phase of `z₀`.
    pub offset: f64,
    /// Distance between `ambient` and `profile` modulo π.
    pub residual: f64,
}

fn frame_angle(action: &GroupAction, p: &CVector, tangent: &CVector) -> Result<f64> {
    let n = action.n_ambient;
    let orbit = real_basis(&OrbitFrame::at(action, p).vectors);
    if orbit.len() != n - 1 {
        return Err(Error::Domain(format!("orbit frame has rank {}, expected {}", orbit.len(), n - 1)));
    }
    let mut cols = orbit;
    cols.push(tangent / Complex64::new(tangent.norm(), 0.0));
    let det = CMatrix::from_columns(&cols).determinant();
    if det.norm() < 1e-10 {
        return Err(Error::Numerical(format!("singular ambient frame, |det| = {:e}", det.norm())));
    }
    Ok(det.arg())
}

fn mod_pi_distance(a: f64) -> f64 {
    let r = a.rem_euclid(std::f64::consts::PI);
    r.min(std::f64::consts::PI - r)
}

/// Lagrangian angle of the lift at `g·w·z₀` from `Ω = dz₁∧…∧dzₙ`, compared with the profile formula.
pub fn ambient_angle_check(action: &GroupAction, w: Complex64, tangent: Complex64, coords: &[f64]) -> Result<AngleCheck> {
    if w.norm() == 0.0 || tangent.norm() == 0.0 {
        return Err(Error::Domain("node and tangent must be nonzero".into()));
    }
    let z0 = &action.base_point;
    let offset = frame_angle(action, z0, z0)?;
    let g = action.group_element(coords)?;
    let ambient = frame_angle(action, &(&g * (z0 * w)), &(&g * (z0 * tangent)))? - offset;
    let profile = tangent.arg() + (action.n_ambient as f64 - 1.0) * w.arg();
    Ok(AngleCheck {
        ambient,
        profile,
        offset,
        residual: mod_pi_distance(ambient - profile),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn cv(v: &[(f64, f64)]) -> CVector {
        CVector::from_iterator(v.len(), v.iter().map(|&(a, b)| Complex64::new(a, b)))
    }

    #[test]
    fn so_orbit_dimensions() {
        for n in 2..6 {
            let so = GroupAction::so(n).unwrap();
            let mut x = vec![(0.0, 0.0); n];
            x[0] = (0.6, 0.0);
            x[1] = (0.8, 0.0);
            assert_eq!(orbit_dimension(&so, &cv(&x)), n - 1);
            if n >= 3 {
                x[2] = (0.0, 1.0);
                assert_eq!(orbit_dimension(&so, &cv(&x)), 2 * n - 3);
            }
        }
    }

    #[test]
    fn torus_orbit_dimension() {
        let t = GroupAction::torus(4).unwrap();
        let z = cv(&[(1.0, 0.0), (0.0, 2.0), (-1.0, 1.0), (0.3, 0.0)]);
        assert_eq!(orbit_dimension(&t, &z), 3);
        let z = cv(&[(1.0, 0.0), (0.0, 0.0), (0.0, 0.0), (0.3, 0.0)]);
        assert_eq!(orbit_dimension(&t, &z), 2);
    }

    #[test]
    fn so_isotropy_matches_dependence() {
        let so = GroupAction::so(3).unwrap();
        let dependent = cv(&[(1.0, 2.0), (0.5, 1.0), (-1.0, -2.0)]);
        let c = zero_level_and_isotropic(&so, &dependent, 1e-12);
        assert!(c.zero_level && c.isotropic);
        let independent = cv(&[(1.0, 0.0), (0.0, 1.0), (0.0, 0.0)]);
        let c = zero_level_and_isotropic(&so, &independent, 1e-12);
        assert!(!c.zero_level && !c.isotropic);
    }

    #[test]
    fn su2_base_point_is_isotropic() {
        let su2 = GroupAction::su2_sym3().unwrap();
        let z = cv(&[(1.0, 0.0), (0.0, 0.0), (0.0, 0.0), (1.0, 0.0)]);
        let c = zero_level_and_isotropic(&su2, &z, 1e-14);
        assert!(c.zero_level && c.isotropic && c.max_moment == 0.0);
    }

    #[test]
    fn decompositions_are_orthogonal() {
        for a in [
            GroupAction::so(3).unwrap(),
            GroupAction::so(5).unwrap(),
            GroupAction::torus(4).unwrap(),
            GroupAction::su2_sym3().unwrap(),
            GroupAction::s1_so_so(3, 3).unwrap(),
        ] {
            let r = orthogonal_decomposition_residual(&a, &a.base_point).unwrap();
            assert!(r <= 1e-10, "{}: {r}", a.name);
        }
        let so = GroupAction::so(3).unwrap();
        let bad = cv(&[(1.0, 0.0), (0.0, 1.0), (0.0, 0.0)]);
        assert!(orthogonal_decomposition_residual(&so, &bad).is_err());
    }

    #[test]
    fn chekanov_torus_lift() {
        let so = GroupAction::so(2).unwrap();
        let circle = PlanarCurve::circle(Complex64::new(0.0, 0.0), 1.0, 64, 0.1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let cloud = lift_lagrangian(&so, &circle, 8, &mut rng).unwrap();
        assert_eq!(cloud.points.len(), 64 * 8);
        assert!(cloud.symplectic_residual <= 1e-8, "{}", cloud.symplectic_residual);
        assert!(cloud.moment_drift <= 1e-14);
        assert_eq!(cloud.min_frame_rank, 2);
    }

    #[test]
    fn torus_cone_lift_has_no_drift() {
        let t = GroupAction::torus(3).unwrap();
        let nodes = (1..40).map(|j| Complex64::from_polar(0.1 * j as f64, 0.2)).collect();
        let ray = PlanarCurve::open(nodes).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let cloud = lift_lagrangian(&t, &ray, 6, &mut rng).unwrap();
        assert!(cloud.moment_drift <= 1e-14, "{}", cloud.moment_drift);
        assert!(cloud.symplectic_residual <= 1e-10);
        assert_eq!(cloud.min_frame_rank, 3);
    }

    #[test]
    fn so2_angles() {
        let so = GroupAction::so(2).unwrap();
        let c = ambient_angle_check(&so, Complex64::new(2.0, 0.0), Complex64::new(1.0, 0.0), &[0.0]).unwrap();
        assert!(c.residual <= 1e-10 && mod_pi_distance(c.offset) < 1e-12);
        for phi in [0.3, 1.1, 2.5] {
            let w = Complex64::from_polar(1.0, phi);
            let c = ambient_angle_check(&so, w, w, &[0.7]).unwrap();
            assert!(mod_pi_distance(c.ambient - 2.0 * phi) <= 1e-10);
            assert!(c.residual <= 1e-10);
        }
    }

    #[test]
    fn su2_angle_at_base_point() {
        let su2 = GroupAction::su2_sym3().unwrap();
        let c = ambient_angle_check(&su2, Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0), &[0.0; 3]).unwrap();
        assert!(c.residual <= 1e-8, "{c:?}");
        assert!(mod_pi_distance(c.profile - PI / 2.0) < 1e-15);
    }

    #[test]
    fn ambient_angle_random_nodes() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for a in [
            GroupAction::so(4).unwrap(),
            GroupAction::torus(3).unwrap(),
            GroupAction::su2_sym3().unwrap(),
            GroupAction::s1_so_so(2, 3).unwrap(),
        ] {
            for _ in 0..20 {
                let w = Complex64::from_polar(0.2 + rng.random::<f64>(), 6.0 * rng.random::<f64>());
                let t = Complex64::from_polar(1.0, 6.0 * rng.random::<f64>());
                let g = a.random_coords(&mut rng, 3.0);
                let c = ambient_angle_check(&a, w, t, &g).unwrap();
                assert!(c.residual <= 1e-8, "{}: {c:?}", a.name);
            }
        }
    }
}
