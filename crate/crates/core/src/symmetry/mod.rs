//! Linear actions of compact groups `G ≤ SU(n)` on `ℂⁿ`: moment maps, orbit
//! geometry, profile-plane symmetry and ambient checks of lifted profiles.

mod catalog;
mod cyclic;
mod orbit;

pub use catalog::{bedulli_gori_table, preset_catalog, BedulliGoriRow};
pub use cyclic::{cyclic_symmetry_order, explore_cyclic_orders, search_witness, CyclicWitness, WitnessSource, MULTISTARTS, WITNESS_TOLERANCE};
pub use orbit::{AngleCheck, 
    ambient_angle_check, lift_lagrangian, orbit_dimension, orthogonal_decomposition_residual, zero_level_and_isotropic,
    IsotropyCheck, LiftedCloud, OrbitFrame,
};

use std::f64::consts::TAU;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// A Lie algebra `𝔤 ≤ 𝔰𝔲(n)` given by a basis orthonormal under `−tr(XY)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawAction", into = "RawAction")]
pub struct GroupAction {
    pub name: String,
    pub n_ambient: usize,
    pub basis: Vec<CMatrix>,
    pub expected_m: Option<u32>,
    /// Unit point on the zero level with an `(n−1)`-dimensional orbit.
    pub base_point: CVector,
}

#[derive(Serialize, Deserialize)]
struct RawAction {
    name: String,
    n: usize,
    /// Each matrix row-major as `[re, im]` pairs.
    basis: Vec<Vec<[f64; 2]>>,
    expected_m: Option<u32>,
    base_point: Vec<[f64; 2]>,
}

impl From<GroupAction> for RawAction {
    fn from(a: GroupAction) -> Self {
        let pair = |c: &Complex64| [c.re, c.im];
        RawAction {
            name: a.name,
            n: a.n_ambient,
            basis: a
                .basis
                .iter()
                .map(|m| m.transpose().iter().map(pair).collect())
                .collect(),
            expected_m: a.expected_m,
            base_point: a.base_point.iter().map(pair).collect(),
        }
    }
}

impl TryFrom<RawAction> for GroupAction {
    type Error = Error;

    fn try_from(raw: RawAction) -> Result<Self> {
        let n = raw.n;
        let cx = |p: &[f64; 2]| Complex64::new(p[0], p[1]);
        let basis = raw
            .basis
            .iter()
            .map(|m| {
                if m.len() != n * n {
                    return Err(Error::Domain(format!("basis matrix has {} entries, expected {}", m.len(), n * n)));
                }
                Ok(CMatrix::from_row_iterator(n, n, m.iter().map(cx)))
            })
            .collect::<Result<Vec<_>>>()?;
        GroupAction::new(raw.name, basis, raw.expected_m, CVector::from_iterator(n, raw.base_point.iter().map(cx)))
    }
}

/// Real coefficients of `μ(z)` against the orthonormal basis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentValue {
    pub coefficients: Vec<f64>,
}

impl MomentValue {
    pub fn norm(&self) -> f64 {
        self.coefficients.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.coefficients.iter().fold(0.0, |a, c| a.max(c.abs()))
    }
}

/// `⟨X, Y⟩ = −tr(XY)`.
pub fn pairing(x: &CMatrix, y: &CMatrix) -> f64 {
    -(x * y).trace().re
}

fn unit(n: usize, i: usize, j: usize, v: Complex64) -> CMatrix {
    let mut m = CMatrix::zeros(n, n);
    m[(i, j)] = v;
    m
}

/// Orthonormal basis of `𝔰𝔬(k)` placed on the coordinates `offset..offset+k` of `ℂⁿ`.
fn so_block(n: usize, offset: usize, k: usize) -> Vec<CMatrix> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut out = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            let (a, b) = (offset + i, offset + j);
            out.push(unit(n, a, b, Complex64::new(s, 0.0)) - unit(n, b, a, Complex64::new(s, 0.0)));
        }
    }
    out
}

fn real_unit(n: usize, i: usize) -> CVector {
    let mut v = CVector::zeros(n);
    v[i] = Complex64::new(1.0, 0.0);
    v
}

impl GroupAction {
    pub fn new(name: impl Into<String>, basis: Vec<CMatrix>, expected_m: Option<u32>, base_point: CVector) -> Result<Self> {
        let action = GroupAction {
            name: name.into(),
            n_ambient: base_point.len(),
            basis,
            expected_m,
            base_point,
        };
        action.validate()?;
        Ok(action)
    }

    pub fn group_dim(&self) -> usize {
        self.basis.len()
    }

    /// Every invariant the action violates; empty when it is valid.
    pub fn violations(&self) -> Vec<String> {
        let n = self.n_ambient;
        let mut out = Vec::new();
        if n == 0 || self.basis.is_empty() {
            out.push("empty action".to_string());
            return out;
        }
        for (a, x) in self.basis.iter().enumerate() {
            if x.shape() != (n, n) {
                out.push(format!("basis element {a} is not {n}×{n}"));
                continue;
            }
            if (x + x.adjoint()).camax() > 1e-12 {
                out.push(format!("basis element {a} is not anti-Hermitian"));
            }
            if x.trace().norm() > 1e-12 {
                out.push(format!("basis element {a} has trace {}", x.trace()));
            }
        }
        if out.is_empty() {
            for (a, x) in self.basis.iter().enumerate() {
                for (b, y) in self.basis.iter().enumerate().skip(a) {
                    let expect = if a == b { 1.0 } else { 0.0 };
                    let got = pairing(x, y);
                    if (got - expect).abs() > 1e-10 {
                        out.push(format!("⟨X{a}, X{b}⟩ = {got}, expected {expect}"));
                    }
                }
            }
        }
        if let Some(m) = self.expected_m {
            if m == 0 || (2 * n as u32) % m != 0 {
                out.push(format!("expected m = {m} does not divide 2n = {}", 2 * n));
            }
        }
        if self.base_point.len() != n {
            out.push("base point has the wrong length".to_string());
        } else if (self.base_point.norm() - 1.0).abs() > 1e-12 {
            out.push("base point must be a unit vector".to_string());
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        let v = self.violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::Domain(format!("invalid action {:?}: {}", self.name, v.join("; "))))
        }
    }

    /// Diagonal `SO(n)` acting on `ℂⁿ = ℝⁿ ⊗ ℂ`.
    pub fn so(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::Domain("SO(n) preset needs n ≥ 2".into()));
        }
        GroupAction::new(format!("so({n})"), so_block(n, 0, n), Some(2), real_unit(n, 0))
    }

    /// Maximal torus `Tⁿ⁻¹` of diagonal matrices in `SU(n)`.
    pub fn torus(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::Domain("torus preset needs n ≥ 2".into()));
        }
        // Helmert basis of the sum-zero hyperplane.
        let basis = (1..n)
            .map(|k| {
                let s = 1.0 / ((k * (k + 1)) as f64).sqrt();
                let diag = (0..n).map(|j| {
                    let v = if j < k {
                        s
                    } else if j == k {
                        -(k as f64) * s
                    } else {
                        0.0
                    };
                    I * v
                });
                CMatrix::from_diagonal(&CVector::from_iterator(n, diag))
            })
            .collect();
        let base = CVector::from_element(n, Complex64::new(1.0 / (n as f64).sqrt(), 0.0));
        GroupAction::new(format!("torus({n})"), basis, Some(n as u32), base)
    }

    /// `SU(2)` on `Sym³ℂ² ≅ ℂ⁴` in the basis `{w₁³, √3w₁²w₂, √3w₁w₂², w₂³}`.
    pub fn su2_sym3() -> Result<Self> {
        let r3 = 3f64.sqrt();
        let c = |v: f64| Complex64::new(v, 0.0);
        let h = CMatrix::from_diagonal(&CVector::from_vec(vec![I * 3.0, I, -I, I * -3.0]));
        let y = CMatrix::from_row_slice(
            4,
            4,
            &[
                c(0.0), c(-r3), c(0.0), c(0.0),
                c(r3), c(0.0), c(-2.0), c(0.0),
                c(0.0), c(2.0), c(0.0), c(-r3),
                c(0.0), c(0.0), c(r3), c(0.0),
            ],
        );
        let z = CMatrix::from_row_slice(
            4,
            4,
            &[
                c(0.0), c(r3), c(0.0), c(0.0),
                c(r3), c(0.0), c(2.0), c(0.0),
                c(0.0), c(2.0), c(0.0), c(r3),
                c(0.0), c(0.0), c(r3), c(0.0),
            ],
        ) * I;
        let norm = 1.0 / 20f64.sqrt();
        let base = CVector::from_vec(vec![c(1.0), c(0.0), c(0.0), c(1.0)]) / c(2f64.sqrt());
        GroupAction::new("su2-sym3", vec![h * c(norm), y * c(norm), z * c(norm)], Some(4), base)
    }

    /// `S¹ × SO(p) × SO(q)` on `ℂ^{p+q}`, `(e^{iθ}, A, B)·(z, w) = (e^{qiθ}Az, e^{−piθ}Bw)`.
    ///
    /// No cyclic order is recorded for this family.
    pub fn s1_so_so(p: usize, q: usize) -> Result<Self> {
        if p < 2 || q < 2 {
            return Err(Error::Domain("S¹×SO(p)×SO(q) preset needs p, q ≥ 2".into()));
        }
        let n = p + q;
        let scale = 1.0 / ((p * q * n) as f64).sqrt();
        let diag = (0..n).map(|j| if j < p { I * (q as f64 * scale) } else { I * (-(p as f64) * scale) });
        let mut basis = vec![CMatrix::from_diagonal(&CVector::from_iterator(n, diag))];
        basis.extend(so_block(n, 0, p));
        basis.extend(so_block(n, p, q));
        let mut base = CVector::zeros(n);
        base[0] = Complex64::new((p as f64 / n as f64).sqrt(), 0.0);
        base[p] = Complex64::new((q as f64 / n as f64).sqrt(), 0.0);
        GroupAction::new(format!("s1-so({p})-so({q})"), basis, None, base)
    }

    /// Parse a preset name such as `so(3)`, `torus(4)`, `su2-sym3` or `s1-so(3)-so(3)`.
    pub fn preset(name: &str) -> Result<Self> {
        let arg = |s: &str| -> Result<usize> {
            s.trim_end_matches(')')
                .parse()
                .map_err(|_| Error::Domain(format!("bad preset argument in {name:?}")))
        };
        if name == "su2-sym3" {
            GroupAction::su2_sym3()
        } else if let Some(rest) = name.strip_prefix("s1-so(") {
            let (p, q) = rest
                .split_once(")-so(")
                .ok_or_else(|| Error::Domain(format!("unknown preset {name:?}")))?;
            GroupAction::s1_so_so(arg(p)?, arg(q)?)
        } else if let Some(rest) = name.strip_prefix("so(") {
            GroupAction::so(arg(rest)?)
        } else if let Some(rest) = name.strip_prefix("torus(") {
            GroupAction::torus(arg(rest)?)
        } else {
            Err(Error::Domain(format!("unknown preset {name:?}")))
        }
    }

    pub fn algebra_element(&self, coords: &[f64]) -> Result<CMatrix> {
        if coords.len() != self.group_dim() {
            return Err(Error::Domain(format!(
                "expected {} algebra coordinates, got {}",
                self.group_dim(),
                coords.len()
            )));
        }
        let n = self.n_ambient;
        Ok(self
            .basis
            .iter()
            .zip(coords)
            .fold(CMatrix::zeros(n, n), |acc, (x, &c)| acc + x * Complex64::new(c, 0.0)))
    }

    /// `exp(Σ c_a X_a)`.
    pub fn group_element(&self, coords: &[f64]) -> Result<CMatrix> {
        Ok(self.algebra_element(coords)?.exp())
    }

    /// Algebra coordinates uniform in the ball of the given radius.
    pub fn random_coords(&self, rng: &mut impl Rng, radius: f64) -> Vec<f64> {
        let d = self.group_dim();
        let g: Vec<f64> = (0..d).map(|_| StandardNormal.sample(rng)).collect();
        let len = g.iter().map(|x| x * x).sum::<f64>().sqrt();
        let r = radius * rng.random::<f64>().powf(1.0 / d as f64);
        g.iter().map(|x| x * r / len).collect()
    }

    /// A random point of the zero level: `g·(c·base_point)` with random `g` and `c ∈ ℂ*`.
    pub fn random_admissible(&self, rng: &mut impl Rng) -> CVector {
        let g = self.group_element(&self.random_coords(rng, TAU)).expect("coordinate count matches");
        let c = Complex64::from_polar(0.5 + rng.random::<f64>(), TAU * rng.random::<f64>());
        g * (&self.base_point * c)
    }
}

/// Coefficients `μ_a(z) = −½ Im(z* X_a z)`.
pub fn moment(action: &GroupAction, z: &CVector) -> MomentValue {
    MomentValue {
        coefficients: action
            .basis
            .iter()
            .map(|x| -0.5 * z.dotc(&(x * z)).im)
            .collect(),
    }
}

/// `‖μ(gz) − Ad*_g μ(z)‖` for `g = exp(Σ c_a X_a)`.
pub fn equivariance_residual(action: &GroupAction, z: &CVector, coords: &[f64]) -> Result<f64> {
    let g = action.group_element(coords)?;
    let mu = action.algebra_element(&moment(action, z).coefficients)?;
    let moved = &g * &mu * g.adjoint();
    let lhs = moment(action, &(&g * z));
    Ok(action
        .basis
        .iter()
        .zip(&lhs.coefficients)
        .map(|(x, c)| (c - pairing(&moved, x)).powi(2))
        .sum::<f64>()
        .sqrt())
}

/// `ω(u, v) = Im⟨u, v⟩` for the standard Kähler form.
pub fn omega(u: &CVector, v: &CVector) -> f64 {
    u.dotc(v).im
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn cv(v: &[(f64, f64)]) -> CVector {
        CVector::from_iterator(v.len(), v.iter().map(|&(a, b)| Complex64::new(a, b)))
    }

    fn presets() -> Vec<GroupAction> {
        ["so(2)", "so(3)", "so(5)", "torus(3)", "torus(4)", "su2-sym3", "s1-so(3)-so(3)", "s1-so(2)-so(4)"]
            .iter()
            .map(|n| GroupAction::preset(n).unwrap())
            .collect()
    }

    #[test]
    fn so2_moment_by_hand() {
        let so = GroupAction::so(2).unwrap();
        let z = cv(&[(1.0, 0.0), (0.0, 1.0)]);
        // The unnormalised generator [[0,−1],[1,0]] gives 1; the basis element is −1/√2 times it.
        let mu = moment(&so, &z);
        assert!((mu.coefficients[0] + std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        let raw = CMatrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0].map(|v| Complex64::new(v, 0.0)));
        assert!((-0.5 * z.dotc(&(raw * &z)).im - 1.0).abs() < 1e-15);
    }

    #[test]
    fn zero_moments() {
        let t = GroupAction::torus(5).unwrap();
        assert!(moment(&t, &CVector::from_element(5, Complex64::new(1.0, 0.0))).max_abs() < 1e-15);
        let su2 = GroupAction::su2_sym3().unwrap();
        let z = cv(&[(1.0, 0.0), (0.0, 0.0), (0.0, 0.0), (1.0, 0.0)]);
        assert!(moment(&su2, &z).coefficients.iter().all(|&c| c == 0.0));
    }

    #[test]
    fn presets_have_expected_shapes() {
        for (name, dim, m) in [
            ("so(4)", 6, Some(2)),
            ("torus(4)", 3, Some(4)),
            ("su2-sym3", 3, Some(4)),
            ("s1-so(3)-so(3)", 7, None),
        ] {
            let a = GroupAction::preset(name).unwrap();
            assert_eq!((a.group_dim(), a.expected_m), (dim, m), "{name}");
            assert!(moment(&a, &a.base_point).max_abs() < 1e-15);
        }
        assert!(GroupAction::preset("sp(2)").is_err());
        assert!(GroupAction::preset("so(1)").is_err());
    }

    #[test]
    fn validation_catches_bad_bases() {
        let base = cv(&[(1.0, 0.0), (0.0, 0.0)]);
        let hermitian = CMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0].map(|v| Complex64::new(v, 0.0)));
        assert!(GroupAction::new("h", vec![hermitian], None, base.clone()).is_err());
        let so = GroupAction::so(2).unwrap();
        let doubled = &so.basis[0] * Complex64::new(2.0, 0.0);
        assert!(GroupAction::new("d", vec![doubled], None, base.clone()).is_err());
        assert!(GroupAction::new("m", so.basis.clone(), Some(3), base).is_err());
    }

    #[test]
    fn equivariance_round_off() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for a in presets() {
            let zero = vec![0.0; a.group_dim()];
            for _ in 0..20 {
                let z = CVector::from_fn(a.n_ambient, |_, _| {
                    Complex64::new(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng))
                });
                let g = a.random_coords(&mut rng, TAU);
                assert!(equivariance_residual(&a, &z, &g).unwrap() <= 1e-10, "{}", a.name);
                assert!(equivariance_residual(&a, &z, &zero).unwrap() <= 1e-14);
            }
        }
    }

    #[test]
    fn so_zero_level_is_preserved() {
        let so = GroupAction::so(4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..10 {
            let z = so.random_admissible(&mut rng);
            let g = so.group_element(&so.random_coords(&mut rng, 5.0)).unwrap();
            assert!(moment(&so, &(g * z)).max_abs() < 1e-14);
        }
    }

    #[test]
    fn serde_round_trip() {
        let a = GroupAction::su2_sym3().unwrap();
        let text = serde_json::to_string(&a).unwrap();
        let back: GroupAction = serde_json::from_str(&text).unwrap();
        assert_eq!(back, a);
    }
}
