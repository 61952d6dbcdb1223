//! Planar reduction of cohomogeneity-one Lagrangian mean curvature flow in ℂⁿ.
//!
//! A Lagrangian invariant under a compact group `G ≤ SU(n)` with
//! (n−1)-dimensional orbits is determined by its profile curve in a complex
//! line. The modules here evolve such curves, construct the classified
//! solitons, analyse finite-time singularities and check the symmetry theory
//! on explicit group actions.

pub mod blowup;
pub mod curve;
pub mod error;
pub mod flow;
pub mod solitons;
pub mod symmetry;

pub use error::{Error, Result};
