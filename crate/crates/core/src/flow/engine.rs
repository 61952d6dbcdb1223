use num_complex::Complex64;

use super::singularity::{classify_singularity_rate, SingularityReport};
use super::{Boundary, FlowConfig, FlowState, FlowTrajectory, SummaryRow, Termination};
use crate::curve::{chord_derivatives, curvature_and_radial, lagrangian_angle, redistribute_with, CurveDiagnostics, PlanarCurve};
use crate::error::{Error, Result};

/// Per-node normal speed `v = κ − (n−1)⟨γ,N⟩/r²`; the velocity is `v·N`.
pub fn normal_velocity(curve: &PlanarCurve, n: usize, r_floor: f64) -> Result<Vec<f64>> {
    let d = curvature_and_radial(curve)?;
    speeds(&d, n, r_floor)
}

fn speeds(d: &CurveDiagnostics, n: usize, r_floor: f64) -> Result<Vec<f64>> {
    let m = n as f64 - 1.0;
    d.kappa
        .iter()
        .zip(&d.radial)
        .zip(&d.r)
        .map(|((&k, &p), &r)| {
            if r < r_floor {
                Err(Error::SingularRadius { r, floor: r_floor })
            } else {
                Ok(k - m * p / (r * r))
            }
        })
        .collect()
}

fn moves(curve: &PlanarCurve, boundary: Boundary, i: usize) -> bool {
    match boundary {
        Boundary::Closed | Boundary::FreeEnds => true,
        Boundary::PinnedAsymptotes { collar_radius } => {
            i > 0 && i + 1 < curve.len() && curve.nodes()[i].norm() <= collar_radius
        }
    }
}

fn velocity_field(curve: &PlanarCurve, cfg: &FlowConfig) -> Result<Vec<Complex64>> {
    let m = cfg.n as f64 - 1.0;
    let derivs = chord_derivatives(curve)?;
    curve
        .nodes()
        .iter()
        .zip(&derivs)
        .enumerate()
        .map(|(i, (&z, &(d1, d2)))| {
            let r = z.norm();
            if r < cfg.r_floor {
                return Err(Error::SingularRadius { r, floor: cfg.r_floor });
            }
            if !moves(curve, cfg.boundary, i) {
                return Ok(Complex64::new(0.0, 0.0));
            }
            let speed = d1.norm();
            let kappa = (d1.conj() * d2).im / (speed * speed * speed);
            let normal = Complex64::new(-d1.im, d1.re) / speed;
            let radial = z.re * normal.re + z.im * normal.im;
            Ok(normal * (kappa - m * radial / (r * r)))
        })
        .collect()
}

fn advance(curve: &PlanarCurve, vel: &[Complex64], dt: f64) -> Result<PlanarCurve> {
    let nodes = curve.nodes().iter().zip(vel).map(|(&z, &w)| z + w * dt).collect();
    PlanarCurve::new(nodes, curve.topology())
}

/// One midpoint step, clipped so the new time does not exceed `t_stop`.
pub(crate) fn step_until(state: &FlowState, cfg: &FlowConfig, t_stop: f64) -> Result<FlowState> {
    let curve = &state.curve;
    let mut dt = cfg.cfl * curve.min_spacing().powi(2);
    if state.t + dt > t_stop {
        dt = t_stop - state.t;
    }
    if !(dt > 0.0) || state.t + dt == state.t {
        return Err(Error::Numerical(format!("time step underflow at t = {}", state.t)));
    }
    let k1 = velocity_field(curve, cfg)?;
    let half = advance(curve, &k1, 0.5 * dt)?;
    let k2 = velocity_field(&half, cfg)?;
    let mut next = advance(curve, &k2, dt)?;
    let steps = state.steps + 1;
    if steps % cfg.redistribution_period == 0 {
        next = redistribute_with(&next, &cfg.mesh)?;
    }
    let t = if dt == t_stop - state.t { t_stop } else { state.t + dt };
    FlowState::new(next, t, steps, cfg.n, state.theta.theta[0])
}

/// One explicit midpoint step with `dt = cfl·h_min²`, never passing `t_max`.
pub fn step(state: &FlowState, config: &FlowConfig) -> Result<FlowState> {
    step_until(state, config, config.t_max)
}

fn summarize(state: &FlowState, n: usize) -> SummaryRow {
    let d = &state.diagnostics;
    let m = n as f64 - 1.0;
    let (theta_min, theta_max) = state.theta.range();
    let mut h_ratio: f64 = 0.0;
    let mut a_ratio: f64 = 0.0;
    for i in 0..d.kappa.len() {
        let r2 = d.r[i] * d.r[i];
        let p = d.radial[i].abs() / r2;
        let h = d.kappa[i] - m * d.radial[i] / r2;
        let weight = 1.0 + 1.0 / r2;
        h_ratio = h_ratio.max(h * h / weight);
        a_ratio = a_ratio.max((d.kappa[i].powi(2) + 3.0 * m * p * p) / weight);
    }
    SummaryRow {
        step: state.steps,
        t: state.t,
        max_kappa: d.max_abs_kappa().1,
        min_r: d.min_r().1,
        theta_min,
        theta_max,
        h_ratio,
        a_ratio,
        nodes: state.curve.len(),
    }
}

fn trigger(row: &SummaryRow, cfg: &FlowConfig) -> Option<String> {
    if row.min_r < cfg.r_floor {
        Some(format!("min r = {:e} below floor {:e}", row.min_r, cfg.r_floor))
    } else if row.max_kappa > cfg.kappa_ceiling {
        Some(format!("max |κ| = {:e} above ceiling {:e}", row.max_kappa, cfg.kappa_ceiling))
    } else {
        None
    }
}

/// Run the flow from `initial` until `t_max`, a singularity trigger, or a mesh
/// failure. The initial curve is first redistributed to the configured mesh.
pub fn evolve(initial: &PlanarCurve, config: &FlowConfig) -> Result<FlowTrajectory> {
    config.validate()?;
    let start = redistribute_with(initial, &config.mesh)?;
    let anchor = lagrangian_angle(&start, config.n)?.theta[0];
    let mut state = FlowState::new(start, 0.0, 0, config.n, anchor)?;
    let mut snapshots = vec![state.clone()];
    let mut summary = Vec::new();
    let mut last_snap_r = state.diagnostics.min_r().1;
    let termination = loop {
        let row = summarize(&state, config.n);
        summary.push(row);
        if let Some(reason) = trigger(&row, config) {
            break Termination::SingularityTrigger { reason };
        }
        if state.t >= config.t_max {
            break Termination::TMaxReached;
        }
        if state.steps >= config.max_steps {
            break Termination::StepLimit;
        }
        match step(&state, config) {
            Ok(next) => state = next,
            Err(Error::SingularRadius { r, floor }) => {
                break Termination::SingularityTrigger {
                    reason: format!("node at r = {r:e} inside floor {floor:e} during a step"),
                }
            }
            Err(e) => break Termination::MeshFailure { message: e.to_string() },
        }
        let r = state.diagnostics.min_r().1;
        if state.steps % config.snapshot_every == 0 || r < last_snap_r / 1.1 {
            snapshots.push(state.clone());
            last_snap_r = r;
        }
    };
    if snapshots.last().unwrap().t < state.t {
        snapshots.push(state);
    }
    let mut traj = FlowTrajectory {
        config: config.clone(),
        snapshots,
        summary,
        termination,
        singularity: None,
    };
    if traj.is_singular() {
        traj.singularity = Some(classify_singularity_rate(&traj).unwrap_or_else(|_| SingularityReport::inconclusive(&traj)));
    }
    Ok(traj)
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::curve::MeshDensity;
    use crate::solitons::{grim_reaper, sample_special_lagrangian, SamplerConfig, SolitonKind, SolitonSpec};

    fn origin() -> Complex64 {
        Complex64::new(0.0, 0.0)
    }

    fn circle_config(n: usize, count: usize) -> FlowConfig {
        let mesh = MeshDensity::RadiusScaled { ratio: 2.0 * PI / count as f64, max_spacing: 10.0 };
        FlowConfig::new(n, Boundary::Closed, mesh, 1e-3, 1.0)
    }

    #[test]
    fn circle_speed_is_n_over_r() {
        for n in 1..4 {
            let c = PlanarCurve::circle(origin(), 1.0, 128, 0.0).unwrap();
            let v = normal_velocity(&c, n, 1e-6).unwrap();
            // The stencil gives κ = 1/cos²(δ/2) on an inscribed polygon; ⟨γ,N⟩ = −1.
            let kappa = 1.0 / (PI / 128.0).cos().powi(2);
            for vi in v {
                assert!((vi - (kappa + (n as f64 - 1.0))).abs() < 1e-9, "{vi}");
            }
        }
    }

    #[test]
    fn rays_are_static() {
        let nodes: Vec<_> = (1..20).map(|j| Complex64::from_polar(j as f64, 0.3)).collect();
        let ray = PlanarCurve::open(nodes).unwrap();
        for v in normal_velocity(&ray, 3, 1e-6).unwrap() {
            assert!(v.abs() < 1e-12);
        }
    }

    #[test]
    fn special_lagrangian_speed_is_second_order() {
        let spec = SolitonSpec::new(3, SolitonKind::SpecialLagrangian { b: 1.0, k: 0, theta_bar: 0.0 }).unwrap();
        let worst = |h: f64| {
            let c = sample_special_lagrangian(&spec, (-0.4, 0.4), h, &SamplerConfig::default()).unwrap();
            let v = normal_velocity(&c, 3, 1e-6).unwrap();
            v[1..v.len() - 1].iter().fold(0.0f64, |a, b| a.max(b.abs()))
        };
        let (coarse, fine) = (worst(0.02), worst(0.01));
        assert!(fine < 1e-3);
        assert!(coarse / fine > 3.0, "ratio {}", coarse / fine);
    }

    #[test]
    fn floor_violation_is_reported() {
        let c = PlanarCurve::circle(origin(), 0.01, 32, 0.0).unwrap();
        assert!(matches!(normal_velocity(&c, 2, 0.1), Err(Error::SingularRadius { .. })));
    }

    #[test]
    fn circle_radius_follows_ode() {
        let n = 2;
        let cfg = circle_config(n, 128);
        let c = PlanarCurve::circle(origin(), 1.0, 128, 0.0).unwrap();
        let mut state = FlowState::new(c, 0.0, 0, n, 0.0).unwrap();
        for _ in 0..300 {
            state = step(&state, &cfg).unwrap();
        }
        let exact = (1.0 - 2.0 * n as f64 * state.t).sqrt();
        let mean_r = state.diagnostics.r.iter().sum::<f64>() / state.diagnostics.r.len() as f64;
        assert!((mean_r - exact).abs() < 2e-3 * exact, "{mean_r} vs {exact}");
        assert!(state.t > 0.01);
    }

    #[test]
    fn grim_reaper_translates_down() {
        let c = grim_reaper((-1.3, 1.3), 0.02).unwrap();
        let mut cfg = FlowConfig::new(1, Boundary::FreeEnds, MeshDensity::Uniform { spacing: 0.02 }, 1e-9, 0.05);
        cfg.redistribution_period = 5;
        let traj = evolve(&c, &cfg).unwrap();
        assert_eq!(traj.termination, Termination::TMaxReached);
        let end = traj.final_state();
        let z = end.curve.nodes();
        let mid = z.windows(2).find(|w| w[0].re <= 0.0 && w[1].re > 0.0).unwrap();
        let y = mid[0].im + (mid[1].im - mid[0].im) * (-mid[0].re) / (mid[1].re - mid[0].re);
        assert!((y + end.t).abs() < 1e-3, "y = {y}, t = {}", end.t);
    }

    #[test]
    fn circle_extinction_time() {
        let c = PlanarCurve::circle(origin(), 1.0, 64, 0.0).unwrap();
        let traj = evolve(&c, &circle_config(2, 64)).unwrap();
        assert!(traj.is_singular());
        let rep = traj.singularity.unwrap();
        assert!((rep.t_est - 0.25).abs() < 2.5e-3, "{}", rep.t_est);
        assert_eq!(rep.type_evidence, super::super::TypeEvidence::TypeI);
        assert!(rep.trend_confirmed);
        let loc = rep.location.unwrap();
        assert!(loc[0].hypot(loc[1]) < 2e-3);
    }

    #[test]
    fn times_increase_and_summary_is_dense() {
        let c = PlanarCurve::circle(origin(), 1.0, 32, 0.0).unwrap();
        let mut cfg = circle_config(2, 32);
        cfg.snapshot_every = 7;
        let traj = evolve(&c, &cfg).unwrap();
        assert!(traj.snapshots.windows(2).all(|w| w[0].t < w[1].t));
        assert!(traj.summary.windows(2).all(|w| w[1].step == w[0].step + 1 && w[0].t < w[1].t));
    }

    #[test]
    fn state_at_replays_the_run() {
        let c = PlanarCurve::circle(origin(), 1.0, 32, 0.0).unwrap();
        let mut cfg = circle_config(2, 32);
        cfg.t_max = 0.1;
        cfg.snapshot_every = 50;
        let traj = evolve(&c, &cfg).unwrap();
        let snap = &traj.snapshots[2];
        let replay = traj.state_at(snap.t).unwrap();
        assert_eq!(replay.curve, snap.curve);
        let mid = 0.5 * (traj.snapshots[1].t + traj.snapshots[2].t);
        let s = traj.state_at(mid).unwrap();
        assert_eq!(s.t, mid);
        let exact = (1.0 - 4.0 * mid).sqrt();
        assert!((s.diagnostics.r[0] - exact).abs() < 1e-2);
        assert!(traj.state_at(0.2).is_err());
        assert!(traj.state_at(-0.1).is_err());
    }

    #[test]
    fn invalid_config_is_rejected() {
        let c = PlanarCurve::circle(origin(), 1.0, 32, 0.0).unwrap();
        let mut cfg = circle_config(2, 32);
        cfg.cfl = 0.7;
        assert!(matches!(evolve(&c, &cfg), Err(Error::Domain(_))));
        let mut cfg = circle_config(2, 32);
        cfg.r_floor = 0.0;
        assert!(evolve(&c, &cfg).is_err());
    }
}
