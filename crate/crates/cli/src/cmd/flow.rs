use std::f64::consts::PI;

use lmcf_core::curve::{MeshDensity, PlanarCurve, Topology};
use lmcf_core::flow::{
    evolve, monitor_estimates, neves_initial, Boundary, FlowConfig, FlowTrajectory, MonitorReport, SingularityReport,
    Termination,
};
use lmcf_core::solitons::grim_reaper;
use num_complex::Complex64;
use serde::Serialize;

use super::{soliton, Context};
use crate::config::{ensure_dir, FlowParams, InitialChoice};
use crate::error::{io_error, validation, CliError, CliResult};
use crate::output::{curve_hash, read_curve, write_curve, write_report, write_table};
use crate::svg::{write_figure, Panel};

/// Growth factor past which the curvature monitor flags a run.
const MONITOR_GROWTH: f64 = 10.0;

/// A fully resolved run: the initial curve and the integrator settings.
pub struct FlowSetup {
    pub label: String,
    pub curve: PlanarCurve,
    pub config: FlowConfig,
}

fn soliton_boundary(curve: &PlanarCurve, n: usize) -> Boundary {
    if curve.is_closed() {
        Boundary::Closed
    } else if n == 1 {
        Boundary::FreeEnds
    } else {
        let r_max = curve.nodes().iter().map(|z| z.norm()).fold(0.0, f64::max);
        Boundary::PinnedAsymptotes { collar_radius: 0.5 * r_max }
    }
}

/// Resolves defaults for the chosen initial curve, then applies overrides.
pub fn setup(ctx: &Context, p: &FlowParams) -> CliResult<FlowSetup> {
    let initial = p.initial.ok_or_else(|| validation("flow needs an initial curve"))?;
    let (label, curve, mut config) = match initial {
        InitialChoice::Circle => {
            let n = p.n.unwrap_or(2);
            let radius = p.radius.unwrap_or(1.0);
            let nodes = p.nodes.unwrap_or(128);
            if !(radius > 0.0) {
                return Err(validation(format!("radius {radius} must be positive")));
            }
            let curve = PlanarCurve::circle(Complex64::new(0.0, 0.0), radius, nodes, 0.0)?;
            let mesh = MeshDensity::RadiusScaled { ratio: 2.0 * PI / nodes as f64, max_spacing: 10.0 * radius };
            let t_ext = radius * radius / (2.0 * n as f64);
            let cfg = FlowConfig::new(n, Boundary::Closed, mesh, 1e-3 * radius, 4.0 * t_ext);
            (format!("circle r = {radius}"), curve, cfg)
        }
        InitialChoice::Neves => {
            let n = p.n.unwrap_or(2);
            let beta = p.beta.unwrap_or(0.6 * PI);
            let r_max = p.r_max.unwrap_or(100.0);
            let curve = neves_initial(beta, n, p.samples.unwrap_or(200), r_max)?;
            let mesh = MeshDensity::RadiusScaled { ratio: 0.1, max_spacing: 2.0 };
            let mut cfg = FlowConfig::new(n, Boundary::PinnedAsymptotes { collar_radius: 0.5 * r_max }, mesh, 2e-5, 5.0);
            cfg.kappa_ceiling = 1e6;
            (format!("barrier beta = {:.4}pi", beta / PI), curve, cfg)
        }
        InitialChoice::GrimReaper => {
            let n = p.n.unwrap_or(1);
            if n != 1 {
                return Err(validation(format!("the grim reaper translates only for n = 1, got n = {n}")));
            }
            let spacing = p.spacing.unwrap_or(0.02);
            let curve = grim_reaper((-1.5, 1.5), spacing)?;
            let mut cfg = FlowConfig::new(1, Boundary::FreeEnds, MeshDensity::Uniform { spacing }, 1e-9, 0.5);
            cfg.redistribution_period = 5;
            ("grim reaper".to_string(), curve, cfg)
        }
        InitialChoice::Soliton => {
            let mut sp = p.soliton.clone().ok_or_else(|| validation("initial = soliton needs a [flow.soliton] table"))?;
            if sp.n.is_none() {
                sp.n = p.n;
            }
            if sp.spacing.is_none() {
                sp.spacing = Some(0.05);
            }
            let built = soliton::build(&sp)?;
            let n = built.spec.n;
            if p.n.is_some_and(|m| m != n) {
                return Err(validation(format!("flow n = {} differs from soliton n = {n}", p.n.unwrap())));
            }
            let boundary = soliton_boundary(&built.curve, n);
            let spacing = sp.spacing.unwrap_or(0.05);
            // Closed solitons shrink to a point; the mesh has to shrink with them.
            let mesh = if built.curve.is_closed() {
                MeshDensity::RadiusScaled { ratio: 0.1, max_spacing: spacing }
            } else {
                MeshDensity::Uniform { spacing }
            };
            let cfg = FlowConfig::new(n, boundary, mesh, 1e-4, 0.1);
            (format!("{:?}", built.spec.kind), built.curve, cfg)
        }
        InitialChoice::File => {
            let path = p.path.as_ref().ok_or_else(|| validation("initial = file needs a path"))?;
            let closed = p.closed.unwrap_or(false);
            let topology = if closed { Topology::ClosedLoop } else { Topology::OpenArc };
            let curve = read_curve(&ctx.input(path), topology)?;
            let n = p.n.unwrap_or(2);
            let spacing = curve.segment_lengths().iter().sum::<f64>() / curve.segment_count() as f64;
            let boundary = soliton_boundary(&curve, n);
            let cfg = FlowConfig::new(n, boundary, MeshDensity::Uniform { spacing }, 1e-4, 1.0);
            (path.display().to_string(), curve, cfg)
        }
    };
    if let Some(m) = p.mesh {
        config.mesh = m;
    } else if let Some(spacing) = p.spacing {
        config.mesh = MeshDensity::Uniform { spacing };
    }
    if let Some(b) = p.boundary {
        config.boundary = b;
    }
    config.t_max = p.t_max.unwrap_or(config.t_max);
    config.r_floor = p.r_floor.unwrap_or(config.r_floor);
    config.cfl = p.cfl.unwrap_or(config.cfl);
    config.kappa_ceiling = p.kappa_ceiling.unwrap_or(config.kappa_ceiling);
    config.redistribution_period = p.redistribution_period.unwrap_or(config.redistribution_period);
    config.snapshot_every = p.snapshot_every.unwrap_or(config.snapshot_every);
    config.max_steps = p.max_steps.unwrap_or(config.max_steps);
    config.validate()?;
    Ok(FlowSetup { label, curve, config })
}

/// Indices of at most `count` snapshots, evenly spread, first and last kept.
pub fn pick_snapshots(total: usize, count: usize) -> Vec<usize> {
    if total <= count {
        return (0..total).collect();
    }
    let count = count.max(2);
    let mut out: Vec<usize> = (0..count).map(|j| j * (total - 1) / (count - 1)).collect();
    out.dedup();
    out
}

#[derive(Serialize)]
struct SnapshotRecord {
    file: String,
    t: f64,
    steps: usize,
    nodes: usize,
    min_r: f64,
}

#[derive(Serialize)]
struct FlowReport<'a> {
    command: &'static str,
    seed: u64,
    initial: &'a str,
    config: &'a FlowConfig,
    termination: &'a Termination,
    end_time: f64,
    steps: usize,
    final_min_r: f64,
    final_max_kappa: f64,
    singularity: Option<&'a SingularityReport>,
    monitor: MonitorReport,
    snapshots: Vec<SnapshotRecord>,
    figure_hash: String,
}

pub fn run(ctx: &Context, params: &FlowParams) -> CliResult<()> {
    let setup = setup(ctx, params)?;
    ctx.log(format!("flow from {} with n = {}", setup.label, setup.config.n));
    let traj = evolve(&setup.curve, &setup.config)?;
    ctx.log(format!("stopped at t = {} ({:?})", traj.end_time(), traj.termination));
    write_outputs(ctx, params, &setup.label, &traj)?;
    if let Termination::MeshFailure { message } = &traj.termination {
        return Err(CliError::Numerical(format!("mesh failure at t = {}: {message}", traj.end_time())));
    }
    Ok(())
}

fn write_outputs(ctx: &Context, params: &FlowParams, label: &str, traj: &FlowTrajectory) -> CliResult<()> {
    ensure_dir(&ctx.out)?;
    let path = ctx.file("trajectory.json");
    let text = serde_json::to_string(traj).map_err(|e| io_error(&path, e))?;
    std::fs::write(&path, text).map_err(|e| io_error(&path, e))?;
    write_table(&ctx.file("summary.csv"), &traj.summary)?;

    let snap_dir = ctx.file("snapshots");
    ensure_dir(&snap_dir)?;
    let n = traj.config.n;
    let picked = pick_snapshots(traj.snapshots.len(), params.snapshot_files.unwrap_or(20));
    let mut records = Vec::with_capacity(picked.len());
    for (j, &i) in picked.iter().enumerate() {
        let s = &traj.snapshots[i];
        let file = format!("snapshots/snap_{j:03}.csv");
        write_curve(&ctx.file(&file), &s.curve, n)?;
        records.push(SnapshotRecord { file, t: s.t, steps: s.steps, nodes: s.curve.len(), min_r: s.curve.min_radius().1 });
    }
    let curves: Vec<&PlanarCurve> = picked.iter().map(|&i| &traj.snapshots[i].curve).collect();
    if params.figure.unwrap_or(true) {
        let first = &traj.snapshots[0].curve;
        let last = &traj.final_state().curve;
        let extent = if first.is_closed() { None } else { Some(3.0) };
        let mut overview = Panel::new(format!("{label}, n = {n}"), curves.iter().map(|c| (*c).clone()).collect());
        overview.extent = extent;
        let end = Panel::new(format!("t = {:.6}", traj.end_time()), vec![last.clone()]);
        write_figure(&ctx.file("flow.svg"), &[overview, end], 2)?;
    }
    let last = traj.final_state();
    write_report(
        &ctx.out,
        &FlowReport {
            command: "flow",
            seed: ctx.seed,
            initial: label,
            config: &traj.config,
            termination: &traj.termination,
            end_time: traj.end_time(),
            steps: last.steps,
            final_min_r: last.diagnostics.min_r().1,
            final_max_kappa: last.diagnostics.max_abs_kappa().1,
            singularity: traj.singularity.as_ref(),
            monitor: monitor_estimates(traj, MONITOR_GROWTH),
            snapshots: records,
            figure_hash: curve_hash(curves),
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn snapshot_picks() {
        assert_eq!(pick_snapshots(3, 20), vec![0, 1, 2]);
        let p = pick_snapshots(101, 5);
        assert_eq!(p, vec![0, 25, 50, 75, 100]);
        assert_eq!(pick_snapshots(50, 1), vec![0, 49]);
    }
}
