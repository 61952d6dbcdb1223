use std::path::PathBuf;

use lmcf_core::blowup::{analyze_blowup, BlowupAnalysis, BlowupPlan};
use lmcf_core::flow::FlowTrajectory;
use serde::Serialize;

use super::Context;
use crate::config::{ensure_dir, BlowupParams};
use crate::error::{validation, CliResult};
use crate::output::{curve_hash, write_curve, write_report};
use crate::svg::{write_figure, Panel};

pub fn load_trajectory(ctx: &Context, params: &BlowupParams) -> CliResult<FlowTrajectory> {
    let dir = params.trajectory.as_ref().ok_or_else(|| validation("blowup needs --trajectory DIR"))?;
    let dir = ctx.input(dir);
    let path: PathBuf = if dir.is_dir() { dir.join("trajectory.json") } else { dir };
    let text = std::fs::read_to_string(&path).map_err(|e| validation(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| validation(format!("{}: {e}", path.display())))
}

#[derive(Serialize)]
struct BlowupDocument<'a> {
    command: &'static str,
    seed: u64,
    n: usize,
    plan: &'a BlowupPlan,
    analysis: &'a BlowupAnalysis,
    type1_files: Vec<String>,
    type2_file: &'static str,
    figure_hash: String,
}

pub fn run(ctx: &Context, params: &BlowupParams) -> CliResult<()> {
    let traj = load_trajectory(ctx, params)?;
    let plan = params.plan()?;
    let analysis = analyze_blowup(&traj, &plan)?;
    ctx.log(format!("T = {}, consistency {}", analysis.t_est, analysis.consistency));
    ensure_dir(&ctx.out)?;
    let n = traj.config.n;
    let mut type1_files = vec![];
    for (j, fit) in analysis.type1.iter().enumerate() {
        let file = format!("type1_{j}.csv");
        write_curve(&ctx.file(&file), &fit.curve, n)?;
        type1_files.push(file);
    }
    write_curve(&ctx.file("type2.csv"), &analysis.type2.curve, n)?;
    if params.figure.unwrap_or(true) {
        let extent = 1.2 * plan.annulus.1;
        let mut panels: Vec<Panel> = analysis
            .type1
            .iter()
            .map(|f| Panel::new(format!("type I, scale {}", f.scale), vec![f.curve.clone()]).with_extent(extent))
            .collect();
        panels.push(Panel::new("type II", vec![analysis.type2.curve.clone()]).with_extent(4.0));
        write_figure(&ctx.file("blowup.svg"), &panels, panels.len())?;
    }
    let hash = curve_hash(analysis.type1.iter().map(|f| &f.curve).chain([&analysis.type2.curve]));
    write_report(
        &ctx.out,
        &BlowupDocument {
            command: "blowup",
            seed: ctx.seed,
            n,
            plan: &plan,
            analysis: &analysis,
            type1_files,
            type2_file: "type2.csv",
            figure_hash: hash,
        },
    )
}
