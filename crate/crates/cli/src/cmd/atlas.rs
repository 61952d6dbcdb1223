use lmcf_core::curve::{curvature_maxima_count, winding_number, MaximaCount, PlanarCurve};
use lmcf_core::solitons::{shrinker_atlas, ShrinkerSolution};
use num_complex::Complex64;
use serde::Serialize;

use super::Context;
use crate::config::{ensure_dir, AtlasParams};
use crate::error::{validation, CliResult};
use crate::output::{curve_hash, write_curve, write_report};
use crate::svg::{write_figure, Panel};

/// Pairs drawn next to the round circle in the gallery for `n = 2`.
const GALLERY: [(u32, u32); 3] = [(1, 3), (6, 13), (5, 13)];

#[derive(Serialize)]
struct AtlasRecord {
    p: u32,
    q: u32,
    ratio: f64,
    found: bool,
    error: Option<String>,
    r_apsis: Option<f64>,
    period_angle: Option<f64>,
    closure_gap: Option<f64>,
    winding: Option<i64>,
    maxima: Option<MaximaCount>,
    curve_file: Option<String>,
}

#[derive(Serialize)]
struct AtlasReport {
    command: &'static str,
    seed: u64,
    n: usize,
    q_max: u32,
    pairs: usize,
    found: usize,
    records: Vec<AtlasRecord>,
    figure_hash: String,
}

fn record(ctx: &Context, n: usize, (p, q): (u32, u32), sol: &lmcf_core::Result<ShrinkerSolution>) -> CliResult<AtlasRecord> {
    let mut rec = AtlasRecord {
        p,
        q,
        ratio: p as f64 / q as f64,
        found: false,
        error: None,
        r_apsis: None,
        period_angle: None,
        closure_gap: None,
        winding: None,
        maxima: None,
        curve_file: None,
    };
    match sol {
        Ok(s) => {
            let file = format!("curves/shrinker_{p}_{q}.csv");
            write_curve(&ctx.file(&file), &s.curve, n)?;
            rec.found = true;
            rec.r_apsis = Some(s.r_apsis);
            rec.period_angle = Some(s.period_angle);
            rec.closure_gap = Some(s.closure_gap);
            rec.winding = winding_number(&s.curve).ok();
            rec.maxima = curvature_maxima_count(&s.curve).ok();
            rec.curve_file = Some(file);
        }
        Err(e) => rec.error = Some(e.to_string()),
    }
    Ok(rec)
}

pub fn run(ctx: &Context, params: &AtlasParams) -> CliResult<()> {
    let n = params.n.unwrap_or(2);
    let q_max = params.q_max.unwrap_or(13);
    if n == 0 {
        return Err(validation("n must be at least 1"));
    }
    ctx.log(format!("shrinker atlas for n = {n}, q ≤ {q_max}"));
    let results = shrinker_atlas(n, q_max);
    ensure_dir(&ctx.file("curves"))?;
    let records = results
        .iter()
        .map(|(pq, sol)| record(ctx, n, *pq, sol))
        .collect::<CliResult<Vec<_>>>()?;
    let found: Vec<(&(u32, u32), &PlanarCurve)> = results
        .iter()
        .filter_map(|(pq, sol)| sol.as_ref().ok().map(|s| (pq, &s.curve)))
        .collect();
    let hash = curve_hash(found.iter().map(|(_, c)| *c));
    if params.figure.unwrap_or(true) {
        let circle = PlanarCurve::circle(Complex64::new(0.0, 0.0), (n as f64).sqrt(), 256, 0.0)?;
        let extent = found
            .iter()
            .flat_map(|(_, c)| c.nodes().iter().map(|z| z.norm()))
            .fold((n as f64).sqrt(), f64::max)
            * 1.05;
        if n == 2 {
            let mut panels = vec![Panel::new("circle r = √2", vec![circle.clone()]).with_extent(extent)];
            for pq in GALLERY {
                if let Some((_, c)) = found.iter().find(|(x, _)| **x == pq) {
                    panels.push(Panel::new(format!("({}, {})", pq.0, pq.1), vec![(*c).clone()]).with_extent(extent));
                }
            }
            write_figure(&ctx.file("gallery.svg"), &panels, panels.len())?;
        }
        let panels: Vec<Panel> = found
            .iter()
            .map(|(pq, c)| Panel::new(format!("({}, {})", pq.0, pq.1), vec![(*c).clone()]).with_extent(extent))
            .collect();
        if !panels.is_empty() {
            write_figure(&ctx.file("atlas.svg"), &panels, 5)?;
        }
    }
    write_report(
        &ctx.out,
        &AtlasReport {
            command: "atlas",
            seed: ctx.seed,
            n,
            q_max,
            pairs: records.len(),
            found: found.len(),
            records,
            figure_hash: hash,
        },
    )
}
