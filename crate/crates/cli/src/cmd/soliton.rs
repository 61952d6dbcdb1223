use std::f64::consts::PI;

use lmcf_core::curve::{
    angle_distance_mod, curvature_maxima_count, lagrangian_angle, winding_number, MaximaCount, PlanarCurve,
};
use lmcf_core::solitons::{
    find_expander, find_shrinker, grim_reaper, sample_cone, sample_special_lagrangian, soliton_residual,
    translator_residual, SamplerConfig, SolitonKind, SolitonSpec,
};
use num_complex::Complex64;
use serde::Serialize;

use super::Context;
use crate::config::{ensure_dir, SolitonChoice, SolitonParams};
use crate::error::{validation, CliResult};
use crate::output::{curve_hash, write_curve, write_report};
use crate::svg::{write_figure, Panel};

#[derive(Debug, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SolitonDetails {
    Cone {
        /// Largest distance of θ from `nα` modulo π.
        angle_deviation: f64,
    },
    SpecialLagrangian {
        /// Largest distance of θ from θ̄ modulo π.
        angle_deviation: f64,
    },
    Shrinker {
        r_apsis: f64,
        period_angle: f64,
        closure_gap: f64,
        direction_gap: f64,
        winding: i64,
        maxima: MaximaCount,
    },
    Expander {
        apsis_distance: f64,
        measured_span: f64,
        span_error: f64,
    },
    GrimReaper {
        /// Mismatch with translation at velocity (0, −1).
        translator_residual: f64,
    },
}

pub struct BuiltSoliton {
    pub spec: SolitonSpec,
    pub curve: PlanarCurve,
    pub details: SolitonDetails,
}

fn angle_deviation(curve: &PlanarCurve, n: usize, target: f64) -> CliResult<f64> {
    let theta = lagrangian_angle(curve, n)?.theta;
    Ok(theta.iter().map(|&t| angle_distance_mod(t, target, PI)).fold(0.0, f64::max))
}

pub fn build(params: &SolitonParams) -> CliResult<BuiltSoliton> {
    let kind = params.kind.ok_or_else(|| validation("soliton kind is required"))?;
    let default_n = if kind == SolitonChoice::GrimReaper { 1 } else { 2 };
    let n = params.n.unwrap_or(default_n);
    let spacing = params.spacing.unwrap_or(0.01);
    let sampler = SamplerConfig { r_max: params.r_max.unwrap_or(10.0) };
    let theta_bar = params.theta.unwrap_or(0.0);
    let k = params.k.unwrap_or(0);
    match kind {
        SolitonChoice::Cone => {
            let spec = SolitonSpec::new(n, SolitonKind::Cone { k, theta_bar })?;
            let curve = sample_cone(&spec, (params.r_min.unwrap_or(0.1), sampler.r_max), spacing)?;
            let angle_deviation = angle_deviation(&curve, n, theta_bar)?;
            Ok(BuiltSoliton { spec, curve, details: SolitonDetails::Cone { angle_deviation } })
        }
        SolitonChoice::SpecialLagrangian => {
            let b = params.b.unwrap_or(1.0);
            let spec = SolitonSpec::new(n, SolitonKind::SpecialLagrangian { b, k, theta_bar })?;
            let edge = PI / (2.0 * n as f64) * (1.0 - 1e-9);
            let curve = sample_special_lagrangian(&spec, (-edge, edge), spacing, &sampler)?;
            let angle_deviation = angle_deviation(&curve, n, theta_bar)?;
            Ok(BuiltSoliton { spec, curve, details: SolitonDetails::SpecialLagrangian { angle_deviation } })
        }
        SolitonChoice::Shrinker => {
            let (p, q) = match (params.p, params.q) {
                (Some(p), Some(q)) => (p, q),
                _ => return Err(validation("shrinker needs p and q")),
            };
            let sol = find_shrinker(p, q, n)?;
            let details = SolitonDetails::Shrinker {
                r_apsis: sol.r_apsis,
                period_angle: sol.period_angle,
                closure_gap: sol.closure_gap,
                direction_gap: sol.direction_gap,
                winding: winding_number(&sol.curve)?,
                maxima: curvature_maxima_count(&sol.curve)?,
            };
            Ok(BuiltSoliton { spec: sol.spec, curve: sol.curve, details })
        }
        SolitonChoice::Expander => {
            let alpha = params.alpha.ok_or_else(|| validation("expander needs alpha"))?;
            let sol = find_expander(alpha, n)?;
            let details = SolitonDetails::Expander {
                apsis_distance: sol.apsis_distance,
                measured_span: sol.measured_span,
                span_error: (sol.measured_span - alpha).abs(),
            };
            Ok(BuiltSoliton { spec: sol.spec, curve: sol.curve, details })
        }
        SolitonChoice::GrimReaper => {
            if n != 1 {
                return Err(validation(format!("the grim reaper translates only for n = 1, got n = {n}")));
            }
            let spec = SolitonSpec::new(1, SolitonKind::GrimReaper)?;
            let x = params.x_max.unwrap_or(1.4);
            let curve = grim_reaper((-x, x), spacing)?;
            let translator_residual = translator_residual(&curve, 1, Complex64::new(0.0, -1.0))?;
            Ok(BuiltSoliton { spec, curve, details: SolitonDetails::GrimReaper { translator_residual } })
        }
    }
}

#[derive(Serialize)]
struct SolitonReport<'a> {
    command: &'static str,
    seed: u64,
    spec: &'a SolitonSpec,
    nodes: usize,
    closed: bool,
    length: f64,
    /// Largest interior mismatch of the soliton equation (static residual for λ = 0).
    residual: f64,
    details: &'a SolitonDetails,
    curve_file: &'static str,
    figure_hash: String,
}

pub fn run(ctx: &Context, params: &SolitonParams) -> CliResult<()> {
    let built = build(params)?;
    ensure_dir(&ctx.out)?;
    let n = built.spec.n;
    let residual = soliton_residual(&built.curve, built.spec.lambda(), n)?;
    ctx.log(format!("{} nodes, residual {residual:e}", built.curve.len()));
    write_curve(&ctx.file("curve.csv"), &built.curve, n)?;
    if params.figure.unwrap_or(true) {
        let title = format!("{:?}, n = {n}", built.spec.kind);
        write_figure(&ctx.file("soliton.svg"), &[Panel::new(title, vec![built.curve.clone()])], 1)?;
    }
    write_report(
        &ctx.out,
        &SolitonReport {
            command: "soliton",
            seed: ctx.seed,
            spec: &built.spec,
            nodes: built.curve.len(),
            closed: built.curve.is_closed(),
            length: built.curve.length(),
            residual,
            details: &built.details,
            curve_file: "curve.csv",
            figure_hash: curve_hash([&built.curve]),
        },
    )
}
