//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

use std::collections::BTreeSet;
use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::time::Instant;

use lmcf_core::blowup::{analyze_blowup, BlowupAnalysis, BlowupPlan};
use lmcf_core::curve::{
    angle_distance_mod, curvature_maxima_count, lagrangian_angle, winding_number, MaximaCount, MeshDensity,
    PlanarCurve,
};
use lmcf_core::flow::{
    avoidance_check, evolve, monitor_estimates, neves_initial, normal_velocity, Boundary, FlowConfig, FlowTrajectory,
    SummaryRow, Termination,
};
use lmcf_core::solitons::{
    admissible_pairs, find_expander, find_shrinker, grim_reaper, sample_cone, sample_special_lagrangian,
    shrinker_atlas, SamplerConfig, SolitonKind, SolitonSpec,
};
use lmcf_core::symmetry::{
    ambient_angle_check, cyclic_symmetry_order, equivariance_residual, moment, preset_catalog, CVector, GroupAction,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn origin() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

fn sl_spec(n: usize, b: f64) -> SolitonSpec {
    SolitonSpec::new(n, SolitonKind::SpecialLagrangian { b, k: 0, theta_bar: 0.0 }).unwrap()
}

/// `l̃` on 90% of its α range with exactly `count` nodes.
fn sl_with_nodes(n: usize, b: f64, count: usize) -> PlanarCurve {
    let spec = sl_spec(n, b);
    let edge = 0.9 * PI / (2.0 * n as f64);
    let cfg = SamplerConfig::default();
    let probe = sample_special_lagrangian(&spec, (-edge, edge), 1e-3 * b, &cfg).unwrap();
    let spacing = probe.length() / (count as f64 - 1.0);
    let mut curve = sample_special_lagrangian(&spec, (-edge, edge), spacing, &cfg).unwrap();
    let mut s = spacing;
    while curve.len() != count {
        s *= curve.len() as f64 / count as f64;
        curve = sample_special_lagrangian(&spec, (-edge, edge), s, &cfg).unwrap();
    }
    curve
}

fn interior_velocity(curve: &PlanarCurve, n: usize) -> f64 {
    let v = normal_velocity(curve, n, 1e-9).unwrap();
    v[1..v.len() - 1].iter().fold(0.0, |a, x| a.max(x.abs()))
}

fn criterion_1() -> Outcome {
    let mut worst_fine = 0.0f64;
    let mut orders = vec![];
    for n in [2, 3, 4] {
        for b in [0.5, 1.0, 2.0] {
            let v: Vec<f64> = [500, 1000, 2000].iter().map(|&m| interior_velocity(&sl_with_nodes(n, b, m), n)).collect();
            worst_fine = worst_fine.max(v[2]);
            orders.push((v[0] / v[1]).log2());
            orders.push((v[1] / v[2]).log2());
        }
    }
    let lo = orders.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = orders.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    outcome(
        worst_fine <= 1e-3 && lo >= 1.8 && hi <= 2.2,
        format!("max velocity {worst_fine:.2e} at 2000 nodes, observed order in [{lo:.3}, {hi:.3}]"),
    )
}

fn criterion_2() -> Outcome {
    let mut sl_worst = 0.0f64;
    for n in [2, 3, 4] {
        for (b, theta_bar) in [(0.5, 0.0), (1.0, 0.7), (2.0, 2.0)] {
            let spec = SolitonSpec::new(n, SolitonKind::SpecialLagrangian { b, k: 1, theta_bar }).unwrap();
            let edge = 0.9 * PI / (2.0 * n as f64);
            let probe = sample_special_lagrangian(&spec, (-edge, edge), 1e-3, &SamplerConfig::default()).unwrap();
            let curve =
                sample_special_lagrangian(&spec, (-edge, edge), probe.length() / 1999.0, &SamplerConfig::default()).unwrap();
            let theta = lagrangian_angle(&curve, n).unwrap().theta;
            sl_worst = theta.iter().map(|&t| angle_distance_mod(t, theta_bar, PI)).fold(sl_worst, f64::max);
        }
    }
    let mut cone_worst = 0.0f64;
    for n in [1, 2, 3, 4] {
        for (k, theta_bar) in [(0, 0.0), (1, 0.4), (3, 2.9)] {
            let spec = SolitonSpec::new(n, SolitonKind::Cone { k, theta_bar }).unwrap();
            let curve = sample_cone(&spec, (0.1, 10.0), 0.005).unwrap();
            let alpha = (theta_bar + k as f64 * PI) / n as f64;
            let theta = lagrangian_angle(&curve, n).unwrap().theta;
            cone_worst = theta.iter().map(|&t| angle_distance_mod(t, n as f64 * alpha, PI)).fold(cone_worst, f64::max);
        }
    }
    outcome(
        sl_worst <= 1e-4 && cone_worst <= 1e-10,
        format!("special Lagrangian deviation {sl_worst:.2e}, cone deviation {cone_worst:.2e}"),
    )
}

fn circle_config(n: usize, count: usize) -> FlowConfig {
    let mesh = MeshDensity::RadiusScaled { ratio: TAU / count as f64, max_spacing: 10.0 };
    FlowConfig::new(n, Boundary::Closed, mesh, 1e-3, 1.0)
}

fn circle_run(count: usize) -> FlowTrajectory {
    let c = PlanarCurve::circle(origin(), 1.0, count, 0.0).unwrap();
    evolve(&c, &circle_config(2, count)).unwrap()
}

/// Mean radius at `t` against `√(1 − 2nt)`.
fn circle_radius_error(traj: &FlowTrajectory, t: f64) -> f64 {
    let state = traj.state_at(t).unwrap();
    let mean = state.diagnostics.r.iter().sum::<f64>() / state.diagnostics.r.len() as f64;
    (mean - (1.0 - 4.0 * state.t).sqrt()).abs()
}

fn criterion_3(circle: &FlowTrajectory) -> Outcome {
    let t_est = circle.singularity.as_ref().map_or(f64::NAN, |s| s.t_est);
    let rel = (t_est - 0.25).abs() / 0.25;
    let errs: Vec<f64> = [32, 64, 128].iter().map(|&m| circle_radius_error(&circle_run(m), 0.2)).collect();
    let orders = [(errs[0] / errs[1]).log2(), (errs[1] / errs[2]).log2()];
    let ok_order = orders.iter().all(|o| (1.8..=2.2).contains(o));
    outcome(
        rel <= 0.01 && ok_order,
        format!(
            "T = {t_est:.6} (rel. error {rel:.2e}); radius errors at t = 0.2 {:.2e}, {:.2e}, {:.2e}, orders {:.3}, {:.3}",
            errs[0], errs[1], errs[2], orders[0], orders[1]
        ),
    )
}

fn criterion_4() -> Outcome {
    let mut notes = vec![];
    let mut pass = true;
    for (p, q) in [(1, 3), (6, 13), (5, 13)] {
        match find_shrinker(p, q, 2) {
            Ok(s) => {
                let w = winding_number(&s.curve).unwrap();
                let m = curvature_maxima_count(&s.curve).unwrap();
                let ok = w == p as i64 && m == MaximaCount::Count(q as usize) && s.closure_gap <= 1e-6;
                pass &= ok;
                notes.push(format!("({p},{q}) winding {w} maxima {m:?} gap {:.1e}", s.closure_gap));
            }
            Err(e) => {
                pass = false;
                notes.push(format!("({p},{q}) {e}"));
            }
        }
    }
    let atlas = shrinker_atlas(2, 13);
    let got: BTreeSet<(u32, u32)> = atlas.iter().filter(|(_, r)| r.is_ok()).map(|(pq, _)| *pq).collect();
    let mut expect = BTreeSet::new();
    for q in 1..=13u32 {
        for p in 1..q {
            let coprime = (2..=p).all(|d| p % d != 0 || q % d != 0);
            if coprime && 4 * p > q && 2 * p < q {
                expect.insert((p, q));
            }
        }
    }
    pass &= got == expect && admissible_pairs(2, 13).len() == expect.len();
    notes.push(format!("atlas {} of {} pairs", got.len(), expect.len()));
    outcome(pass, notes.join("; "))
}

fn criterion_5() -> Outcome {
    let mut worst = 0.0f64;
    let mut pass = true;
    for f in [0.2, 0.4, 0.7] {
        let alpha = f * FRAC_PI_2;
        match find_expander(alpha, 2) {
            Ok(s) => worst = worst.max((s.measured_span - alpha).abs()),
            Err(_) => pass = false,
        }
    }
    outcome(pass && worst <= 1e-6, format!("largest span error {worst:.2e}"))
}

fn neves_config() -> FlowConfig {
    let mesh = MeshDensity::RadiusScaled { ratio: 0.1, max_spacing: 2.0 };
    let mut cfg = FlowConfig::new(2, Boundary::PinnedAsymptotes { collar_radius: 50.0 }, mesh, 2e-5, 5.0);
    cfg.kappa_ceiling = 1e6;
    cfg
}

fn neves_run() -> FlowTrajectory {
    let c = neves_initial(0.6 * PI, 2, 200, 100.0).unwrap();
    evolve(&c, &neves_config()).unwrap()
}

/// Rows from the last time the minimum radius was ten times its final value.
fn last_decade(rows: &[SummaryRow]) -> &[SummaryRow] {
    let r_end = rows.last().unwrap().min_r;
    let start = rows.iter().rposition(|r| r.min_r >= 10.0 * r_end).unwrap_or(0);
    &rows[start..]
}

/// Node minimum of `r` at `count` evenly spaced times across `rows`.
fn trend_samples(rows: &[SummaryRow], count: usize) -> Vec<f64> {
    let (t0, t1) = (rows[0].t, rows[rows.len() - 1].t);
    let mut out = Vec::with_capacity(count);
    let mut k = 0;
    for j in 0..count {
        let t = t0 + (t1 - t0) * j as f64 / (count - 1) as f64;
        while k + 1 < rows.len() && rows[k].t < t {
            k += 1;
        }
        out.push(rows[k].min_r);
    }
    out
}

fn criterion_6(traj: &FlowTrajectory) -> Outcome {
    let Some(rep) = traj.singularity.as_ref() else {
        return outcome(false, format!("no singularity ({:?})", traj.termination));
    };
    let last = traj.summary.last().unwrap();
    let decade = last_decade(&traj.summary);
    let trend = trend_samples(decade, 50);
    let trend_rises = trend.windows(2).filter(|w| w[1] >= w[0]).count();
    // Step-level rises come from node insertion near the tip; reported, not gated.
    let (rises, jump) = decade
        .windows(2)
        .filter(|w| w[1].min_r > w[0].min_r)
        .fold((0, 0.0f64), |(c, m), w| (c + 1, m.max(w[1].min_r / w[0].min_r - 1.0)));
    let loc = rep.location.map_or(f64::NAN, |l| l[0].hypot(l[1]));
    outcome(
        traj.is_singular() && last.min_r < 1e-2 && trend_rises == 0 && rep.trend_confirmed && loc < 1e-2,
        format!(
            "trigger at t = {:.5}, T = {:.5}, final min r {:.2e} at |x| = {loc:.2e}; last decade strictly decreasing at {} sample times ({trend_rises} rises), {rises} remeshing rises of at most {jump:.1e} relative over {} steps",
            traj.end_time(),
            rep.t_est,
            last.min_r,
            trend.len(),
            decade.len()
        ),
    )
}

fn criterion_7(analysis: &BlowupAnalysis) -> Outcome {
    let fits: Vec<_> = analysis.type1.iter().filter_map(|f| f.cone.as_ref().ok()).collect();
    if fits.len() != analysis.type1.len() {
        return outcome(false, "a cone fit failed");
    }
    let gaps: Vec<f64> = fits.iter().map(|f| f.measured_gap.unwrap_or(f64::NAN)).collect();
    let gap_ok = gaps.iter().all(|g| (g - FRAC_PI_2).abs() <= 0.02);
    let theta_spread = fits
        .iter()
        .flat_map(|a| fits.iter().map(move |b| angle_distance_mod(a.theta_bar, b.theta_bar, PI)))
        .fold(0.0, f64::max);
    let residuals: Vec<f64> = fits.iter().map(|f| f.residual).collect();
    let decreasing = residuals.windows(2).all(|w| w[1] < w[0]);
    outcome(
        gap_ok && theta_spread <= 0.02 && decreasing,
        format!(
            "scales {:?}: gaps {gaps:.4?}, θ̄ spread {theta_spread:.1e}, residuals {residuals:.4?}",
            analysis.type1.iter().map(|f| f.scale).collect::<Vec<_>>()
        ),
    )
}

fn criterion_8(analysis: &BlowupAnalysis) -> Outcome {
    match &analysis.type2.model {
        Ok(m) => outcome(
            m.residual <= 5e-2 && analysis.consistency,
            format!(
                "B = {:.4}, θ̄ = {:.4}π, k = {}, residual {:.2e}, consistency {}",
                m.b.unwrap_or(f64::NAN),
                m.theta_bar / PI,
                m.k,
                m.residual,
                analysis.consistency
            ),
        ),
        Err(e) => outcome(false, format!("no Type II fit: {e}")),
    }
}

fn criterion_9(neves: &FlowTrajectory) -> Outcome {
    let run = |r: f64| {
        let c = PlanarCurve::circle(origin(), r, 64, 0.0).unwrap();
        let mesh = MeshDensity::RadiusScaled { ratio: TAU / 64.0, max_spacing: 10.0 };
        evolve(&c, &FlowConfig::new(2, Boundary::Closed, mesh, 1e-2, 2.0)).unwrap()
    };
    let circles = avoidance_check(&run(1.0), &run(2.0), 40).unwrap();

    // The special Lagrangian with the barrier's Type II angles, scaled out past its tip.
    let spec = SolitonSpec::new(2, SolitonKind::SpecialLagrangian { b: 4.0, k: 1, theta_bar: 0.1 * PI }).unwrap();
    let edge = PI / 4.0 * (1.0 - 1e-9);
    let sl = sample_special_lagrangian(&spec, (-edge, edge), 0.1, &SamplerConfig { r_max: 100.0 }).unwrap();
    let mut cfg = FlowConfig::new(2, Boundary::PinnedAsymptotes { collar_radius: 50.0 }, MeshDensity::Uniform { spacing: 0.1 }, 1e-3, neves.end_time());
    cfg.snapshot_every = 50;
    let sl_run = evolve(&sl, &cfg).unwrap();
    let barrier = avoidance_check(neves, &sl_run, 40).unwrap();
    outcome(
        circles.disjoint && barrier.disjoint,
        format!(
            "circles min separation {:.3} (t = {:.4}); barrier vs special Lagrangian min separation {:.3} (t = {:.4}, run to {:.4})",
            circles.min_separation,
            circles.time_of_min,
            barrier.min_separation,
            barrier.time_of_min,
            sl_run.end_time()
        ),
    )
}

/// Offset figure-eight: turning and winding numbers vanish, so θ is a function on the loop.
fn figure_eight(center: f64, count: usize) -> PlanarCurve {
    let nodes = (0..count)
        .map(|j| {
            let t = TAU * j as f64 / count as f64;
            Complex64::new(center + t.sin(), 0.5 * (2.0 * t).sin())
        })
        .collect();
    PlanarCurve::closed(nodes).unwrap()
}

fn range_violation(rows: &[SummaryRow]) -> f64 {
    rows.windows(2)
        .map(|w| (w[1].theta_max - w[0].theta_max).max(w[0].theta_min - w[1].theta_min))
        .fold(0.0, f64::max)
}

fn criterion_10(circle: &FlowTrajectory) -> Outcome {
    let mut worst = range_violation(&circle.summary);
    let mut steps = circle.summary.len();
    for n in [1, 2, 3] {
        let cfg = FlowConfig::new(n, Boundary::Closed, MeshDensity::Uniform { spacing: 0.02 }, 1e-3, 0.1);
        let traj = evolve(&figure_eight(4.0, 300), &cfg).unwrap();
        worst = worst.max(range_violation(&traj.summary));
        steps += traj.summary.len();
    }
    outcome(worst <= 1e-6, format!("largest per-step widening {worst:.2e} over {steps} steps (circle, figure-eights n = 1, 2, 3)"))
}

fn random_vector(rng: &mut ChaCha8Rng, n: usize) -> CVector {
    CVector::from_fn(n, |_, _| Complex64::new(rng.random::<f64>() * 2.0 - 1.0, rng.random::<f64>() * 2.0 - 1.0))
}

/// `|x|²|y|² − (x·y)²` for `z = x + iy`, zero exactly when x and y are dependent.
fn dependence(z: &CVector) -> f64 {
    let x = z.map(|c| c.re);
    let y = z.map(|c| c.im);
    x.norm_squared() * y.norm_squared() - x.dot(&y).powi(2)
}

fn criterion_11(actions: &[GroupAction]) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut equiv = 0.0f64;
    let mut quad = 0.0f64;
    let mut phase = 0.0f64;
    for a in actions {
        for _ in 0..100 {
            let z = random_vector(&mut rng, a.n_ambient);
            let coords = a.random_coords(&mut rng, TAU);
            equiv = equiv.max(equivariance_residual(a, &z, &coords).unwrap());
            let mu = moment(a, &z).coefficients;
            let lambda = 0.1 + 5.0 * rng.random::<f64>();
            let scaled = moment(a, &(&z * Complex64::new(lambda, 0.0))).coefficients;
            let turned = moment(a, &(&z * Complex64::from_polar(1.0, TAU * rng.random::<f64>()))).coefficients;
            for ((m, s), t) in mu.iter().zip(&scaled).zip(&turned) {
                quad = quad.max((s - lambda * lambda * m).abs() / (lambda * lambda));
                phase = phase.max((t - m).abs());
            }
        }
    }

    // SO(n): zero level ⟺ Re z, Im z dependent. Half the samples are complex multiples of real vectors.
    let mut mismatches = 0;
    for n in [2, 3, 4] {
        let so = GroupAction::so(n).unwrap();
        for j in 0..1000 {
            let z = if j % 2 == 0 {
                random_vector(&mut rng, n)
            } else {
                let c = Complex64::from_polar(0.5 + rng.random::<f64>(), TAU * rng.random::<f64>());
                CVector::from_fn(n, |_, _| c * (rng.random::<f64>() * 2.0 - 1.0))
            };
            let zero = moment(&so, &z).max_abs() <= 1e-12;
            let dependent = dependence(&z).abs() <= 1e-12;
            mismatches += (zero != dependent) as usize;
        }
    }

    let su2 = GroupAction::su2_sym3().unwrap();
    let one = |v: f64| Complex64::new(v, 0.0);
    let mu_su2 = moment(&su2, &CVector::from_vec(vec![one(1.0), one(0.0), one(0.0), one(1.0)]));
    let su2_zero = mu_su2.coefficients.iter().all(|&c| c == 0.0);

    let mut cyclic = vec![];
    let mut cyclic_ok = true;
    for (a, m) in [
        (GroupAction::so(3).unwrap(), 2),
        (GroupAction::torus(3).unwrap(), 3),
        (GroupAction::torus(4).unwrap(), 4),
        (su2.clone(), 4),
    ] {
        let w = cyclic_symmetry_order(&a, &a.base_point, m);
        cyclic_ok &= w.witnessed && w.residual <= 1e-6 && (2 * a.n_ambient as u32) % m == 0;
        cyclic.push(format!("{} m = {m} ({:.0e})", a.name, w.residual));
    }
    let round_off = 1e-13;
    outcome(
        equiv <= 1e-10 && quad <= round_off && phase <= round_off && mismatches == 0 && su2_zero && cyclic_ok,
        format!(
            "equivariance {equiv:.1e}, scaling {quad:.1e}, phase {phase:.1e}, SO zero-level mismatches {mismatches}/3000, μ(1,0,0,1) = 0: {su2_zero}; {}",
            cyclic.join(", ")
        ),
    )
}

fn criterion_12(actions: &[GroupAction]) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut worst = 0.0f64;
    let mut failures = 0;
    for a in actions {
        for _ in 0..100 {
            let w = Complex64::from_polar(0.2 + 2.0 * rng.random::<f64>(), TAU * rng.random::<f64>());
            let tangent = Complex64::from_polar(1.0, TAU * rng.random::<f64>());
            let coords = a.random_coords(&mut rng, TAU);
            match ambient_angle_check(a, w, tangent, &coords) {
                Ok(c) => worst = worst.max(c.residual),
                Err(_) => failures += 1,
            }
        }
    }
    outcome(
        worst <= 1e-8 && failures == 0,
        format!("largest residual {worst:.2e} over {} presets × 100 points, {failures} failures", actions.len()),
    )
}

fn criterion_13() -> Outcome {
    let c = grim_reaper((-1.5, 1.5), 0.02).unwrap();
    let mut cfg = FlowConfig::new(1, Boundary::FreeEnds, MeshDensity::Uniform { spacing: 0.02 }, 1e-9, 0.5);
    cfg.redistribution_period = 5;
    cfg.snapshot_every = 100;
    let traj = evolve(&c, &cfg).unwrap();
    let mut worst = 0.0f64;
    for s in &traj.snapshots {
        let z = s.curve.nodes();
        let Some(w) = z.windows(2).find(|w| w[0].re <= 0.0 && w[1].re > 0.0) else {
            return outcome(false, format!("lost the mid-curve at t = {}", s.t));
        };
        let y = w[0].im + (w[1].im - w[0].im) * (-w[0].re) / (w[1].re - w[0].re);
        worst = worst.max((y + s.t).abs());
    }
    outcome(
        traj.termination == Termination::TMaxReached && worst <= 1e-3,
        format!("largest mid-curve offset from y = −t {worst:.2e} over {} snapshots to t = {:.3}", traj.snapshots.len(), traj.end_time()),
    )
}

fn criterion_14(circle: &FlowTrajectory, neves: &FlowTrajectory) -> Outcome {
    let mut notes = vec![];
    let mut pass = true;
    for (name, traj) in [("circle", circle), ("barrier", neves)] {
        let m = monitor_estimates(traj, 10.0);
        let ok = m.h_ratio_sup.is_finite() && m.h_ratio_sup < 10.0 * m.h_ratio_initial;
        pass &= ok;
        notes.push(format!("{name} sup {:.3} vs initial {:.3}", m.h_ratio_sup, m.h_ratio_initial));
    }
    outcome(pass, notes.join("; "))
}

fn main() {
    let started = Instant::now();
    let titles = [
        "static special Lagrangians",
        "angle constancy",
        "circle benchmark",
        "shrinker reconstruction and atlas",
        "expander self-consistency",
        "singularity formation",
        "Type I structure",
        "Type II structure",
        "avoidance",
        "maximum principle for θ",
        "symmetry suite",
        "ambient angle binding",
        "grim reaper",
        "curvature-estimate monitor",
    ];
    let mut results: Vec<Option<Outcome>> = (0..titles.len()).map(|_| None).collect();
    std::thread::scope(|scope| {
        let barrier = scope.spawn(|| {
            let traj = neves_run();
            let analysis = analyze_blowup(&traj, &BlowupPlan::default());
            (traj, analysis)
        });
        let circle = circle_run(64);
        let actions = preset_catalog().unwrap();
        results[0] = Some(criterion_1());
        results[1] = Some(criterion_2());
        results[2] = Some(criterion_3(&circle));
        results[3] = Some(criterion_4());
        results[4] = Some(criterion_5());
        results[9] = Some(criterion_10(&circle));
        results[10] = Some(criterion_11(&actions));
        results[11] = Some(criterion_12(&actions));
        results[12] = Some(criterion_13());

        let (neves, analysis) = barrier.join().unwrap();
        results[5] = Some(criterion_6(&neves));
        match &analysis {
            Ok(a) => {
                results[6] = Some(criterion_7(a));
                results[7] = Some(criterion_8(a));
            }
            Err(e) => {
                results[6] = Some(outcome(false, format!("no blowup analysis: {e}")));
                results[7] = Some(outcome(false, format!("no blowup analysis: {e}")));
            }
        }
        results[8] = Some(criterion_9(&neves));
        results[13] = Some(criterion_14(&circle, &neves));
    });
    let mut failed = 0;
    for (i, (title, r)) in titles.iter().zip(results).enumerate() {
        let r = r.unwrap();
        failed += !r.pass as usize;
        println!("{} {:>2} {title}: {}", if r.pass { "PASS" } else { "FAIL" }, i + 1, r.detail);
    }
    println!("acceptance: {} of {} passed in {:.1?}", titles.len() - failed, titles.len(), started.elapsed());
    if failed > 0 {
        std::process::exit(1);
    }
}
