//! Command implementations. Each returns whether its checks passed.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::dual_lp::{extract_solution, maximize, variation_check, MaximizeOptions};
use crate::ellipsoid_bounds::{
    band_ratio, f_of_a, solve_r_for_normalization, verify_decay, ARegime, FParams,
};
use crate::error::{Error, Result};
use crate::fit::log_log_slope;
use crate::minkowski::{minkowski_residual, rhs_classical, solve_minkowski};
use crate::nonuniqueness::{
    envelope_constant, family_decay, family_point, run_pipeline, s0_checks, transform_identity_check,
    PipelineOptions,
};
use crate::quadrature::unit_ball_volume;
use crate::sample::{random_convex, random_direction, random_ellipsoid};
use crate::sphere::{dual_volume, ellipsoid_body, monge_ampere, AxiBody, AxiFn, MeridianGrid};

use super::config::{Command, RunConfig};
use super::emit::{construction_csv, csv_text, fmt_f64, manifest, summary_json, verdict_json, write_file, JsonValue};

/// Result of a command that ran to completion.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub pass: bool,
    /// Human-readable summary lines.
    pub report: Vec<String>,
}

pub fn execute(cfg: &RunConfig) -> Result<Outcome> {
    match cfg.command {
        Command::Minkowski => minkowski(cfg),
        Command::Solve => solve(cfg),
        Command::Construct => construct(cfg),
        Command::Bounds => bounds(cfg),
        Command::Sweep => sweep(cfg),
        Command::Verify => verify(cfg),
    }
}

fn finish(cfg: &RunConfig, files: &[(&str, String)], pass: bool, report: Vec<String>) -> Result<Outcome> {
    let names: Vec<&str> = files.iter().map(|f| f.0).collect();
    for (name, text) in files {
        write_file(&cfg.out, name, text)?;
    }
    write_file(&cfg.out, "MANIFEST", &manifest(cfg, &names))?;
    Ok(Outcome { pass, report })
}

fn grid(cfg: &RunConfig) -> Result<std::sync::Arc<MeridianGrid>> {
    MeridianGrid::new(cfg.params.n, cfg.nodes, cfg.grading)
}

fn minkowski(cfg: &RunConfig) -> Result<Outcome> {
    let grid = grid(cfg)?;
    let solved = cfg
        .eps
        .par_iter()
        .map(|&e| {
            let params = cfg.params.with_epsilon(e);
            let g = rhs_classical(&params, &grid).map_err(Error::stage("classical data", e))?;
            let h = solve_minkowski(&g.values).map_err(Error::stage("minkowski", e))?;
            Ok((e, g.values, h))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut rows = Vec::new();
    let mut report = Vec::new();
    for (e, g, h) in &solved {
        let res = minkowski_residual(h, g);
        let mass = g.integral()?;
        let area = monge_ampere(h).density.integral()?;
        report.push(format!("eps {e}: h in [{:.6}, {:.6}], residual {res:.2e}", h.min(), h.max()));
        rows.push(vec![fmt_f64(*e), fmt_f64(h.min()), fmt_f64(h.max()), fmt_f64(res), fmt_f64(mass), fmt_f64(area)]);
    }
    let (_, g, h) = solved.last().ok_or_else(|| Error::Config("empty eps list".into()))?;
    let profile: Vec<Vec<String>> = (0..grid.len())
        .map(|i| vec![fmt_f64(grid.nodes()[i]), fmt_f64(g.values()[i]), fmt_f64(h.values()[i])])
        .collect();
    finish(
        cfg,
        &[
            ("minkowski.csv", csv_text(&["eps", "h_min", "h_max", "residual", "data_mass", "surface_area"], &rows)),
            ("minkowski_profile.csv", csv_text(&["theta", "g", "h"], &profile)),
        ],
        true,
        report,
    )
}

fn solve(cfg: &RunConfig) -> Result<Outcome> {
    let grid = grid(cfg)?;
    let (p, q) = (cfg.params.p, cfg.params.q);
    let (alpha, beta) = (cfg.params.alpha, cfg.params.beta);
    let f = AxiFn::from_fn(&grid, |pt| pt.sin.powf(alpha) * pt.cos.powf(beta));
    let opts = MaximizeOptions {
        tol: cfg.tol,
        ..MaximizeOptions::default()
    };
    let state = maximize(&f, p, q, &AxiFn::constant(&grid, 1.0), &opts)?;
    let sol = extract_solution(&state, &f, p, q)?;
    let phi = crate::sphere::DualLpOperator::new(p, q).apply(&sol.big_h);
    let profile: Vec<Vec<String>> = (0..grid.len())
        .map(|i| {
            vec![
                fmt_f64(grid.nodes()[i]),
                fmt_f64(f.values()[i]),
                fmt_f64(sol.big_h.values()[i]),
                fmt_f64(phi.values()[i]),
            ]
        })
        .collect();
    let log: Vec<Vec<String>> = state
        .log
        .iter()
        .map(|l| {
            vec![
                l.iteration.to_string(),
                fmt_f64(l.j_value),
                fmt_f64(l.residual),
                fmt_f64(l.constraint_gap),
                fmt_f64(l.step),
                l.newton.to_string(),
            ]
        })
        .collect();
    let pass = state.converged && sol.residual <= 1e-3;
    let summary = summary_json(&[
        ("converged", JsonValue::Bool(state.converged)),
        ("iterations", JsonValue::Num(state.iteration as f64)),
        ("j", JsonValue::Num(state.j_value)),
        ("c", JsonValue::Num(sol.c)),
        ("residual", JsonValue::Num(sol.residual)),
        ("dual_volume", JsonValue::Num(sol.dual_volume_h)),
    ]);
    let report = vec![format!(
        "converged {} after {} iterations: J = {:.12e}, c = {:.12e}, residual {:.2e}",
        state.converged, state.iteration, state.j_value, sol.c, sol.residual
    )];
    finish(
        cfg,
        &[
            ("solve.csv", csv_text(&["theta", "f", "H", "phi"], &profile)),
            ("solve_log.csv", csv_text(&["iteration", "j", "residual", "constraint_gap", "step", "newton"], &log)),
            ("solve.json", summary),
        ],
        pass,
        report,
    )
}

fn construct(cfg: &RunConfig) -> Result<Outcome> {
    let opts = PipelineOptions {
        nodes: cfg.nodes,
        grading: cfg.grading,
        maximize: MaximizeOptions {
            tol: cfg.tol,
            ..MaximizeOptions::default()
        },
    };
    let run = run_pipeline(&cfg.params, &cfg.eps, &opts)?;
    let mut report: Vec<String> = run
        .records
        .iter()
        .map(|r| {
            format!(
                "eps {}: dv {:.6e} vs {:.6e} (ratio {:.4}), gap {:.4}, residuals {:.2e} / {:.2e}, S0 {}",
                r.params.epsilon,
                r.dv_constructed,
                r.dv_variational,
                r.ratio(),
                r.solution_gap,
                r.residual_constructed,
                r.residual_variational,
                r.s0_check
            )
        })
        .collect();
    let v = run.verdict;
    report.push(format!(
        "verdict {}: smallest eps {}, ratio {:.4}, gap {:.4}",
        if v.pass { "PASS" } else { "FAIL" },
        v.smallest_eps,
        v.ratio,
        v.gap
    ));
    finish(
        cfg,
        &[("construction.csv", construction_csv(&run.records)), ("verdict.json", verdict_json(&v))],
        v.pass,
        report,
    )
}

fn bounds(cfg: &RunConfig) -> Result<Outcome> {
    let p = &cfg.params;
    let fp = FParams {
        n: p.n,
        p: p.p,
        q: p.q,
        alpha: p.alpha,
        beta: p.beta,
    };
    let regime = ARegime::of(cfg.a_sweep[0]);
    if cfg.a_sweep.iter().any(|&a| ARegime::of(a) != regime) {
        return Err(Error::Config("a-sweep mixes regimes (a > 3, a in [1/3, 3], a < 1/3)".into()));
    }
    let header = ["a", "r", "F", "predicted_exp", "fitted_exp", "log_flag"];
    let (rows, pass, line) = if regime == ARegime::A2 {
        let target = fp.n as f64 * unit_ball_volume(fp.n);
        let pts = cfg
            .a_sweep
            .iter()
            .map(|&a| {
                let r = solve_r_for_normalization(a, fp.n, fp.q, target)?;
                Ok((a, r, f_of_a(crate::sphere::RotEllipsoid { r, a }, &fp)?))
            })
            .collect::<Result<Vec<_>>>()?;
        let ratio = band_ratio(&fp, &cfg.a_sweep)?;
        let (a, fv): (Vec<f64>, Vec<f64>) = pts.iter().map(|t| (t.0, t.2)).unzip();
        let fitted = if a.len() > 1 { log_log_slope(&a, &fv) } else { 0.0 };
        let rows = pts
            .iter()
            .map(|(a, r, f)| vec![fmt_f64(*a), fmt_f64(*r), fmt_f64(*f), fmt_f64(0.0), fmt_f64(fitted), "0".into()])
            .collect::<Vec<_>>();
        (rows, ratio <= 10.0, format!("band: max F / min F = {ratio:.4}"))
    } else {
        let fit = verify_decay(&fp, regime, &cfg.a_sweep)?;
        let flag = if fit.predicted.has_log() { "1" } else { "0" };
        let rows = fit
            .rows
            .iter()
            .map(|pt| {
                vec![
                    fmt_f64(pt.a),
                    fmt_f64(pt.r),
                    fmt_f64(pt.f),
                    fmt_f64(fit.predicted.power),
                    fmt_f64(fit.fitted_slope),
                    flag.into(),
                ]
            })
            .collect::<Vec<_>>();
        let line = format!(
            "{regime:?}: fitted {:.4}, predicted {:.4} (log power {}), monotone {}",
            fit.fitted_slope, fit.predicted.power, fit.predicted.log_power, fit.monotone
        );
        (rows, fit.passes(), line)
    };
    finish(cfg, &[("fa_sweep.csv", csv_text(&header, &rows))], pass, vec![line])
}

fn sweep(cfg: &RunConfig) -> Result<Outcome> {
    let grid = grid(cfg)?;
    let points = cfg
        .eps
        .par_iter()
        .map(|&e| family_point(&cfg.params.with_epsilon(e), &grid))
        .collect::<Result<Vec<_>>>()?;
    let c = envelope_constant(points.iter().map(|p| &p.h_eps));
    let hs: Vec<&AxiFn> = points.iter().map(|p| &p.h_eps).collect();
    let (s0, flags) = s0_checks(&hs, c)?;
    let rows: Vec<Vec<String>> = points
        .iter()
        .zip(&flags)
        .map(|(pt, ok)| {
            vec![
                fmt_f64(pt.params.epsilon),
                fmt_f64(pt.h_eps.min()),
                fmt_f64(pt.h_eps.max()),
                fmt_f64(pt.dv_constructed),
                fmt_f64(pt.f_l1),
                fmt_f64(pt.residual_constructed),
                fmt_f64(pt.transform_mismatch),
                pt.f_positive.to_string(),
                ok.to_string(),
            ]
        })
        .collect();
    let s0_pass = flags.iter().all(|b| *b);
    let decay_rows: Vec<_> = points
        .iter()
        .map(|p| (p.params, p.dv_constructed, p.f_l1, &p.h_eps))
        .collect();
    let decay = family_decay(&decay_rows)?;
    let nan = f64::NAN;
    let summary = summary_json(&[
        ("predicted_dv_slope", JsonValue::Num(decay.predicted)),
        ("dv_slope", JsonValue::Num(decay.dv_slope)),
        ("dv_slope_log_divided", JsonValue::Num(decay.dv_slope_log)),
        ("f_l1_slope", JsonValue::Num(decay.f_l1_slope)),
        ("h_max_slope", JsonValue::Num(decay.h_bounds.slope_max.unwrap_or(nan))),
        ("h_min_slope", JsonValue::Num(decay.h_bounds.slope_min.unwrap_or(nan))),
        ("s0_threshold", JsonValue::Num(s0.threshold)),
        ("s0_c", JsonValue::Num(s0.c)),
        ("dv_pass", JsonValue::Bool(decay.dv_pass)),
        ("f_l1_pass", JsonValue::Bool(decay.f_l1_pass)),
        ("h_bounds_pass", JsonValue::Bool(decay.h_bounds.pass)),
        ("s0_pass", JsonValue::Bool(s0_pass)),
    ]);
    let pass = decay.pass() && s0_pass;
    let report = vec![
        format!(
            "dv slope {:.4} (predicted {:.4}), f_l1 slope {:.4}, h envelope slopes {:?} / {:?}",
            decay.dv_slope_log, decay.predicted, decay.f_l1_slope, decay.h_bounds.slope_min, decay.h_bounds.slope_max
        ),
        format!("S0 threshold {:.6} with C = {:.6}: {}", s0.threshold, s0.c, s0_pass),
    ];
    let header = [
        "eps",
        "h_min",
        "h_max",
        "dv_constructed",
        "f_l1",
        "residual_constructed",
        "transform_mismatch",
        "f_positive",
        "s0_pass",
    ];
    finish(cfg, &[("sweep.csv", csv_text(&header, &rows)), ("decay.json", summary)], pass, report)
}

struct Check {
    name: &'static str,
    index: usize,
    value: f64,
    tolerance: f64,
}

fn verify(cfg: &RunConfig) -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut checks = Vec::new();
    for (i, n) in (2..=4).enumerate() {
        let g = MeridianGrid::new(n, cfg.nodes, cfg.grading)?;
        let area = g.integrate(&vec![1.0; g.len()])?;
        checks.push(Check {
            name: "sphere_area",
            index: i,
            value: (area - n as f64 * unit_ball_volume(n)).abs(),
            tolerance: 1e-10,
        });
        let ball = AxiBody::unit_ball(&g);
        for (j, q) in [0.5, 1.0, 2.0, n as f64].into_iter().enumerate() {
            checks.push(Check {
                name: "ball_dual_volume",
                index: 4 * i + j,
                value: (dual_volume(&ball, q)? - unit_ball_volume(n)).abs(),
                tolerance: 1e-10,
            });
        }
    }
    let grid = grid(cfg)?;
    for k in 0..20 {
        let e = random_ellipsoid(&mut rng);
        let exact = ellipsoid_body(e, &grid).curvature;
        let ma = monge_ampere(&ellipsoid_body(e, &grid).support).density;
        let value = ma.zip_with(&exact, |a, b| (a - b).abs() / b).max();
        checks.push(Check {
            name: "ellipsoid_monge_ampere",
            index: k,
            value,
            tolerance: 1e-6,
        });
    }
    let mut k = 0;
    for _ in 0..10 {
        let h = random_convex(&grid, &mut rng);
        for &e in &cfg.eps {
            checks.push(Check {
                name: "transform_identity",
                index: k,
                value: transform_identity_check(&h, e),
                tolerance: 1e-6,
            });
            k += 1;
        }
    }
    for k in 0..20 {
        let h = random_convex(&grid, &mut rng);
        let eta = random_direction(&grid, &mut rng);
        let q = rand::Rng::gen_range(&mut rng, 0.5..3.0);
        checks.push(Check {
            name: "variation_formula",
            index: k,
            value: variation_check(&h, &eta, q, 1e-4)?.rel_error(),
            tolerance: 1e-5,
        });
    }
    let pass = checks.iter().all(|c| c.value <= c.tolerance);
    let rows: Vec<Vec<String>> = checks
        .iter()
        .map(|c| {
            vec![
                c.name.to_string(),
                c.index.to_string(),
                fmt_f64(c.value),
                fmt_f64(c.tolerance),
                (c.value <= c.tolerance).to_string(),
            ]
        })
        .collect();
    let failed = checks.iter().filter(|c| c.value > c.tolerance).count();
    let worst = checks
        .iter()
        .map(|c| (c.name, c.value / c.tolerance))
        .fold(("", 0.0), |m, x| if x.1 > m.1 { x } else { m });
    let report = vec![format!(
        "{} checks, {failed} failed; worst {} at {:.3} of its tolerance",
        checks.len(),
        worst.0,
        worst.1
    )];
    finish(
        cfg,
        &[("verify.csv", csv_text(&["check", "index", "value", "tolerance", "pass"], &rows))],
        pass,
        report,
    )
}
