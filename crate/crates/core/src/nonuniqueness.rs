//! Two solutions of the dual L_p Minkowski equation with the same data.
//!
//! For M_ε = diag(ε, …, ε, 1) and the solution h of the classical problem
//! with data |x′|^α|x_n|^β|M_ε x|^{−p−δ−1−β}, the support function
//! H_ε(x) = ε^{(q+δ−1)/(q−p)}|M_ε⁻¹x|·h(x_ε) solves the dual equation for an
//! explicit f_ε whose mass stays bounded below while Ṽ_q(K_{H_ε}) → 0. The
//! variational solution for the same f_ε keeps its dual volume, so the two
//! solutions separate as ε shrinks.

use std::sync::Arc;

use rayon::prelude::*;

use crate::dual_lp::{extract_solution, maximize, newton_local_solve, residual, MaximizeOptions};
use crate::error::{Error, Result};
use crate::fit::log_log_slope;
use crate::minkowski::{rhs_classical, solve_minkowski, verify_h_bounds, HBoundsReport};
use crate::quadrature::unit_ball_volume;
use crate::sphere::{alexandrov_radial, dual_volume_radial, gradient_map, monge_ampere, AxiFn, MeridianGrid, ProblemParams};

/// Relative tolerance on fitted decay slopes.
pub const SLOPE_TOL: f64 = 0.15;
/// Residual bound both solutions must meet.
pub const RESIDUAL_BOUND: f64 = 1e-3;
pub const GAP_BOUND: f64 = 0.2;
pub const RATIO_BOUND: f64 = 2.0;

fn smallest_even_above(bound: f64) -> f64 {
    if bound < 0.0 {
        0.0
    } else {
        2.0 * (bound / 2.0).floor() + 2.0
    }
}

/// (α, β, δ) for the construction: the smallest nonnegative even weights
/// that keep f_ε integrable and δ at the middle of its window.
pub fn choose_parameters(n: usize, p: f64, q: f64) -> Result<(f64, f64, f64)> {
    let probe = ProblemParams {
        n,
        p,
        q,
        alpha: 0.0,
        beta: 0.0,
        delta: 0.0,
        epsilon: 0.25,
    };
    probe.check_standing()?;
    if q < 1.0 && !(p < q - 1.0) {
        return Err(Error::Admissibility {
            key: "p",
            inequality: "p < q-1".into(),
            detail: format!("p = {p}, q - 1 = {}", q - 1.0),
        });
    }
    let nf = n as f64;
    let alpha = smallest_even_above((1.0 - nf).max(1.0 - nf + p * (1.0 - q) / q));
    let beta = smallest_even_above((-1.0f64).max(-1.0 + p * (nf - 1.0 - q) / q));
    let (lo, hi, _) = ProblemParams::delta_window(p, q);
    let chosen = ProblemParams {
        alpha,
        beta,
        delta: 0.5 * (lo + hi),
        ..probe
    };
    chosen.validate()?;
    Ok((alpha, beta, chosen.delta))
}

/// True when 1 + n/p < 1/p + 1/q < n/q − 1, the window in which zero
/// weights already give a positive f_ε.
pub fn positivity_window(n: usize, p: f64, q: f64) -> bool {
    let nf = n as f64;
    let mid = 1.0 / p + 1.0 / q;
    1.0 + nf / p < mid && mid < nf / q - 1.0
}

/// θ_ε with tan θ_ε = tan θ / ε, i.e. the angle of M_ε⁻¹x.
pub fn pulled_angle(theta: f64, eps: f64) -> f64 {
    if theta >= std::f64::consts::FRAC_PI_2 {
        return std::f64::consts::FRAC_PI_2;
    }
    theta.sin().atan2(eps * theta.cos())
}

/// |M_ε⁻¹x| in the meridian chart.
fn stretch(sin: f64, cos: f64, eps: f64) -> f64 {
    (sin / eps).hypot(cos)
}

/// H_ε(x) = ε^{(q+δ−1)/(q−p)}|M_ε⁻¹x|·h(x_ε).
pub fn transform_support(h: &AxiFn, eps: f64, p: f64, q: f64, delta: f64) -> AxiFn {
    linear_image(h, eps).scale(eps.powf((q + delta - 1.0) / (q - p)))
}

/// Support function |M_ε⁻¹x|·h(x_ε) of M_ε⁻¹K_h.
fn linear_image(h: &AxiFn, eps: f64) -> AxiFn {
    let interp = h.interpolant();
    AxiFn::from_fn(h.grid(), |pt| {
        stretch(pt.sin, pt.cos, eps) * interp.value(pulled_angle(pt.theta, eps))
    })
}

/// f_ε(x) = h(x_ε)^{1−p}|x′|^α|x_n|^β|N_ε x|^{δ−α−n+1}|N_ε∇̄h(x_ε)|^{q−n}
/// with N_ε = diag(1, …, 1, ε).
pub fn f_epsilon(h: &AxiFn, params: &ProblemParams) -> AxiFn {
    let ProblemParams {
        n,
        p,
        q,
        alpha,
        beta,
        delta,
        epsilon: eps,
    } = *params;
    let nf = n as f64;
    let interp = h.interpolant();
    AxiFn::from_fn(h.grid(), |pt| {
        let te = pulled_angle(pt.theta, eps);
        let (s, c) = te.sin_cos();
        let (hv, d1, _) = interp.jet(te);
        let xi_lat = d1 * c + hv * s;
        let xi_ax = hv * c - d1 * s;
        let nx = pt.sin.hypot(eps * pt.cos);
        let ng = xi_lat.hypot(eps * xi_ax);
        hv.powf(1.0 - p)
            * pt.sin.powf(alpha)
            * pt.cos.powf(beta)
            * nx.powf(delta - alpha - nf + 1.0)
            * ng.powf(q - nf)
    })
}

/// Largest mismatch between det(∇²u + uI)(x) and
/// det(∇²h + hI)(x_ε)·ε^{2(1−n)}/|M_ε⁻¹x|^{n+1} for u = |M_ε⁻¹x|·h(x_ε),
/// relative to the sup of the right-hand side.
pub fn transform_identity_check(h: &AxiFn, eps: f64) -> f64 {
    let grid = h.grid();
    let n = grid.dim();
    let lhs = monge_ampere(&linear_image(h, eps)).density;
    let interp = h.interpolant();
    let det2 = eps.powf(2.0 * (1.0 - n as f64));
    let rhs: Vec<f64> = (0..grid.len())
        .map(|i| {
            let pt = grid.point(i);
            let te = pulled_angle(pt.theta, eps);
            let (hv, d1, d2) = interp.jet(te);
            let ma_h = ma_at(n, te, hv, d1, d2);
            ma_h * det2 / stretch(pt.sin, pt.cos, eps).powi(n as i32 + 1)
        })
        .collect();
    let scale = rhs.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    lhs.values()
        .iter()
        .zip(&rhs)
        .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()))
        / scale
}

fn ma_at(n: usize, theta: f64, h: f64, d1: f64, d2: f64) -> f64 {
    let lat = if n > 2 {
        let (s, c) = theta.sin_cos();
        // the lateral radius tends to h″ + h at the pole
        let r = if s < 1e-8 { d2 + h } else { d1 * c / s + h };
        r.powi(n as i32 - 2)
    } else {
        1.0
    };
    (d2 + h) * lat
}

/// The band S₀ = {cos θ < cos(π/4 + ½·arccos C⁻²)} around the equator.
#[derive(Clone, Debug)]
pub struct S0Region {
    pub threshold: f64,
    pub c: f64,
    pub mask: Vec<bool>,
}

impl S0Region {
    pub fn new(grid: &MeridianGrid, c: f64) -> Self {
        let threshold = (std::f64::consts::FRAC_PI_4 + 0.5 * (c.powi(-2)).acos()).cos();
        let mask = grid.cos().iter().map(|v| *v < threshold).collect();
        S0Region { threshold, c, mask }
    }
}

/// Envelope constant max(max h, 1/min h) over a family.
pub fn envelope_constant<'a>(hs: impl IntoIterator<Item = &'a AxiFn>) -> f64 {
    hs.into_iter()
        .map(|h| h.max().max(1.0 / h.min()))
        .fold(1.0, f64::max)
}

/// Checks |ξ′| > 1/(2C) on S₀ for every h in the family, where ξ′ is the
/// lateral component of the gradient map. Returns per-member verdicts.
pub fn s0_checks(hs: &[&AxiFn], c: f64) -> Result<(S0Region, Vec<bool>)> {
    let first = hs
        .first()
        .ok_or_else(|| Error::InsufficientSweep("no solutions to check".into()))?;
    let region = S0Region::new(first.grid(), c);
    let bound = 0.5 / c;
    let verdicts = hs
        .iter()
        .map(|h| {
            let (lat, _) = gradient_map(h);
            lat.values()
                .iter()
                .zip(&region.mask)
                .all(|(v, m)| !m || v.abs() > bound)
        })
        .collect();
    Ok((region, verdicts))
}

/// One ε of the construction.
#[derive(Clone, Debug)]
pub struct ConstructionRecord {
    pub params: ProblemParams,
    /// Solution of the classical problem.
    pub h_eps: AxiFn,
    pub h_eps_bounds: (f64, f64),
    /// H_ε as built from h_ε.
    pub constructed: AxiFn,
    /// H̃_ε from the maximizer.
    pub variational: AxiFn,
    pub f: AxiFn,
    pub dv_constructed: f64,
    pub dv_variational: f64,
    pub f_l1: f64,
    pub f_positive: bool,
    pub residual_constructed: f64,
    pub residual_variational: f64,
    /// Relative sup distance from H_ε to the discrete solution Newton finds next to it.
    pub newton_shift: f64,
    pub transform_mismatch: f64,
    pub s0_check: bool,
    pub solution_gap: f64,
}

impl ConstructionRecord {
    pub fn ratio(&self) -> f64 {
        self.dv_variational / self.dv_constructed
    }
}

#[derive(Clone, Copy, Debug)]
pub struct PipelineOptions {
    pub nodes: usize,
    pub grading: f64,
    pub maximize: MaximizeOptions,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions {
            nodes: 512,
            grading: 2.0,
            maximize: MaximizeOptions::default(),
        }
    }
}

/// The maximizer-free part of one ε: h_ε, H_ε and f_ε with their readouts.
#[derive(Clone, Debug)]
pub struct FamilyPoint {
    pub params: ProblemParams,
    pub h_eps: AxiFn,
    pub constructed: AxiFn,
    pub f: AxiFn,
    pub dv_constructed: f64,
    pub f_l1: f64,
    pub f_positive: bool,
    pub residual_constructed: f64,
    pub transform_mismatch: f64,
}

/// Solves the classical problem at ε and builds H_ε and f_ε.
pub fn family_point(params: &ProblemParams, grid: &Arc<MeridianGrid>) -> Result<FamilyPoint> {
    let eps = params.epsilon;
    let (p, q) = (params.p, params.q);
    let g = rhs_classical(params, grid).map_err(Error::stage("classical data", eps))?;
    let h = solve_minkowski(&g.values).map_err(Error::stage("minkowski", eps))?;
    let transform_mismatch = transform_identity_check(&h, eps);
    let big_h = transform_support(&h, eps, p, q, params.delta);
    let f = f_epsilon(&h, params);
    if let Some(i) = f.first_non_finite() {
        return Err(Error::stage("f_eps", eps)(Error::NonFinite {
            index: i,
            theta: grid.nodes()[i],
        }));
    }
    let f_positive = f.values().iter().all(|v| *v > 0.0);
    let f_l1 = f.integral().map_err(Error::stage("f_eps", eps))?;
    let residual_constructed = residual(&big_h, &f, p, q).map_err(Error::stage("constructed residual", eps))?;
    let dv_constructed = dual_volume_radial(&alexandrov_radial(&big_h), q).map_err(Error::stage("constructed dual volume", eps))?;
    Ok(FamilyPoint {
        params: *params,
        h_eps: h,
        constructed: big_h,
        f,
        dv_constructed,
        f_l1,
        f_positive,
        residual_constructed,
        transform_mismatch,
    })
}

/// Builds both solutions at one ε.
pub fn construct_one(params: &ProblemParams, grid: &Arc<MeridianGrid>, opts: &MaximizeOptions) -> Result<ConstructionRecord> {
    let eps = params.epsilon;
    let (p, q) = (params.p, params.q);
    let fam = family_point(params, grid)?;
    let refined = newton_local_solve(&fam.f, p, q, &fam.constructed).map_err(Error::stage("newton verification", eps))?;
    let newton_shift = refined.zip_with(&fam.constructed, |a, b| a - b).max_abs() / fam.constructed.max_abs();

    let init = AxiFn::constant(grid, 1.0);
    let state = maximize(&fam.f, p, q, &init, opts).map_err(Error::stage("maximize", eps))?;
    let sol = extract_solution(&state, &fam.f, p, q).map_err(Error::stage("extract", eps))?;
    let solution_gap = sol.big_h.zip_with(&fam.constructed, |a, b| a - b).max_abs() / sol.big_h.max_abs();
    Ok(ConstructionRecord {
        params: *params,
        h_eps_bounds: (fam.h_eps.min(), fam.h_eps.max()),
        h_eps: fam.h_eps,
        constructed: fam.constructed,
        variational: sol.big_h,
        f: fam.f,
        dv_constructed: fam.dv_constructed,
        dv_variational: sol.dual_volume_h,
        f_l1: fam.f_l1,
        f_positive: fam.f_positive,
        residual_constructed: fam.residual_constructed,
        residual_variational: sol.residual,
        newton_shift,
        transform_mismatch: fam.transform_mismatch,
        s0_check: false,
        solution_gap,
    })
}

/// Outcome of a sweep.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Verdict {
    pub pass: bool,
    pub smallest_eps: f64,
    pub ratio: f64,
    pub gap: f64,
}

/// PASS iff at the smallest ε both residuals are within bound, the gap is
/// at least 0.2 and the dual-volume ratio is at least 2, and the ratio grows
/// strictly as ε shrinks. Records must be sorted by decreasing ε.
pub fn verdict(records: &[ConstructionRecord]) -> Verdict {
    let last = match records.last() {
        Some(r) => r,
        None => {
            return Verdict {
                pass: false,
                smallest_eps: f64::NAN,
                ratio: f64::NAN,
                gap: f64::NAN,
            }
        }
    };
    let increasing = records.windows(2).all(|w| w[1].ratio() > w[0].ratio());
    let pass = last.residual_constructed <= RESIDUAL_BOUND
        && last.residual_variational <= RESIDUAL_BOUND
        && last.solution_gap >= GAP_BOUND
        && last.ratio() >= RATIO_BOUND
        && increasing;
    Verdict {
        pass,
        smallest_eps: last.params.epsilon,
        ratio: last.ratio(),
        gap: last.solution_gap,
    }
}

/// Predicted exponent of ε in Ṽ_q(K_{H_ε}); at q = 1 it multiplies |log ε|.
pub fn predicted_dv_slope(p: f64, q: f64, delta: f64) -> f64 {
    if q < 1.0 {
        q * (q + delta - 1.0) / (q - p)
    } else if q == 1.0 {
        delta / (1.0 - p)
    } else {
        (q * delta + p * (q - 1.0)) / (q - p)
    }
}

/// Decay readouts that need only the constructed family.
#[derive(Clone, Debug)]
pub struct FamilyDecay {
    pub predicted: f64,
    /// Slope of log Ṽ_q(K_{H_ε}) against log ε.
    pub dv_slope: f64,
    /// Same after dividing by |log ε|; equals `dv_slope` unless q = 1.
    pub dv_slope_log: f64,
    pub dv_pass: bool,
    pub f_l1_slope: f64,
    pub f_l1_pass: bool,
    pub h_bounds: HBoundsReport,
}

impl FamilyDecay {
    pub fn pass(&self) -> bool {
        self.dv_pass && self.f_l1_pass && self.h_bounds.pass
    }
}

/// Fits the dual-volume rate, the flatness of ‖f_ε‖₁ and the h_ε envelope
/// over a sweep given as (params, Ṽ_q(K_{H_ε}), ‖f_ε‖₁, h_ε) rows.
pub fn family_decay(rows: &[(ProblemParams, f64, f64, &AxiFn)]) -> Result<FamilyDecay> {
    if rows.len() < 4 {
        return Err(Error::InsufficientSweep(format!(
            "decay fits need at least 4 values of eps, got {}",
            rows.len()
        )));
    }
    let ProblemParams { p, q, delta, .. } = rows[0].0;
    let eps: Vec<f64> = rows.iter().map(|r| r.0.epsilon).collect();
    let dv: Vec<f64> = rows.iter().map(|r| r.1).collect();
    let predicted = predicted_dv_slope(p, q, delta);
    let dv_slope = log_log_slope(&eps, &dv);
    let dv_slope_log = if q == 1.0 {
        let divided: Vec<f64> = dv.iter().zip(&eps).map(|(v, e)| v / e.ln().abs()).collect();
        log_log_slope(&eps, &divided)
    } else {
        dv_slope
    };
    let f_l1: Vec<f64> = rows.iter().map(|r| r.2).collect();
    let f_l1_slope = log_log_slope(&eps, &f_l1);
    let sweep: Vec<(f64, &AxiFn)> = rows.iter().map(|r| (r.0.epsilon, r.3)).collect();
    Ok(FamilyDecay {
        predicted,
        dv_slope,
        dv_slope_log,
        dv_pass: (dv_slope_log - predicted).abs() <= SLOPE_TOL * predicted.abs(),
        f_l1_slope,
        f_l1_pass: f_l1_slope.abs() <= 0.05,
        h_bounds: verify_h_bounds(&sweep),
    })
}

#[derive(Clone, Debug)]
pub struct DecayReport {
    pub family: FamilyDecay,
    pub dv_variational_slope: f64,
    /// Ṽ_q(K_{H̃_ε}) ≥ (‖f_ε‖₁/(nκ_n))^{q/(q−p)}κ_n at every ε.
    pub floor_pass: bool,
}

impl DecayReport {
    pub fn pass(&self) -> bool {
        self.family.pass() && self.floor_pass
    }
}

pub fn decay_checks(records: &[ConstructionRecord]) -> Result<DecayReport> {
    let rows: Vec<_> = records
        .iter()
        .map(|r| (r.params, r.dv_constructed, r.f_l1, &r.h_eps))
        .collect();
    let family = family_decay(&rows)?;
    let ProblemParams { n, p, q, .. } = records[0].params;
    let eps: Vec<f64> = records.iter().map(|r| r.params.epsilon).collect();
    let dvv: Vec<f64> = records.iter().map(|r| r.dv_variational).collect();
    let floor_pass = records.iter().all(|r| {
        r.dv_variational >= variational_floor(n, p, q, r.f_l1) * (1.0 - 1e-9)
    });
    Ok(DecayReport {
        family,
        dv_variational_slope: log_log_slope(&eps, &dvv),
        floor_pass,
    })
}

/// (‖f‖₁/(nκ_n))^{q/(q−p)}κ_n, below which no variational solution's Ṽ_q can fall.
pub fn variational_floor(n: usize, p: f64, q: f64, f_l1: f64) -> f64 {
    let kappa = unit_ball_volume(n);
    (f_l1 / (n as f64 * kappa)).powf(q / (q - p)) * kappa
}

/// Everything a sweep produces.
#[derive(Clone, Debug)]
pub struct PipelineRun {
    pub params: ProblemParams,
    pub records: Vec<ConstructionRecord>,
    pub s0: S0Region,
    pub verdict: Verdict,
}

/// Runs the construction for every ε (concurrently), then the S₀ checks and
/// the verdict. `params.epsilon` is ignored.
pub fn run_pipeline(params: &ProblemParams, eps_list: &[f64], opts: &PipelineOptions) -> Result<PipelineRun> {
    if eps_list.is_empty() {
        return Err(Error::InsufficientSweep("empty eps list".into()));
    }
    for &e in eps_list {
        params.with_epsilon(e).validate()?;
    }
    let grid = MeridianGrid::new(params.n, opts.nodes, opts.grading)?;
    let mut eps: Vec<f64> = eps_list.to_vec();
    eps.sort_by(|a, b| b.total_cmp(a));
    let mut records = eps
        .par_iter()
        .map(|&e| construct_one(&params.with_epsilon(e), &grid, &opts.maximize))
        .collect::<Result<Vec<_>>>()?;
    let c = envelope_constant(records.iter().map(|r| &r.h_eps));
    let hs: Vec<&AxiFn> = records.iter().map(|r| &r.h_eps).collect();
    let (s0, flags) = s0_checks(&hs, c)?;
    for (r, ok) in records.iter_mut().zip(flags) {
        r.s0_check = ok;
    }
    let verdict = verdict(&records);
    Ok(PipelineRun {
        params: *params,
        records,
        s0,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sphere::AlexandrovBody;

    #[test]
    fn parameter_choices() {
        assert_eq!(choose_parameters(2, -1.0, 0.5).unwrap(), (0.0, 0.0, 0.75));
        assert_eq!(choose_parameters(2, -1.0, 1.0).unwrap(), (0.0, 0.0, 0.5));
        assert_eq!(choose_parameters(3, -1.0, 2.0).unwrap(), (0.0, 0.0, 0.75));
        let err = choose_parameters(2, -0.4, 0.5).unwrap_err().to_string();
        assert!(err.contains("p < q-1 violated"), "{err}");
        assert!(choose_parameters(2, 0.5, 0.5).is_err());
        // large q forces positive even weights
        let (a, b, _) = choose_parameters(2, -3.0, 0.5).unwrap();
        assert_eq!((a, b), (0.0, 0.0));
        let (a, b, _) = choose_parameters(2, -5.0, 4.0).unwrap();
        assert!(a % 2.0 == 0.0 && b % 2.0 == 0.0);
        assert!(b > -1.0 + -5.0 * (1.0 - 4.0) / 4.0);
    }

    #[test]
    fn pulled_angle_values() {
        assert!((pulled_angle(std::f64::consts::FRAC_PI_4, 0.5) - 2f64.atan()).abs() < 1e-15);
        assert_eq!(pulled_angle(0.0, 0.1), 0.0);
        assert_eq!(pulled_angle(std::f64::consts::FRAC_PI_2, 0.1), std::f64::consts::FRAC_PI_2);
        let mut prev = 0.0;
        for k in 1..50 {
            let t = k as f64 * 0.03;
            let v = pulled_angle(t, 0.2);
            assert!(v > prev && v > pulled_angle(t, 0.3));
            prev = v;
        }
    }

    #[test]
    fn transform_of_ball_is_ellipsoid() {
        let grid = MeridianGrid::new(2, 64, 2.0).unwrap();
        let one = AxiFn::constant(&grid, 1.0);
        let h = transform_support(&one, 0.3, -1.0, 0.5, 0.75);
        let lambda = 0.3f64.powf(0.25 / 1.5);
        for i in 0..grid.len() {
            let pt = grid.point(i);
            let want = lambda * (pt.sin / 0.3).hypot(pt.cos);
            assert!((h.values()[i] - want).abs() < 1e-13);
        }
        let twice = transform_support(&one.scale(2.0), 0.3, -1.0, 0.5, 0.75);
        assert!(twice.zip_with(&h, |a, b| a - 2.0 * b).max_abs() < 1e-13);
    }

    #[test]
    fn identity_exact_for_ball_and_trivial_eps() {
        let grid = MeridianGrid::new(3, 128, 2.0).unwrap();
        let one = AxiFn::constant(&grid, 1.0);
        assert!(transform_identity_check(&one, 0.3) < 1e-9);
        // small grid: the second-derivative roundoff floor scales like N²
        let coarse = MeridianGrid::new(3, 32, 1.0).unwrap();
        let h = AxiFn::from_fn(&coarse, |pt| 1.0 + 0.05 * (2.0 * pt.theta).cos());
        let m = transform_identity_check(&h, 1.0);
        assert!(m < 1e-12, "{m:e}");
    }

    #[test]
    fn f_of_ball_at_unit_eps() {
        let grid = MeridianGrid::new(2, 64, 2.0).unwrap();
        let one = AxiFn::constant(&grid, 1.0);
        let params = ProblemParams {
            n: 2,
            p: -1.0,
            q: 0.5,
            alpha: 0.0,
            beta: 0.0,
            delta: 1.0,
            epsilon: 1.0,
        };
        let f = f_epsilon(&one, &params);
        assert!(f.values().iter().all(|v| (v - 1.0).abs() < 1e-14));
    }

    #[test]
    fn s0_for_the_ball() {
        let grid = MeridianGrid::new(2, 64, 1.0).unwrap();
        let one = AxiFn::constant(&grid, 1.0);
        let (region, ok) = s0_checks(&[&one], 1.0).unwrap();
        assert!((region.threshold - 0.5f64.sqrt()).abs() < 1e-15);
        assert!(ok[0]);
        assert!(S0Region::new(&grid, 1e8).threshold < 1e-7);
    }

    #[test]
    fn single_eps_construction_is_consistent() {
        let params = ProblemParams {
            n: 2,
            p: -1.0,
            q: 0.5,
            alpha: 0.0,
            beta: 0.0,
            delta: 0.75,
            epsilon: 0.3,
        };
        let grid = MeridianGrid::new(2, 128, 2.0).unwrap();
        let rec = construct_one(&params, &grid, &MaximizeOptions::default()).unwrap();
        assert!(rec.f_positive && rec.f_l1 > 0.0);
        assert!(rec.residual_constructed < 1e-6, "{}", rec.residual_constructed);
        assert!(rec.residual_variational < 1e-3);
        // Ṽ_q of λM⁻¹K_h from exact radial values of K_h
        let body = AlexandrovBody::new(&rec.h_eps);
        let eps = params.epsilon;
        let lambda = eps.powf(0.25 / 1.5);
        let rho = AxiFn::from_fn(&grid, |pt| {
            let m = (eps * pt.sin).hypot(pt.cos);
            let t = (eps * pt.sin).atan2(pt.cos);
            lambda * crate::sphere::RadialField::at(&body, t) / m
        });
        let oracle = dual_volume_radial(&rho, 0.5).unwrap();
        assert!((rec.dv_constructed / oracle - 1.0).abs() < 1e-6);
    }
}
