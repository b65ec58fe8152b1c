//! The classical Minkowski problem det(∇²h + hI) = g for even axisymmetric data.
//!
//! In the meridian chart the equation is the two-point problem
//! (h″ + h)(h′cotθ + h)^{n−2} = g with h′ = 0 at both ends, which the cosine
//! basis imposes automatically. In the plane it is linear.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::fit::log_log_slope;
use crate::sphere::operators::check_convex;
use crate::sphere::{monge_ampere, AxiFn, DualLpOperator, MeridianGrid, ProblemParams};

pub const MAX_NEWTON: usize = 40;
const ARMIJO: f64 = 1e-4;

/// Right-hand side |x′|^α|x_n|^β|M_ε x|^{−p−δ−1−β} of the classical problem.
#[derive(Clone, Debug)]
pub struct MinkowskiRhs {
    pub params: ProblemParams,
    pub values: AxiFn,
}

/// Samples the construction's classical data with |M_ε x| = √(ε²sin²θ + cos²θ).
pub fn rhs_classical(params: &ProblemParams, grid: &Arc<MeridianGrid>) -> Result<MinkowskiRhs> {
    params.check_standing()?;
    params.check_weights()?;
    if !(params.epsilon > 0.0 && params.epsilon <= 1.0) {
        return Err(Error::Domain(format!(
            "epsilon must lie in (0, 1], got {}",
            params.epsilon
        )));
    }
    if grid.dim() != params.n {
        return Err(Error::Domain(format!(
            "grid dimension {} does not match n = {}",
            grid.dim(),
            params.n
        )));
    }
    let eps = params.epsilon;
    let expo = -(params.p + params.delta + 1.0 + params.beta);
    let values = AxiFn::from_fn(grid, |pt| {
        let w = pt.sin.powf(params.alpha) * pt.cos.powf(params.beta);
        w * (eps * pt.sin).hypot(pt.cos).powf(expo)
    });
    Ok(MinkowskiRhs {
        params: *params,
        values,
    })
}

/// Relative sup-norm defect ‖det(∇²h + hI) − g‖∞/‖g‖∞.
pub fn minkowski_residual(h: &AxiFn, g: &AxiFn) -> f64 {
    let ma = monge_ampere(h).density;
    sup_defect(ma.values(), g.values()) / g.max_abs()
}

/// Solves h″ + h = g, with one step of iterative refinement.
fn solve_planar(g: &AxiFn) -> Result<AxiFn> {
    let grid = g.grid();
    let (_, d2) = grid.diff_matrices();
    let lu = (d2 + DMatrix::identity(grid.len(), grid.len())).lu();
    let rhs = DVector::from_column_slice(g.values());
    let mut x = lu
        .solve(&rhs)
        .ok_or_else(|| Error::Divergence("singular planar operator".into()))?;
    let r = &rhs - (d2 * &x + &x);
    if let Some(dx) = lu.solve(&r) {
        x += dx;
    }
    AxiFn::new(grid.clone(), x.as_slice().to_vec())
}

/// Solves det(∇²h + hI) = g for h > 0 convex.
pub fn solve_minkowski(g: &AxiFn) -> Result<AxiFn> {
    if let Some(i) = g.values().iter().position(|v| !(*v >= 0.0) || !v.is_finite()) {
        return Err(Error::Domain(format!(
            "right-hand side must be finite and nonnegative (node {i}, value {})",
            g.values()[i]
        )));
    }
    if !(g.max() > 0.0) {
        return Err(Error::Domain("right-hand side vanishes identically".into()));
    }
    let n = g.grid().dim();
    if n == 2 {
        let h = solve_planar(g)?;
        check_convex(&h)?;
        return Ok(h);
    }
    let start = solve_planar(&g.map(|v| v.powf(1.0 / (n as f64 - 1.0))))?;
    let scale = g.max_abs();
    let measure = |phi: &[f64]| sup_defect(phi, g.values()) / scale;
    let h = newton(g, start, &DualLpOperator::new(1.0, n as f64), &measure, 1e-13, 1e-6)?;
    check_convex(&h)?;
    Ok(h)
}

fn sup_defect(phi: &[f64], f: &[f64]) -> f64 {
    phi.iter()
        .zip(f)
        .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()))
}

/// Damped Newton on op(h) = f from `h`.
///
/// `measure` maps op(h) to a scalar defect. Steps are halved until the
/// defect drops by the Armijo factor; iteration stops at `tol`, after
/// `MAX_NEWTON` steps, or when no step reduces the defect. A final defect
/// above `required` is an error.
pub(crate) fn newton(
    f: &AxiFn,
    mut h: AxiFn,
    op: &DualLpOperator,
    measure: &dyn Fn(&[f64]) -> f64,
    tol: f64,
    required: f64,
) -> Result<AxiFn> {
    let grid = f.grid().clone();
    let mut res = measure(op.apply(&h).values());
    if !res.is_finite() {
        return Err(Error::Divergence("non-finite defect at the starting point".into()));
    }
    let mut iterations = 0;
    while res > tol && iterations < MAX_NEWTON {
        iterations += 1;
        let (phi, jac): (Vec<f64>, DMatrix<f64>) = op.linearize(&h);
        let rhs = DVector::from_iterator(phi.len(), phi.iter().zip(f.values()).map(|(a, b)| b - a));
        let step = jac
            .lu()
            .solve(&rhs)
            .ok_or_else(|| Error::Divergence("singular Newton matrix".into()))?;
        let mut t = 1.0;
        let mut accepted = None;
        for _ in 0..30 {
            let trial: Vec<f64> = h.values().iter().zip(step.iter()).map(|(a, b)| a + t * b).collect();
            if trial.iter().all(|v| *v > 0.0) {
                let cand = AxiFn::new(grid.clone(), trial)?;
                let r = measure(op.apply(&cand).values());
                if r.is_finite() && r <= (1.0 - ARMIJO * t) * res {
                    accepted = Some((cand, r));
                    break;
                }
            }
            t *= 0.5;
        }
        match accepted {
            Some((cand, r)) => {
                h = cand;
                res = r;
            }
            None => break,
        }
    }
    if res > required {
        return Err(Error::Stagnation {
            iterations,
            residual: res,
        });
    }
    Ok(h)
}

/// Envelope bounds of a family of solutions across a sweep.
#[derive(Clone, Debug)]
pub struct HBoundsReport {
    /// (ε, min h_ε, max h_ε)
    pub rows: Vec<(f64, f64, f64)>,
    pub slope_max: Option<f64>,
    pub slope_min: Option<f64>,
    /// False when the sweep is too short to fit a trend.
    pub sufficient: bool,
    pub pass: bool,
}

/// Fits log(max h_ε) and log(min h_ε) against log ε; no drift means both
/// slopes are at most 0.05 in magnitude. A trend needs at least three
/// values of ε spanning a factor of 8.
pub fn verify_h_bounds(sweep: &[(f64, &AxiFn)]) -> HBoundsReport {
    let rows: Vec<(f64, f64, f64)> = sweep.iter().map(|(e, h)| (*e, h.min(), h.max())).collect();
    let span = {
        let lo = rows.iter().map(|r| r.0).fold(f64::INFINITY, f64::min);
        let hi = rows.iter().map(|r| r.0).fold(0.0, f64::max);
        hi / lo
    };
    if rows.len() < 3 || span < 8.0 * (1.0 - 1e-12) {
        return HBoundsReport {
            rows,
            slope_max: None,
            slope_min: None,
            sufficient: false,
            pass: false,
        };
    }
    let eps: Vec<f64> = rows.iter().map(|r| r.0).collect();
    let mins: Vec<f64> = rows.iter().map(|r| r.1).collect();
    let maxs: Vec<f64> = rows.iter().map(|r| r.2).collect();
    let smax = log_log_slope(&eps, &maxs);
    let smin = log_log_slope(&eps, &mins);
    HBoundsReport {
        rows,
        slope_max: Some(smax),
        slope_min: Some(smin),
        sufficient: true,
        pass: smax.abs() <= 0.05 && smin.abs() <= 0.05,
    }
}
