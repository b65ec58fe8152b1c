//! Variational solution of the dual L_p Minkowski equation
//!
//! ```text
//! H^{1−p}·|∇̄H|^{q−n}·det(∇²H + HI) = f,     p < 0 < q,
//! ```
//!
//! by maximizing J[h] = ∫ f h^p over support functions with Ṽ_q(K_h) = κ_n.
//! At a critical point the Lagrange condition reads
//! f h^{p−1} = c·|∇̄h|^{q−n} det(∇²h + hI) with c = J/(nκ_n), and
//! H = c^{1/(q−p)} h solves the equation.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::minkowski::newton;
use crate::quadrature::unit_ball_volume;
use crate::sphere::operators::{check_convex, gradient_norm_sq};
use crate::sphere::{alexandrov_radial, convexify, dual_volume_radial, monge_ampere, AxiFn, DualLpOperator};

/// J[g] = ∫ f g^p.
pub fn functional_j(g: &AxiFn, f: &AxiFn, p: f64) -> Result<f64> {
    if let Some(i) = g.values().iter().position(|v| !(*v > 0.0)) {
        return Err(Error::Domain(format!(
            "J needs a positive argument (node {i}, value {})",
            g.values()[i]
        )));
    }
    g.zip_with(f, |gv, fv| fv * gv.powf(p)).integral()
}

/// |∇̄h|^{q−n}·det(∇²h + hI).
fn dual_curvature(h: &AxiFn, q: f64) -> AxiFn {
    let n = h.grid().dim() as f64;
    let ma = monge_ampere(h).density;
    gradient_norm_sq(h).zip_with(&ma, |g2, m| g2.powf(0.5 * (q - n)) * m)
}

/// Ṽ_q(K_h) through the Gauss map: (1/n)∫ h·|∇̄h|^{q−n}·det(∇²h + hI).
/// Valid when h is a smooth convex support function.
pub fn dual_volume_of_support(h: &AxiFn, q: f64) -> Result<f64> {
    let n = h.grid().dim() as f64;
    Ok(h.zip_with(&dual_curvature(h, q), |a, b| a * b).integral()? / n)
}

/// Ṽ_q of the Alexandrov body of g, through its radial function.
pub fn dual_volume_of_alexandrov(g: &AxiFn, q: f64) -> Result<f64> {
    dual_volume_radial(&alexandrov_radial(g), q)
}

fn dual_volume_any(g: &AxiFn, q: f64) -> Result<f64> {
    if check_convex(g).is_ok() {
        dual_volume_of_support(g, q)
    } else {
        dual_volume_of_alexandrov(g, q)
    }
}

/// Scales g so that its Alexandrov body has Ṽ_q = κ_n.
pub fn normalize_to_constraint(g: &AxiFn, q: f64) -> Result<AxiFn> {
    let kappa = unit_ball_volume(g.grid().dim());
    let v = dual_volume_any(g, q)?;
    if !(v > 0.0) || !v.is_finite() {
        return Err(Error::Projection(format!("dual volume {v} cannot be normalized")));
    }
    Ok(g.scale((kappa / v).powf(1.0 / q)))
}

/// Relative defect |Φ(H) − f|/max(f, 1e−12·max f) on nodes where
/// f > 1e−12·max f; other nodes are skipped.
pub fn residual_of_values(phi: &[f64], f: &AxiFn) -> f64 {
    let floor = 1e-12 * f.max();
    phi.iter()
        .zip(f.values())
        .filter(|(_, fv)| **fv > floor)
        .fold(0.0f64, |m, (a, b)| m.max((a - b).abs() / b.max(floor)))
}

/// Relative nodewise defect of H in the dual L_p Minkowski equation.
pub fn residual(h: &AxiFn, f: &AxiFn, p: f64, q: f64) -> Result<f64> {
    check_convex(h)?;
    let phi = DualLpOperator::new(p, q).apply(h);
    Ok(residual_of_values(phi.values(), f))
}

#[derive(Clone, Copy, Debug)]
pub struct MaximizeOptions {
    /// Stop at this relative defect.
    pub tol: f64,
    pub max_iter: usize,
    /// Stop when J improves by less than this relative amount.
    pub stall: f64,
    pub max_halvings: usize,
}

impl Default for MaximizeOptions {
    fn default() -> Self {
        MaximizeOptions {
            tol: 1e-4,
            max_iter: 200,
            stall: 1e-12,
            max_halvings: 60,
        }
    }
}

/// One accepted iterate.
#[derive(Clone, Copy, Debug)]
pub struct IterateLog {
    pub iteration: usize,
    pub j_value: f64,
    pub residual: f64,
    pub constraint_gap: f64,
    pub step: f64,
    pub newton: bool,
}

#[derive(Clone, Debug)]
pub struct MaximizerState {
    /// Current support function, normalized and convex. Updates act on log h.
    pub h: AxiFn,
    pub j_value: f64,
    /// Ṽ_q(K_h) − κ_n.
    pub constraint_gap: f64,
    pub residual: f64,
    pub iteration: usize,
    pub converged: bool,
    pub log: Vec<IterateLog>,
}

struct Eval {
    h: AxiFn,
    j: f64,
    c: f64,
    big_h: AxiFn,
    residual: f64,
    gap: f64,
}

fn evaluate(h: AxiFn, f: &AxiFn, p: f64, q: f64) -> Result<Eval> {
    let n = h.grid().dim();
    let kappa = unit_ball_volume(n);
    let j = functional_j(&h, f, p)?;
    let c = j / (n as f64 * kappa);
    let big_h = h.scale(c.powf(1.0 / (q - p)));
    let phi = DualLpOperator::new(p, q).apply(&big_h);
    let residual = residual_of_values(phi.values(), f);
    let gap = dual_volume_of_support(&h, q)? - kappa;
    Ok(Eval {
        h,
        j,
        c,
        big_h,
        residual,
        gap,
    })
}

/// Candidate h·exp(τ·d/h), convexified and normalized.
fn candidate(h: &AxiFn, d: &[f64], tau: f64, q: f64) -> Option<AxiFn> {
    let v: Vec<f64> = h
        .values()
        .iter()
        .zip(d)
        .map(|(hv, dv)| hv * (tau * dv / hv).exp())
        .collect();
    if v.iter().any(|x| !x.is_finite() || *x <= 0.0) {
        return None;
    }
    let g = AxiFn::new(h.grid().clone(), v).ok()?;
    let g = convexify(&g);
    if check_convex(&g).is_err() {
        return None;
    }
    normalize_to_constraint(&g, q).ok()
}

/// Maximizes J[h] = ∫ f h^p subject to Ṽ_q(K_h) = κ_n.
///
/// Each iteration proposes the Newton correction of the extracted solution
/// H = c^{1/(q−p)}h for Φ(H) = f, applied multiplicatively to h, and falls
/// back to the preconditioned ascent direction −h·D/(f h^{p−1} + cΨ), where
/// D = f h^{p−1} − cΨ is the Lagrange defect. Steps are halved until J does
/// not decrease; candidates are convexified and renormalized before scoring.
pub fn maximize(f: &AxiFn, p: f64, q: f64, init: &AxiFn, opts: &MaximizeOptions) -> Result<MaximizerState> {
    if !(p < 0.0) || !(q > 0.0) {
        return Err(Error::Admissibility {
            key: "p",
            inequality: "p < 0 < q".into(),
            detail: format!("p = {p}, q = {q}"),
        });
    }
    if let Some(i) = f.values().iter().position(|v| !(*v >= 0.0)) {
        return Err(Error::Domain(format!("f must be nonnegative (node {i})")));
    }
    if !(f.integral()? > 0.0) {
        return Err(Error::Domain("f must have positive mass".into()));
    }
    let op = DualLpOperator::new(p, q);
    let start = normalize_to_constraint(&convexify(init), q)?;
    let mut cur = evaluate(start, f, p, q)?;
    let mut log = vec![IterateLog {
        iteration: 0,
        j_value: cur.j,
        residual: cur.residual,
        constraint_gap: cur.gap,
        step: 0.0,
        newton: false,
    }];
    let mut converged = cur.residual <= opts.tol;
    let mut iteration = 0;
    while !converged && iteration < opts.max_iter {
        iteration += 1;
        let scale = cur.c.powf(1.0 / (q - p));
        let mut directions: Vec<(Vec<f64>, bool)> = Vec::with_capacity(2);
        let (phi, jac) = op.linearize(&cur.big_h);
        let rhs = nalgebra::DVector::from_iterator(
            phi.len(),
            phi.iter().zip(f.values()).map(|(a, b)| b - a),
        );
        if let Some(step) = jac.lu().solve(&rhs) {
            if step.iter().all(|v| v.is_finite()) {
                directions.push((step.iter().map(|v| v / scale).collect(), true));
            }
        }
        let psi = dual_curvature(&cur.h, q);
        let pre: Vec<f64> = (0..f.len())
            .map(|i| {
                let hv = cur.h.values()[i];
                let a = f.values()[i] * hv.powf(p - 1.0);
                let b = cur.c * psi.values()[i];
                -hv * (a - b) / (a.abs() + b.abs()).max(f64::MIN_POSITIVE)
            })
            .collect();
        directions.push((pre, false));

        let mut next = None;
        let mut best_drop = f64::INFINITY;
        'dirs: for (d, is_newton) in &directions {
            let mut tau = 1.0;
            for _ in 0..=opts.max_halvings {
                if let Some(g) = candidate(&cur.h, d, tau, q) {
                    if let Ok(ev) = evaluate(g, f, p, q) {
                        if ev.j >= cur.j && ev.residual.is_finite() {
                            next = Some((ev, tau, *is_newton));
                            break 'dirs;
                        }
                        best_drop = best_drop.min((cur.j - ev.j) / cur.j.abs());
                    }
                }
                tau *= 0.5;
            }
        }
        match next {
            Some((ev, tau, is_newton)) => {
                let gain = (ev.j - cur.j) / cur.j.abs();
                cur = ev;
                log.push(IterateLog {
                    iteration,
                    j_value: cur.j,
                    residual: cur.residual,
                    constraint_gap: cur.gap,
                    step: tau,
                    newton: is_newton,
                });
                if cur.residual <= opts.tol || gain < opts.stall {
                    converged = true;
                }
            }
            None => {
                // J is flat to rounding along every direction: stalled
                if best_drop <= opts.stall {
                    converged = true;
                    break;
                }
                return Err(Error::StepCollapse {
                    iteration,
                    halvings: opts.max_halvings,
                    j_value: cur.j,
                    residual: cur.residual,
                });
            }
        }
    }
    Ok(MaximizerState {
        h: cur.h,
        j_value: cur.j,
        constraint_gap: cur.gap,
        residual: cur.residual,
        iteration,
        converged,
        log,
    })
}

#[derive(Clone, Debug)]
pub struct SolutionRecord {
    pub h: AxiFn,
    pub c: f64,
    pub big_h: AxiFn,
    pub residual: f64,
    /// Ṽ_q(K_H) computed from the radial function of H.
    pub dual_volume_h: f64,
}

/// c = (1/(nκ_n))∫f h^p and H = c^{1/(q−p)}h from a maximizer.
pub fn extract_solution(state: &MaximizerState, f: &AxiFn, p: f64, q: f64) -> Result<SolutionRecord> {
    let n = f.grid().dim();
    let c = functional_j(&state.h, f, p)? / (n as f64 * unit_ball_volume(n));
    let big_h = state.h.scale(c.powf(1.0 / (q - p)));
    let res = residual(&big_h, f, p, q)?;
    let dual_volume_h = dual_volume_of_alexandrov(&big_h, q)?;
    Ok(SolutionRecord {
        h: state.h.clone(),
        c,
        big_h,
        residual: res,
        dual_volume_h,
    })
}

/// Damped Newton on the discrete equation from a nearby H0.
pub fn newton_local_solve(f: &AxiFn, p: f64, q: f64, h0: &AxiFn) -> Result<AxiFn> {
    let op = DualLpOperator::new(p, q);
    let r0 = residual_of_values(op.apply(h0).values(), f);
    if !(r0 < 0.5) {
        return Err(Error::Divergence(format!(
            "starting residual {r0:.3e} is outside the local basin (needs < 0.5)"
        )));
    }
    let measure = |phi: &[f64]| residual_of_values(phi, f);
    let h = newton(f, h0.clone(), &op, &measure, 1e-12, 1e-6)?;
    check_convex(&h)?;
    Ok(h)
}

/// Central difference of Ṽ_q(K_{h+tη}) at t = 0 against (q/n)∫η|∇̄h|^{q−n}det(∇²h + hI).
#[derive(Clone, Copy, Debug)]
pub struct VariationCheck {
    pub fd: f64,
    pub formula: f64,
    /// (q/n)∫|η|·|∇̄h|^{q−n}det(∇²h + hI), a cancellation-free scale.
    pub scale: f64,
}

impl VariationCheck {
    pub fn rel_error(&self) -> f64 {
        (self.fd - self.formula).abs() / self.formula.abs().max(self.scale)
    }
}

pub fn variation_check(h: &AxiFn, direction: &AxiFn, q: f64, step: f64) -> Result<VariationCheck> {
    check_convex(h)?;
    let n = h.grid().dim() as f64;
    let vols: Vec<Result<f64>> = [step, -step]
        .par_iter()
        .map(|&t| {
            let g = h.zip_with(direction, |a, b| a + t * b);
            dual_volume_of_alexandrov(&g, q)
        })
        .collect();
    let (vp, vm) = match (&vols[0], &vols[1]) {
        (Ok(a), Ok(b)) => (*a, *b),
        _ => return Err(Error::Domain("perturbed body is not star-shaped about the origin".into())),
    };
    let psi = dual_curvature(h, q);
    let formula = q / n * direction.zip_with(&psi, |a, b| a * b).integral()?;
    let scale = q / n * direction.zip_with(&psi, |a, b| a.abs() * b).integral()?;
    Ok(VariationCheck {
        fd: (vp - vm) / (2.0 * step),
        formula,
        scale,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sphere::MeridianGrid;
    use std::f64::consts::PI;

    #[test]
    fn j_of_constants() {
        let g = MeridianGrid::new(3, 64, 2.0).unwrap();
        let one = AxiFn::constant(&g, 1.0);
        assert!((functional_j(&one, &one, -1.0).unwrap() - 4.0 * PI).abs() < 1e-12);
        let two = AxiFn::constant(&g, 2.0);
        assert!((functional_j(&two, &one, -1.0).unwrap() - 2.0 * PI).abs() < 1e-12);
        assert!(functional_j(&AxiFn::constant(&g, 0.0), &one, -1.0).is_err());
    }

    #[test]
    fn normalization_of_constants() {
        let g = MeridianGrid::new(3, 64, 2.0).unwrap();
        for q in [0.5, 1.0, 2.5] {
            let h = normalize_to_constraint(&AxiFn::constant(&g, 2.0), q).unwrap();
            assert!(h.values().iter().all(|v| (v - 1.0).abs() < 1e-13));
        }
    }

    #[test]
    fn residual_of_scaled_ball() {
        let g = MeridianGrid::new(3, 64, 2.0).unwrap();
        let (p, q, lambda) = (-1.5, 0.7, 1.7f64);
        let h = AxiFn::constant(&g, lambda);
        let f = AxiFn::constant(&g, lambda.powf(q - p));
        assert!(residual(&h, &f, p, q).unwrap() < 1e-13);
    }

    #[test]
    fn uniform_inflation_of_ball() {
        let g = MeridianGrid::new(3, 64, 2.0).unwrap();
        let one = AxiFn::constant(&g, 1.0);
        let v = variation_check(&one, &one, 3.0, 1e-4).unwrap();
        let expected = 4.0 * PI;
        assert!((v.formula - expected).abs() < 1e-12);
        assert!((v.fd - expected).abs() < 1e-6);
    }

    #[test]
    fn planar_cosine_variation() {
        let g = MeridianGrid::new(2, 128, 2.0).unwrap();
        let one = AxiFn::constant(&g, 1.0);
        let eta = AxiFn::from_fn(&g, |pt| (2.0 * pt.theta).cos());
        let v = variation_check(&one, &eta, 1.0, 1e-4).unwrap();
        assert!((v.fd - v.formula).abs() < 1e-6, "{v:?}");
        let w = variation_check(&one, &eta.scale(-1.0), 1.0, 1e-4).unwrap();
        assert!((w.fd + v.fd).abs() < 1e-12 && (w.formula + v.formula).abs() < 1e-12);
    }

    #[test]
    fn newton_recovers_ball() {
        let g = MeridianGrid::new(3, 64, 2.0).unwrap();
        let f = AxiFn::constant(&g, 1.0);
        let h = newton_local_solve(&f, -1.0, 2.0, &AxiFn::constant(&g, 1.01)).unwrap();
        assert!(h.values().iter().all(|v| (v - 1.0).abs() < 1e-10));
    }

    #[test]
    fn constant_data_maximizer() {
        let g = MeridianGrid::new(3, 64, 2.0).unwrap();
        let f = AxiFn::constant(&g, 1.0);
        let init = AxiFn::from_fn(&g, |pt| 1.0 + 0.2 * pt.cos * pt.cos);
        let st = maximize(&f, -2.0, 1.0, &init, &MaximizeOptions { tol: 1e-8, ..Default::default() }).unwrap();
        assert!(st.h.values().iter().all(|v| (v - 1.0).abs() < 1e-3));
        assert!(st.log.windows(2).all(|w| w[1].j_value >= w[0].j_value));
    }
}
