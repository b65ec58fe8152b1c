//! Integrals over rotational ellipsoids and their asymptotic exponents.
//!
//! For A = A(r, a) the two integrals
//!
//! ```text
//! N(A) = ∫ |A⁻¹x|^{−q},      F(A) = ∫ |x′|^α |x_n|^β |Ax|^p
//! ```
//!
//! control the size of minimum ellipsoids of admissible bodies. Pinning
//! N(A) = nκ_n fixes r as a function of a; along such normalized families F
//! decays as a power of a (sometimes with a logarithmic factor) when the
//! ellipsoid degenerates.

use std::f64::consts::FRAC_PI_2;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fit::linear_fit;
use crate::quadrature::{meridian_integral, unit_ball_volume};
use crate::sphere::RotEllipsoid;

/// Which way the ellipsoid degenerates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ARegime {
    /// a > 3: flattening towards the equatorial plane.
    A1,
    /// 1/3 ≤ a ≤ 3: bounded band.
    A2,
    /// a < 1/3: stretching along the axis.
    A3,
}

impl ARegime {
    pub fn of(a: f64) -> Self {
        if a > 3.0 {
            ARegime::A1
        } else if a < 1.0 / 3.0 {
            ARegime::A3
        } else {
            ARegime::A2
        }
    }
}

/// Position of a quantity relative to its critical value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    Below,
    Critical,
    Above,
}

impl Branch {
    fn of(x: f64, critical: f64) -> Self {
        if (x - critical).abs() <= 1e-12 * critical.abs().max(1.0) {
            Branch::Critical
        } else if x < critical {
            Branch::Below
        } else {
            Branch::Above
        }
    }
}

/// Full regime label: a-regime, branch of q (against 1 in A1, n − 1 in A3)
/// and sign of p + α + n − 1 (A1) or β + p + 1 (A3).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RegimeLabel {
    pub a_regime: ARegime,
    pub q_branch: Branch,
    pub sign_branch: Branch,
}

/// Exponent data of a law C·a^power·|log a|^log_power.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Exponent {
    pub power: f64,
    pub log_power: f64,
}

impl Exponent {
    fn pure(power: f64) -> Self {
        Exponent {
            power,
            log_power: 0.0,
        }
    }

    pub fn has_log(&self) -> bool {
        self.log_power != 0.0
    }
}

/// Parameters of the F(A) integrand together with the normalization power.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FParams {
    pub n: usize,
    pub p: f64,
    pub q: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl FParams {
    pub fn check(&self) -> Result<()> {
        let n = self.n as f64;
        if self.n < 2 {
            return Err(Error::Domain(format!("dimension must be >= 2, got {}", self.n)));
        }
        if !(self.alpha > 1.0 - n) {
            return Err(Error::Admissibility {
                key: "alpha",
                inequality: "alpha > 1-n".into(),
                detail: format!("alpha = {}", self.alpha),
            });
        }
        if !(self.beta > -1.0) {
            return Err(Error::Admissibility {
                key: "beta",
                inequality: "beta > -1".into(),
                detail: format!("beta = {}", self.beta),
            });
        }
        if !(self.q > 0.0) {
            return Err(Error::Admissibility {
                key: "q",
                inequality: "q > 0".into(),
                detail: format!("q = {}", self.q),
            });
        }
        Ok(())
    }

    pub fn label(&self, regime: ARegime) -> RegimeLabel {
        let n = self.n as f64;
        let (q_branch, sign_branch) = match regime {
            ARegime::A1 => (
                Branch::of(self.q, 1.0),
                Branch::of(self.p + self.alpha + n - 1.0, 0.0),
            ),
            ARegime::A3 => (
                Branch::of(self.q, n - 1.0),
                Branch::of(self.beta + self.p + 1.0, 0.0),
            ),
            ARegime::A2 => (Branch::Critical, Branch::Critical),
        };
        RegimeLabel {
            a_regime: regime,
            q_branch,
            sign_branch,
        }
    }
}

/// Break points where integrands in the (r, a) family change scale.
fn scale_breaks(a: f64) -> Vec<f64> {
    let s = a.min(1.0 / a);
    let mut out = Vec::new();
    for k in [1.0, 10.0, 100.0] {
        let b = s * k;
        if b < 0.25 {
            out.push(b);
            out.push(FRAC_PI_2 - b);
        }
    }
    out
}

/// ∫_{S^{n−1}} |A⁻¹x|^{−q}.
pub fn normalization_integral(e: RotEllipsoid, n: usize, q: f64) -> f64 {
    let nf = n as f64;
    let a = e.a;
    // |A⁻¹x| = r⁻¹a^{1−1/n}√(a⁻²sin²θ + cos²θ)
    let pre = (e.r * a.powf(1.0 / nf - 1.0)).powf(q);
    let inv_a = 1.0 / a;
    pre * meridian_integral(n, &scale_breaks(a), |pt| {
        (inv_a * pt.sin).hypot(pt.cos).powf(-q)
    })
}

/// r with normalization_integral(A(r, a)) = target.
pub fn solve_r_for_normalization(a: f64, n: usize, q: f64, target: f64) -> Result<f64> {
    if !(a > 0.0) || !(target > 0.0) || !(q > 0.0) {
        return Err(Error::Domain(format!(
            "normalization needs a, q, target > 0 (a = {a}, q = {q}, target = {target})"
        )));
    }
    let unit = normalization_integral(RotEllipsoid { r: 1.0, a }, n, q);
    Ok((target / unit).powf(1.0 / q))
}

/// The window [Λ⁻¹, Λ] with Λ = max{n^{q+1}κ_n, (nκ_n)⁻¹}.
pub fn normalization_window(n: usize, q: f64) -> (f64, f64) {
    let k = unit_ball_volume(n);
    let nf = n as f64;
    let lambda = (nf.powf(q + 1.0) * k).max(1.0 / (nf * k));
    (1.0 / lambda, lambda)
}

/// F(A) = ∫ |x′|^α|x_n|^β|Ax|^p.
pub fn f_of_a(e: RotEllipsoid, fp: &FParams) -> Result<f64> {
    fp.check()?;
    let nf = fp.n as f64;
    let a = e.a;
    // |Ax| = r a^{1/n} √(sin²θ + a⁻²cos²θ)
    let pre = (e.r * a.powf(1.0 / nf)).powf(fp.p);
    let inv_a = 1.0 / a;
    let v = meridian_integral(fp.n, &scale_breaks(a), |pt| {
        let w = if fp.alpha == 0.0 { 1.0 } else { pt.sin.powf(fp.alpha) }
            * if fp.beta == 0.0 { 1.0 } else { pt.cos.powf(fp.beta) };
        w * pt.sin.hypot(inv_a * pt.cos).powf(fp.p)
    });
    Ok(pre * v)
}

/// Growth law of the normalized r in a degenerate regime.
pub fn predicted_r_exponent(n: usize, q: f64, regime: ARegime) -> Result<Exponent> {
    let nf = n as f64;
    match regime {
        ARegime::A1 => Ok(match Branch::of(q, 1.0) {
            Branch::Below => Exponent::pure(1.0 - 1.0 / nf),
            Branch::Critical => Exponent {
                power: 1.0 - 1.0 / nf,
                log_power: -1.0 / q,
            },
            Branch::Above => Exponent::pure(1.0 / q - 1.0 / nf),
        }),
        ARegime::A3 => Ok(match Branch::of(q, nf - 1.0) {
            Branch::Below => Exponent::pure(-1.0 / nf),
            Branch::Critical => Exponent {
                power: -1.0 / nf,
                log_power: -1.0 / q,
            },
            Branch::Above => Exponent::pure((nf - 1.0) * (q - nf) / (nf * q)),
        }),
        ARegime::A2 => Err(Error::Domain(
            "the bounded band has no growth exponent".into(),
        )),
    }
}

/// Decay law of F along the normalized family in a degenerate regime.
pub fn predicted_f_exponent(fp: &FParams, regime: ARegime) -> Result<Exponent> {
    let n = fp.n as f64;
    let (p, q) = (fp.p, fp.q);
    let label = fp.label(regime);
    let e = match regime {
        ARegime::A1 => {
            let s = p + fp.alpha + n - 1.0;
            let (base, log_base) = match label.q_branch {
                Branch::Below => (p, 0.0),
                Branch::Critical => (p, -p),
                Branch::Above => (p / q, 0.0),
            };
            match label.sign_branch {
                Branch::Above => Exponent {
                    power: base,
                    log_power: log_base,
                },
                Branch::Critical => Exponent {
                    power: base,
                    log_power: log_base + 1.0,
                },
                Branch::Below => Exponent {
                    power: base - s,
                    log_power: log_base,
                },
            }
        }
        ARegime::A3 => {
            let s = fp.beta + p + 1.0;
            let (base, log_base) = match label.q_branch {
                Branch::Below => (-p, 0.0),
                Branch::Critical => (-p, -p / (n - 1.0)),
                Branch::Above => (p * (1.0 - n) / q, 0.0),
            };
            match label.sign_branch {
                Branch::Above => Exponent {
                    power: base,
                    log_power: log_base,
                },
                Branch::Critical => Exponent {
                    power: base,
                    log_power: log_base + 1.0,
                },
                Branch::Below => Exponent {
                    power: base + s,
                    log_power: log_base,
                },
            }
        }
        ARegime::A2 => {
            return Err(Error::Domain(
                "the bounded band has no decay exponent".into(),
            ))
        }
    };
    Ok(e)
}

/// One row of a decay sweep.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepPoint {
    pub a: f64,
    pub r: f64,
    pub f: f64,
}

/// Measured against predicted log-log slope of F over a sweep of a.
#[derive(Clone, Debug, PartialEq)]
pub struct SlopeFit {
    pub label: RegimeLabel,
    pub rows: Vec<SweepPoint>,
    /// (log a, log F − L·log|log a|) pairs actually fitted.
    pub points: Vec<(f64, f64)>,
    pub fitted_slope: f64,
    pub predicted: Exponent,
    pub rel_error: f64,
    /// F decreases strictly along the sweep (towards the degenerate end).
    pub monotone: bool,
    /// Predicted exponent 0: reported, not asserted.
    pub degenerate: bool,
}

impl SlopeFit {
    pub fn within_tolerance(&self) -> bool {
        (self.fitted_slope - self.predicted.power).abs()
            <= 0.15 * self.predicted.power.abs() + 0.05
    }

    pub fn passes(&self) -> bool {
        self.degenerate || self.within_tolerance()
    }
}

/// Evaluates F along a normalized sweep and fits its decay exponent.
pub fn verify_decay(fp: &FParams, regime: ARegime, a_sweep: &[f64]) -> Result<SlopeFit> {
    fp.check()?;
    if a_sweep.len() < 4 {
        return Err(Error::InsufficientSweep(format!(
            "need at least 4 sweep points, got {}",
            a_sweep.len()
        )));
    }
    let deep = match regime {
        ARegime::A1 => a_sweep.iter().all(|&a| a >= 1e2),
        ARegime::A3 => a_sweep.iter().all(|&a| a <= 1e-2),
        ARegime::A2 => false,
    };
    if !deep {
        return Err(Error::InsufficientSweep(format!(
            "sweep points must lie deep in {regime:?} (a >= 1e2 for A1, a <= 1e-2 for A3)"
        )));
    }
    let predicted = predicted_f_exponent(fp, regime)?;
    let target = fp.n as f64 * unit_ball_volume(fp.n);
    let rows = a_sweep
        .par_iter()
        .map(|&a| {
            let r = solve_r_for_normalization(a, fp.n, fp.q, target)?;
            let f = f_of_a(RotEllipsoid { r, a }, fp)?;
            Ok(SweepPoint { a, r, f })
        })
        .collect::<Result<Vec<_>>>()?;
    let points: Vec<(f64, f64)> = rows
        .iter()
        .map(|pt| {
            let la = pt.a.ln();
            (la, pt.f.ln() - predicted.log_power * la.abs().ln())
        })
        .collect();
    let (x, y): (Vec<f64>, Vec<f64>) = points.iter().copied().unzip();
    let (fitted_slope, _) = linear_fit(&x, &y);
    // order by distance into the degenerate end
    let mut by_depth = rows.clone();
    by_depth.sort_by(|u, v| u.a.ln().abs().partial_cmp(&v.a.ln().abs()).unwrap());
    let monotone = by_depth.windows(2).all(|w| w[1].f < w[0].f);
    let rel_error =
        (fitted_slope - predicted.power).abs() / predicted.power.abs().max(0.1);
    Ok(SlopeFit {
        label: fp.label(regime),
        rows,
        points,
        fitted_slope,
        predicted,
        rel_error,
        monotone,
        degenerate: predicted.power.abs() < 1e-12,
    })
}

/// max F / min F over normalized ellipsoids with a in the bounded band.
pub fn band_ratio(fp: &FParams, a_values: &[f64]) -> Result<f64> {
    if a_values.iter().any(|&a| ARegime::of(a) != ARegime::A2) {
        return Err(Error::Domain("band sweep must stay in [1/3, 3]".into()));
    }
    let target = fp.n as f64 * unit_ball_volume(fp.n);
    let values = a_values
        .par_iter()
        .map(|&a| {
            let r = solve_r_for_normalization(a, fp.n, fp.q, target)?;
            f_of_a(RotEllipsoid { r, a }, fp)
        })
        .collect::<Result<Vec<_>>>()?;
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(max / min)
}

/// The case matrix over both degenerate regimes, every q branch and every
/// sign branch, at n = 2 and n = 3 with p = −1. Each entry keeps α, β inside
/// their admissibility windows.
pub fn regime_matrix() -> Vec<(FParams, ARegime)> {
    let p = -1.0;
    let mut out = Vec::new();
    let a1: [(usize, f64, [f64; 3]); 6] = [
        (2, 0.5, [2.0, 0.0, -0.5]),
        (2, 1.0, [2.0, 0.0, -0.5]),
        (2, 2.0, [2.0, 0.0, -0.25]),
        (3, 0.5, [0.0, -1.0, -1.5]),
        (3, 1.0, [0.0, -1.0, -1.5]),
        (3, 2.0, [0.0, -1.0, -1.25]),
    ];
    for (n, q, alphas) in a1 {
        for alpha in alphas {
            out.push((FParams { n, p, q, alpha, beta: 0.0 }, ARegime::A1));
        }
    }
    let a3: [(usize, f64, [f64; 3]); 6] = [
        (2, 0.5, [2.0, 0.0, -0.5]),
        (2, 1.0, [2.0, 0.0, -0.5]),
        (2, 2.0, [2.0, 0.0, -0.25]),
        (3, 1.0, [2.0, 0.0, -0.5]),
        (3, 2.0, [2.0, 0.0, -0.5]),
        (3, 3.0, [2.0, 0.0, -1.0 / 3.0]),
    ];
    for (n, q, betas) in a3 {
        for beta in betas {
            out.push((FParams { n, p, q, alpha: 0.0, beta }, ARegime::A3));
        }
    }
    out
}

/// Geometric sweep from `start` by factor `ratio`.
pub fn geometric_sweep(start: f64, ratio: f64, count: usize) -> Vec<f64> {
    (0..count).map(|k| start * ratio.powi(k as i32)).collect()
}
