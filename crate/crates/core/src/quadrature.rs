//! Scalar quadrature on the meridian: sphere constants, double-exponential
//! (tanh-sinh) rules for endpoint-singular integrands, and the adaptive
//! meridian integral used wherever an integrand is known in closed form.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

/// Γ(m/2) for a positive integer m.
pub fn gamma_half(m: usize) -> f64 {
    assert!(m > 0, "gamma_half needs a positive argument");
    if m % 2 == 0 {
        // (m/2 - 1)!
        (1..m / 2).fold(1.0, |acc, k| acc * k as f64)
    } else {
        let mut g = PI.sqrt();
        let mut x = 0.5;
        while x < m as f64 / 2.0 - 0.25 {
            g *= x;
            x += 1.0;
        }
        g
    }
}

/// Volume of the unit ball in R^n.
pub fn unit_ball_volume(n: usize) -> f64 {
    PI.powf(n as f64 / 2.0) / gamma_half(n + 2)
}

/// Surface area of the unit sphere S^{m-1} in R^m; `sphere_area(1)` = 2 counts S^0.
pub fn sphere_area(m: usize) -> f64 {
    2.0 * PI.powf(m as f64 / 2.0) / gamma_half(m)
}

/// Factor 2 ω_{n-2} turning a meridian integral over [0, π/2] into an integral
/// over S^{n-1} for even axisymmetric integrands.
pub fn meridian_factor(n: usize) -> f64 {
    2.0 * sphere_area(n - 1)
}

const TS_MAX_LEVEL: usize = 12;
const TS_T_MAX: f64 = 6.5;

/// Tanh-sinh quadrature of `f` over [a, b].
///
/// The integrand receives `(x, x - a, b - x)` so that it can evaluate
/// endpoint-singular factors from the exact distances instead of from a
/// rounded `x`.
pub fn tanh_sinh<F>(f: F, a: f64, b: f64, rel_tol: f64) -> f64
where
    F: Fn(f64, f64, f64) -> f64,
{
    let half = 0.5 * (b - a);
    if half <= 0.0 {
        return 0.0;
    }
    let node = |t: f64| -> Option<(f64, f64, f64, f64)> {
        let u = FRAC_PI_2 * t.sinh();
        // distances to the endpoints without cancellation
        let da = 2.0 * half / (1.0 + (2.0 * u).exp());
        let db = 2.0 * half / (1.0 + (-2.0 * u).exp());
        if da <= 0.0 || db <= 0.0 {
            return None;
        }
        let cu = u.cosh();
        let w = half * FRAC_PI_2 * t.cosh() / (cu * cu);
        if !w.is_finite() || w == 0.0 {
            return None;
        }
        Some((a + da, da, db, w))
    };
    let sum_at = |t: f64| -> f64 {
        match node(t) {
            Some((x, da, db, w)) => {
                let v = f(x, da, db);
                if v.is_finite() {
                    w * v
                } else {
                    0.0
                }
            }
            None => 0.0,
        }
    };

    let mut h = 0.5;
    let mut sum = sum_at(0.0);
    let mut k = 1;
    while k as f64 * h <= TS_T_MAX {
        let t = k as f64 * h;
        sum += sum_at(t) + sum_at(-t);
        k += 1;
    }
    let mut estimate = h * sum;
    for _ in 1..TS_MAX_LEVEL {
        h *= 0.5;
        // only the new odd-indexed abscissae
        let mut k = 1;
        while k as f64 * h <= TS_T_MAX {
            let t = k as f64 * h;
            sum += sum_at(t) + sum_at(-t);
            k += 2;
        }
        let next = h * sum;
        let change = (next - estimate).abs();
        estimate = next;
        if change <= rel_tol * next.abs() || change < 1e-300 {
            break;
        }
    }
    estimate
}

/// Trigonometric data handed to meridian integrands: `sin θ`, `cos θ`, both
/// accurate near their zeros.
#[derive(Clone, Copy, Debug)]
pub struct MeridianPoint {
    pub theta: f64,
    pub sin: f64,
    pub cos: f64,
}

/// ∫_{S^{n-1}} F for an even axisymmetric integrand `F(θ)` given in closed form:
/// 2 ω_{n-2} ∫_0^{π/2} F(θ) sin^{n-2}θ dθ.
///
/// `breaks` lists interior break points in (0, π/2) where the integrand
/// changes scale (near-endpoint peaks); the two halves of the meridian are
/// handled in the variables θ and π/2 − θ so that both endpoints see exact
/// distances.
pub fn meridian_integral<F>(n: usize, breaks: &[f64], f: F) -> f64
where
    F: Fn(MeridianPoint) -> f64,
{
    let mut cuts: Vec<f64> = breaks
        .iter()
        .copied()
        .filter(|b| *b > 0.0 && *b < FRAC_PI_2)
        .collect();
    cuts.push(FRAC_PI_4);
    cuts.push(0.0);
    cuts.push(FRAC_PI_2);
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    cuts.dedup_by(|a, b| (*a - *b).abs() < 1e-300);
    let m = n as f64 - 2.0;
    let mut total = 0.0;
    for w in cuts.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        if hi <= FRAC_PI_4 + 1e-15 {
            total += tanh_sinh(
                |x, da, _| {
                    let theta = lo + da;
                    let s = if lo == 0.0 { da.sin() } else { x.sin() };
                    let pt = MeridianPoint {
                        theta,
                        sin: s,
                        cos: theta.cos(),
                    };
                    f(pt) * pt.sin.powf(m)
                },
                lo,
                hi,
                1e-14,
            );
        } else {
            // t = π/2 − θ on [π/2 − hi, π/2 − lo]
            let (tlo, thi) = (FRAC_PI_2 - hi, FRAC_PI_2 - lo);
            total += tanh_sinh(
                |t, dt, _| {
                    let c = if tlo == 0.0 { dt.sin() } else { t.sin() };
                    let pt = MeridianPoint {
                        theta: FRAC_PI_2 - t,
                        sin: t.cos(),
                        cos: c,
                    };
                    f(pt) * pt.sin.powf(m)
                },
                tlo,
                thi,
                1e-14,
            );
        }
    }
    meridian_factor(n) * total
}

/// Composite Gauss–Legendre nodes and weights on [a, b] with `panels` equal panels
/// of `order` points each.
pub fn composite_gauss_legendre(a: f64, b: f64, panels: usize, order: usize) -> Vec<(f64, f64)> {
    let rule = gauss_quad::GaussLegendre::new(order).expect("order >= 2");
    let width = (b - a) / panels as f64;
    let mut out = Vec::with_capacity(panels * order);
    for p in 0..panels {
        let lo = a + p as f64 * width;
        for &(x, w) in rule.as_node_weight_pairs() {
            out.push((lo + 0.5 * width * (x + 1.0), 0.5 * width * w));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn ball_and_sphere_constants() {
        assert_relative_eq!(unit_ball_volume(2), PI, max_relative = 1e-15);
        assert_relative_eq!(unit_ball_volume(3), 4.0 * PI / 3.0, max_relative = 1e-15);
        assert_relative_eq!(unit_ball_volume(4), PI * PI / 2.0, max_relative = 1e-15);
        for n in 2..7 {
            assert_relative_eq!(sphere_area(n), n as f64 * unit_ball_volume(n), max_relative = 1e-14);
        }
        assert_eq!(sphere_area(1), 2.0);
    }

    #[test]
    fn tanh_sinh_handles_endpoint_singularities() {
        // ∫_0^1 x^{-1/2} = 2, ∫_0^1 ln x = -1
        let a = tanh_sinh(|_, da, _| da.powf(-0.5), 0.0, 1.0, 1e-14);
        assert_relative_eq!(a, 2.0, max_relative = 1e-12);
        let b = tanh_sinh(|_, da, _| da.ln(), 0.0, 1.0, 1e-14);
        assert_relative_eq!(b, -1.0, max_relative = 1e-12);
        let c = tanh_sinh(|_, _, db| db.powf(-0.9), 0.0, 1.0, 1e-14);
        assert_relative_eq!(c, 10.0, max_relative = 1e-10);
    }

    #[test]
    fn meridian_integral_matches_sphere_area() {
        for n in 2..6 {
            let v = meridian_integral(n, &[], |_| 1.0);
            assert_relative_eq!(v, sphere_area(n), max_relative = 1e-13);
        }
        // ∫_{S^1} |x_n| = 4
        let v = meridian_integral(2, &[], |pt| pt.cos);
        assert_relative_eq!(v, 4.0, max_relative = 1e-13);
    }
}
