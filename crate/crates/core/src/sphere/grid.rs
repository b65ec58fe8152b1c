//! Collocation grid on the meridian θ ∈ (0, π/2).
//!
//! Even axisymmetric fields on S^{n-1} are functions of the polar angle that
//! are even about θ = 0 and about θ = π/2, i.e. π-periodic cosine series in
//! 2θ. The grid places nodes at the midpoints s_i = (i + ½)π/(2N) of a
//! computational variable s and maps them through
//!
//! ```text
//! θ = φ(s) = s − (c/4)·sin 4s,    c = 1 − 1/grading,
//! ```
//!
//! which keeps both reflection symmetries (φ is odd about 0 and about π/2)
//! while multiplying the node density at both poles by `grading`. Fields are
//! interpolated by the cosine series Σ a_k cos(2ks) through the nodes; the
//! even-reflection ghost values are implicit in that basis, so h′ vanishes at
//! both endpoints without any boundary stencil.

use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::{Arc, OnceLock};

use nalgebra::DMatrix;
use rustdct::{DctPlanner, TransformType2And3};

use crate::error::{Error, Result};
use crate::quadrature::{self, composite_gauss_legendre, meridian_factor, MeridianPoint};

pub const MIN_NODES: usize = 32;

pub struct MeridianGrid {
    dim: usize,
    size: usize,
    grading: f64,
    squeeze: f64,
    theta: Vec<f64>,
    sin: Vec<f64>,
    cos: Vec<f64>,
    dphi: Vec<f64>,
    d2phi: Vec<f64>,
    weights: Vec<f64>,
    dct: Arc<dyn TransformType2And3<f64>>,
    diff: OnceLock<(DMatrix<f64>, DMatrix<f64>)>,
}

impl std::fmt::Debug for MeridianGrid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("MeridianGrid")
            .field("dim", &self.dim)
            .field("size", &self.size)
            .field("grading", &self.grading)
            .finish()
    }
}

impl MeridianGrid {
    /// Builds the grid for S^{n-1} with `size` nodes.
    pub fn new(dim: usize, size: usize, grading: f64) -> Result<Arc<Self>> {
        if dim < 2 {
            return Err(Error::Grid(format!("dimension must be >= 2, got {dim}")));
        }
        if size < MIN_NODES {
            return Err(Error::Grid(format!(
                "node count must be >= {MIN_NODES}, got {size}"
            )));
        }
        if !grading.is_finite() || grading < 1.0 {
            return Err(Error::Grid(format!(
                "grading must be a finite factor >= 1 (got {grading}); smaller values fold the node map and duplicate nodes"
            )));
        }
        let squeeze = 1.0 - 1.0 / grading;
        let h = FRAC_PI_2 / size as f64;
        let s: Vec<f64> = (0..size).map(|i| (i as f64 + 0.5) * h).collect();
        let map = |s: f64| s - 0.25 * squeeze * (4.0 * s).sin();
        let theta: Vec<f64> = s.iter().map(|&s| map(s)).collect();
        for w in theta.windows(2) {
            if !(w[1] > w[0]) {
                return Err(Error::Grid("grading produced duplicate nodes".into()));
            }
        }
        // π/2 − φ(s) = φ(π/2 − s), which keeps cos θ accurate near the equator
        let sin: Vec<f64> = s.iter().map(|&s| map(s).sin()).collect();
        let cos: Vec<f64> = s.iter().map(|&s| map(FRAC_PI_2 - s).sin()).collect();
        let dphi = s.iter().map(|&s| 1.0 - squeeze * (4.0 * s).cos()).collect();
        let d2phi = s.iter().map(|&s| 4.0 * squeeze * (4.0 * s).sin()).collect();
        let dct = DctPlanner::new().plan_dct2(size);

        let mut grid = MeridianGrid {
            dim,
            size,
            grading,
            squeeze,
            theta,
            sin,
            cos,
            dphi,
            d2phi,
            weights: Vec::new(),
            dct,
            diff: OnceLock::new(),
        };
        grid.weights = grid.quadrature_weights(0.0, 0.0);
        Ok(Arc::new(grid))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    pub fn grading(&self) -> f64 {
        self.grading
    }

    pub fn nodes(&self) -> &[f64] {
        &self.theta
    }

    pub fn sin(&self) -> &[f64] {
        &self.sin
    }

    pub fn cos(&self) -> &[f64] {
        &self.cos
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn point(&self, i: usize) -> MeridianPoint {
        MeridianPoint {
            theta: self.theta[i],
            sin: self.sin[i],
            cos: self.cos[i],
        }
    }

    /// Total measure of S^{n-1}, n·κ_n.
    pub fn sphere_area(&self) -> f64 {
        quadrature::sphere_area(self.dim)
    }

    /// ∫_{S^{n-1}} F for the even axisymmetric field sampled at the nodes.
    pub fn integrate(&self, values: &[f64]) -> Result<f64> {
        debug_assert_eq!(values.len(), self.size);
        let mut acc = 0.0;
        for (i, (&v, &w)) in values.iter().zip(&self.weights).enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFinite {
                    index: i,
                    theta: self.theta[i],
                });
            }
            acc += v * w;
        }
        Ok(acc)
    }

    /// Weights for ∫ F·|x′|^α|x_n|^β with the singular factor folded into the
    /// rule, exact for F in the interpolation space. Requires α > 1 − n, β > −1.
    pub fn weighted_weights(&self, alpha: f64, beta: f64) -> Result<Vec<f64>> {
        if !(alpha > 1.0 - self.dim as f64) || !(beta > -1.0) {
            return Err(Error::Domain(format!(
                "weight exponents need alpha > 1-n and beta > -1 (alpha = {alpha}, beta = {beta})"
            )));
        }
        Ok(self.quadrature_weights(alpha, beta))
    }

    fn quadrature_weights(&self, alpha: f64, beta: f64) -> Vec<f64> {
        let n = self.size;
        let c = self.squeeze;
        let phi = |s: f64| s - 0.25 * c * (4.0 * s).sin();
        let sin_power = alpha + self.dim as f64 - 2.0;
        // weight density in s, given s and π/2 − s separately
        let density = |s: f64, to_equator: f64| -> f64 {
            let sin_t = phi(s).sin();
            let cos_t = phi(to_equator).sin();
            let mut w = 1.0 - c * (4.0 * s).cos();
            if sin_power != 0.0 {
                w *= sin_t.powf(sin_power);
            }
            if beta != 0.0 {
                w *= cos_t.powf(beta);
            }
            w
        };

        let panels = (n / 2).max(8);
        let width = FRAC_PI_2 / panels as f64;
        let smooth = sin_power.fract() == 0.0 && sin_power >= 0.0 && beta.fract() == 0.0 && beta >= 0.0;
        let mut points: Vec<(f64, f64)> = Vec::with_capacity(panels * 20);
        if smooth {
            for (x, w) in composite_gauss_legendre(0.0, FRAC_PI_2, panels, 20) {
                points.push((x, w * density(x, FRAC_PI_2 - x)));
            }
        } else {
            for (x, w) in composite_gauss_legendre(width, FRAC_PI_2 - width, panels - 2, 20) {
                points.push((x, w * density(x, FRAC_PI_2 - x)));
            }
            for (_, da, _, w) in tanh_sinh_rule(0.0, width, 1.0 / 64.0) {
                points.push((da, w * density(da, FRAC_PI_2 - da)));
            }
            for (_, _, db, w) in tanh_sinh_rule(FRAC_PI_2 - width, FRAC_PI_2, 1.0 / 64.0) {
                let s = FRAC_PI_2 - db;
                points.push((s, w * density(s, db)));
            }
        }

        // moments m_k = ∫ cos(2ks)·density(s) ds
        let mut moments = vec![0.0; n];
        for &(x, w) in &points {
            if w == 0.0 || !w.is_finite() {
                continue;
            }
            accumulate_cosines(&mut moments, 2.0 * x, w);
        }
        let mut spectrum: Vec<f64> = moments.iter().map(|m| 2.0 * m).collect();
        self.dct.process_dct3(&mut spectrum);
        let scale = meridian_factor(self.dim) / n as f64;
        spectrum.iter().map(|v| v * scale).collect()
    }

    /// Cosine coefficients a_k of the interpolant Σ a_k cos(2ks).
    pub fn coefficients(&self, values: &[f64]) -> Vec<f64> {
        let mut a = values.to_vec();
        self.dct.process_dct2(&mut a);
        let n = self.size as f64;
        a[0] /= n;
        for v in a.iter_mut().skip(1) {
            *v *= 2.0 / n;
        }
        a
    }

    /// Nodal values of a coefficient vector.
    pub fn synthesize(&self, coeffs: &[f64]) -> Vec<f64> {
        let mut x = coeffs.to_vec();
        x[0] *= 2.0;
        self.dct.process_dct3(&mut x);
        x
    }

    /// First and second θ-derivatives of the interpolant at the nodes.
    pub fn derivatives(&self, values: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let a = self.coefficients(values);
        self.derivatives_from_coefficients(&a)
    }

    fn derivatives_from_coefficients(&self, a: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let n = self.size;
        // G'(s_i) = Σ_{k>=1} −2k a_k sin(2k s_i): DST-III with a one-step shift
        let mut d1 = vec![0.0; n];
        for k in 1..n {
            d1[k - 1] = -2.0 * k as f64 * a[k];
        }
        self.dct.process_dst3(&mut d1);
        let mut d2: Vec<f64> = a
            .iter()
            .enumerate()
            .map(|(k, &ak)| -4.0 * (k * k) as f64 * ak)
            .collect();
        d2[0] = 0.0;
        self.dct.process_dct3(&mut d2);
        for i in 0..n {
            let g1 = d1[i];
            let p1 = self.dphi[i];
            d1[i] = g1 / p1;
            d2[i] = (d2[i] - g1 * self.d2phi[i] / p1) / (p1 * p1);
        }
        (d1, d2)
    }

    /// Dense nodal differentiation matrices (first, second θ-derivative).
    pub fn diff_matrices(&self) -> &(DMatrix<f64>, DMatrix<f64>) {
        self.diff.get_or_init(|| {
            let n = self.size;
            let mut d1 = DMatrix::zeros(n, n);
            let mut d2 = DMatrix::zeros(n, n);
            let mut e = vec![0.0; n];
            for j in 0..n {
                e[j] = 1.0;
                let (c1, c2) = self.derivatives(&e);
                e[j] = 0.0;
                for i in 0..n {
                    d1[(i, j)] = c1[i];
                    d2[(i, j)] = c2[i];
                }
            }
            (d1, d2)
        })
    }

    /// Computational coordinate s ∈ [0, π/2] of a meridian angle θ ∈ [0, π/2].
    pub fn theta_to_s(&self, theta: f64) -> f64 {
        let c = self.squeeze;
        if c == 0.0 {
            return theta;
        }
        let (mut lo, mut hi) = (0.0, FRAC_PI_2);
        let mut s = theta;
        for _ in 0..60 {
            let f = s - 0.25 * c * (4.0 * s).sin() - theta;
            if f > 0.0 {
                hi = s;
            } else {
                lo = s;
            }
            let step = f / (1.0 - c * (4.0 * s).cos());
            if step.abs() < 1e-17 {
                break;
            }
            let next = s - step;
            s = if next >= lo && next <= hi { next } else { 0.5 * (lo + hi) };
        }
        s
    }

    /// Value and θ-derivatives (f, f′, f″) of the interpolant at an arbitrary
    /// angle, extended by the even reflections about 0 and π/2.
    pub fn evaluate(&self, coeffs: &[f64], theta: f64) -> (f64, f64, f64) {
        let (t, sign) = reduce_angle(theta);
        let s = self.theta_to_s(t);
        let (g, g1, g2) = cosine_series(coeffs, s);
        let c = self.squeeze;
        let p1 = 1.0 - c * (4.0 * s).cos();
        let p2 = 4.0 * c * (4.0 * s).sin();
        (g, sign * g1 / p1, (g2 - g1 * p2 / p1) / (p1 * p1))
    }
}

/// Folds any real angle onto [0, π/2] using evenness and π-periodicity; the
/// sign is the factor picked up by odd derivatives.
pub fn reduce_angle(theta: f64) -> (f64, f64) {
    let t = theta.rem_euclid(PI);
    if t > FRAC_PI_2 {
        (PI - t, -1.0)
    } else {
        (t, 1.0)
    }
}

/// Σ a_k cos(2ks), its s-derivative and second s-derivative.
fn cosine_series(a: &[f64], s: f64) -> (f64, f64, f64) {
    let step = 2.0 * s;
    let (sn, cs) = step.sin_cos();
    let (mut c, mut sv) = (1.0, 0.0);
    let (mut f, mut f1, mut f2) = (0.0, 0.0, 0.0);
    for (k, &ak) in a.iter().enumerate() {
        if k % 32 == 0 {
            let (s_, c_) = (k as f64 * step).sin_cos();
            c = c_;
            sv = s_;
        }
        let kk = k as f64;
        f += ak * c;
        f1 -= 2.0 * kk * ak * sv;
        f2 -= 4.0 * kk * kk * ak * c;
        let nc = c * cs - sv * sn;
        sv = sv * cs + c * sn;
        c = nc;
    }
    (f, f1, f2)
}

/// out[k] += w·cos(k·t) for all k.
fn accumulate_cosines(out: &mut [f64], t: f64, w: f64) {
    let (sn, cs) = t.sin_cos();
    let (mut c, mut sv) = (1.0, 0.0);
    for (k, o) in out.iter_mut().enumerate() {
        if k % 32 == 0 {
            let (s_, c_) = (k as f64 * t).sin_cos();
            c = c_;
            sv = s_;
        }
        *o += w * c;
        let nc = c * cs - sv * sn;
        sv = sv * cs + c * sn;
        c = nc;
    }
}

/// Fixed-step tanh-sinh abscissae on [a, b] as (x, x − a, b − x, weight).
pub(crate) fn tanh_sinh_rule(a: f64, b: f64, h: f64) -> Vec<(f64, f64, f64, f64)> {
    let half = 0.5 * (b - a);
    let mut out = Vec::new();
    let kmax = (6.5 / h).ceil() as i64;
    for k in -kmax..=kmax {
        let t = k as f64 * h;
        let u = FRAC_PI_2 * t.sinh();
        let da = 2.0 * half / (1.0 + (2.0 * u).exp());
        let db = 2.0 * half / (1.0 + (-2.0 * u).exp());
        if da <= 0.0 || db <= 0.0 {
            continue;
        }
        let cu = u.cosh();
        let w = h * half * FRAC_PI_2 * t.cosh() / (cu * cu);
        if w.is_finite() && w > 0.0 {
            out.push((a + da, da, db, w));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn weights_sum_to_sphere_area() {
        for (n, size, grading) in [(2, 256, 1.0), (3, 256, 1.0), (4, 128, 2.0), (3, 64, 3.0), (5, 96, 2.0)] {
            let g = MeridianGrid::new(n, size, grading).unwrap();
            let total: f64 = g.weights().iter().sum();
            assert_relative_eq!(total, g.sphere_area(), max_relative = 1e-12);
        }
    }

    #[test]
    fn rejects_small_or_folding_grids() {
        assert!(MeridianGrid::new(3, 31, 1.0).is_err());
        assert!(MeridianGrid::new(3, 64, 0.5).is_err());
        assert!(MeridianGrid::new(3, 64, f64::NAN).is_err());
        assert!(MeridianGrid::new(1, 64, 1.0).is_err());
    }

    #[test]
    fn nodes_are_open_and_increasing() {
        let g = MeridianGrid::new(3, 64, 2.0).unwrap();
        let t = g.nodes();
        assert!(t[0] > 0.0 && *t.last().unwrap() < FRAC_PI_2);
        assert!(t.windows(2).all(|w| w[1] > w[0]));
        for i in 0..g.len() {
            assert_relative_eq!(g.sin()[i], t[i].sin(), max_relative = 1e-13);
            assert_relative_eq!(g.cos()[i], t[i].cos(), max_relative = 1e-12);
        }
    }

    #[test]
    fn spectral_derivatives_of_trig_field() {
        for grading in [1.0, 2.0] {
            let g = MeridianGrid::new(2, 64, grading).unwrap();
            let v: Vec<f64> = g.nodes().iter().map(|t| 1.0 + 0.1 * (2.0 * t).cos()).collect();
            let (d1, d2) = g.derivatives(&v);
            for (i, t) in g.nodes().iter().enumerate() {
                assert!((d1[i] + 0.2 * (2.0 * t).sin()).abs() < 1e-12);
                assert!((d2[i] + 0.4 * (2.0 * t).cos()).abs() < 1e-11);
            }
        }
    }

    #[test]
    fn evaluation_off_grid_and_reflections() {
        let g = MeridianGrid::new(3, 64, 2.0).unwrap();
        let f = |t: f64| (1.0 + 0.3 * (2.0 * t).cos()).sqrt();
        let v: Vec<f64> = g.nodes().iter().map(|&t| f(t)).collect();
        let a = g.coefficients(&v);
        for t in [0.0, 0.01, 0.4, 1.2, FRAC_PI_2, 2.0, -0.3, 4.0] {
            let (val, d1, _) = g.evaluate(&a, t);
            assert!((val - f(t)).abs() < 1e-12, "t = {t}: {val} vs {}", f(t));
            let fd = (f(t + 1e-6) - f(t - 1e-6)) / 2e-6;
            assert!((d1 - fd).abs() < 1e-8, "t = {t}: {d1} vs {fd}");
        }
    }

    #[test]
    fn diff_matrix_matches_transform() {
        let g = MeridianGrid::new(3, 40, 2.0).unwrap();
        let v: Vec<f64> = g.nodes().iter().map(|t| (t.cos().powi(2) + 0.5).ln()).collect();
        let (d1, d2) = g.derivatives(&v);
        let (m1, m2) = g.diff_matrices();
        let x = nalgebra::DVector::from_vec(v);
        let (y1, y2) = (m1 * &x, m2 * &x);
        for i in 0..g.len() {
            assert!((y1[i] - d1[i]).abs() < 1e-10);
            assert!((y2[i] - d2[i]).abs() < 1e-9);
        }
    }
}
