//! Convex bodies by their support samples, rotational ellipsoids, and the
//! volume functionals.

use std::sync::Arc;

use super::alexandrov::alexandrov_radial;
use super::field::AxiFn;
use super::grid::MeridianGrid;
use super::operators::{check_convex, gradient_map, monge_ampere};
use crate::error::{Error, Result};
use crate::quadrature::{unit_ball_volume, MeridianPoint};

/// A convex body with support function, radial function, Monge–Ampère
/// (surface-area) density and boundary points ∇̄h = (ξ′, ξ_n).
#[derive(Clone, Debug)]
pub struct AxiBody {
    pub support: AxiFn,
    pub radial: AxiFn,
    pub curvature: AxiFn,
    pub grad_lateral: AxiFn,
    pub grad_axial: AxiFn,
}

impl AxiBody {
    /// Builds the body of a convex support function.
    pub fn from_support(h: AxiFn) -> Result<Self> {
        check_convex(&h)?;
        let radial = alexandrov_radial(&h);
        let curvature = monge_ampere(&h).density;
        let (grad_lateral, grad_axial) = gradient_map(&h);
        Ok(AxiBody {
            support: h,
            radial,
            curvature,
            grad_lateral,
            grad_axial,
        })
    }

    /// Assembles a body from precomputed samples, for bodies whose support
    /// function is not smooth (polytopes); only positivity is checked.
    pub fn from_samples(
        support: AxiFn,
        radial: AxiFn,
        curvature: AxiFn,
        grad_lateral: AxiFn,
        grad_axial: AxiFn,
    ) -> Result<Self> {
        for f in [&support, &radial] {
            if let Some(i) = f.values().iter().position(|v| !(*v > 0.0)) {
                return Err(Error::Domain(format!(
                    "body samples must be positive (node {i}, value {})",
                    f.values()[i]
                )));
            }
        }
        Ok(AxiBody {
            support,
            radial,
            curvature,
            grad_lateral,
            grad_axial,
        })
    }

    pub fn grid(&self) -> &Arc<MeridianGrid> {
        self.support.grid()
    }

    pub fn unit_ball(grid: &Arc<MeridianGrid>) -> Self {
        ellipsoid_body(RotEllipsoid { r: 1.0, a: 1.0 }, grid)
    }

    /// The dilate λK.
    pub fn scaled(&self, lambda: f64) -> Self {
        let m = self.grid().dim() as f64 - 1.0;
        AxiBody {
            support: self.support.scale(lambda),
            radial: self.radial.scale(lambda),
            curvature: self.curvature.scale(lambda.powf(m)),
            grad_lateral: self.grad_lateral.scale(lambda),
            grad_axial: self.grad_axial.scale(lambda),
        }
    }
}

/// Ellipsoid x′²/(r a^{1/n})² + x_n²/(r a^{(1−n)/n})² ≤ 1, i.e. the image of
/// the unit ball under A = diag(ra^{1/n}, …, ra^{1/n}, ra^{(1−n)/n}).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RotEllipsoid {
    pub r: f64,
    pub a: f64,
}

impl RotEllipsoid {
    /// Lateral and axial semi-axes.
    pub fn axes(&self, n: usize) -> (f64, f64) {
        let n = n as f64;
        (self.r * self.a.powf(1.0 / n), self.r * self.a.powf((1.0 - n) / n))
    }

    pub fn det(&self, n: usize) -> f64 {
        self.r.powi(n as i32)
    }

    /// |Ax|, the support function.
    pub fn support(&self, n: usize, pt: MeridianPoint) -> f64 {
        let (l, z) = self.axes(n);
        (l * pt.sin).hypot(z * pt.cos)
    }

    /// |A⁻¹u|, the reciprocal of the radial function.
    pub fn inverse_norm(&self, n: usize, pt: MeridianPoint) -> f64 {
        let (l, z) = self.axes(n);
        (pt.sin / l).hypot(pt.cos / z)
    }
}

/// Closed-form body of a rotational ellipsoid.
pub fn ellipsoid_body(e: RotEllipsoid, grid: &Arc<MeridianGrid>) -> AxiBody {
    let n = grid.dim();
    let (l, z) = e.axes(n);
    let det = e.det(n);
    let support = AxiFn::from_fn(grid, |pt| e.support(n, pt));
    let radial = AxiFn::from_fn(grid, |pt| 1.0 / e.inverse_norm(n, pt));
    let curvature = AxiFn::from_fn(grid, |pt| {
        det * det * e.support(n, pt).powi(-(n as i32 + 1))
    });
    // ∇̄h = A²x/|Ax|
    let grad_lateral = AxiFn::from_fn(grid, |pt| l * l * pt.sin / e.support(n, pt));
    let grad_axial = AxiFn::from_fn(grid, |pt| z * z * pt.cos / e.support(n, pt));
    AxiBody {
        support,
        radial,
        curvature,
        grad_lateral,
        grad_axial,
    }
}

/// q-th dual volume (1/n)∫ρ^q.
pub fn dual_volume(body: &AxiBody, q: f64) -> Result<f64> {
    dual_volume_radial(&body.radial, q)
}

pub fn dual_volume_radial(rho: &AxiFn, q: f64) -> Result<f64> {
    if q == 0.0 || !q.is_finite() {
        return Err(Error::Domain(format!("dual volume needs finite q != 0, got {q}")));
    }
    let n = rho.grid().dim() as f64;
    Ok(rho.map(|v| v.powf(q)).integral()? / n)
}

/// Total surface area ∫ det(∇²h + hI).
pub fn surface_area(body: &AxiBody) -> Result<f64> {
    body.curvature.integral()
}

/// Volume (1/n)∫ h·det(∇²h + hI).
pub fn volume(body: &AxiBody) -> Result<f64> {
    let n = body.grid().dim() as f64;
    Ok(body.support.zip_with(&body.curvature, |h, k| h * k).integral()? / n)
}

/// Volume-minimal rotational ellipsoid containing the body.
///
/// For fixed a the smallest admissible r is max_u ρ(u)|A(1,a)⁻¹u|; its
/// logarithm is convex in log a, so golden section on log a finds the
/// optimum. The result is checked against the inclusion E/n ⊂ K.
pub fn min_ellipsoid(body: &AxiBody) -> Result<RotEllipsoid> {
    let grid = body.grid();
    let n = grid.dim();
    let rho = body.radial.values();
    let radius_for = |log_a: f64| -> f64 {
        let e = RotEllipsoid {
            r: 1.0,
            a: log_a.exp(),
        };
        (0..grid.len())
            .map(|i| rho[i] * e.inverse_norm(n, grid.point(i)))
            .fold(0.0, f64::max)
    };
    // bracket: the aspect ratio of an enclosing ellipsoid cannot exceed the
    // body's own by much more than the spread of ρ
    let spread = (body.radial.max() / body.radial.min()).ln();
    let half = n as f64 * (spread + 1.0);
    let log_r = |t: f64| radius_for(t).ln();
    let log_a = golden_argmin(&log_r, -half, half);
    let r = radius_for(log_a);
    let e = RotEllipsoid { r, a: log_a.exp() };

    let h = body.support.values();
    let tol = 1e-12 * body.support.max_abs();
    for i in 0..grid.len() {
        let scaled = e.support(n, grid.point(i)) / n as f64;
        if scaled > h[i] + tol {
            return Err(Error::Containment {
                index: i,
                scaled,
                support: h[i],
            });
        }
    }
    Ok(e)
}

fn golden_argmin(f: &dyn Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > 1e-13 {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// Isoperimetric constant: volume ≤ C_n·area^{n/(n−1)} with equality for balls.
pub fn isoperimetric_constant(n: usize) -> f64 {
    let nf = n as f64;
    let k = unit_ball_volume(n);
    k / (nf * k).powf(nf / (nf - 1.0))
}

/// Planar square max(|x₁|, |x₂|) ≤ 1 as a body sample set (no curvature
/// density: its surface measure is atomic).
pub fn planar_square(grid: &Arc<MeridianGrid>) -> Result<AxiBody> {
    if grid.dim() != 2 {
        return Err(Error::Domain("the square body lives in the plane".into()));
    }
    let support = AxiFn::from_fn(grid, |pt| pt.sin + pt.cos);
    let radial = AxiFn::from_fn(grid, |pt| 1.0 / pt.sin.max(pt.cos));
    let zero = AxiFn::constant(grid, 0.0);
    let lat = AxiFn::constant(grid, 1.0);
    let ax = AxiFn::constant(grid, 1.0);
    AxiBody::from_samples(support, radial, zero, lat, ax)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sphere::{monge_ampere, support_from_radial};
    use std::f64::consts::PI;

    #[test]
    fn ellipsoid_readouts() {
        let g = MeridianGrid::new(2, 64, 1.0).unwrap();
        let e = RotEllipsoid { r: 1.0, a: 2.0 };
        let eq = MeridianPoint { theta: PI / 2.0, sin: 1.0, cos: 0.0 };
        assert!((e.support(2, eq) - 2f64.sqrt()).abs() < 1e-15);
        let body = ellipsoid_body(e, &g);
        let i = g.len() - 1;
        assert!((body.grad_lateral.values()[i] - 2f64.sqrt()).abs() < 1e-4);
        assert!(body.grad_axial.values()[i].abs() < 1e-2);
    }

    #[test]
    fn ellipsoid_curvature_matches_operator() {
        let g = MeridianGrid::new(3, 256, 2.0).unwrap();
        let e = RotEllipsoid { r: 1.0, a: 2.0 };
        let body = ellipsoid_body(e, &g);
        let ma = monge_ampere(&body.support).density;
        for (x, y) in ma.values().iter().zip(body.curvature.values()) {
            assert!((x / y - 1.0).abs() < 1e-9);
        }
        // θ → 0 limit 2^{8/3}
        assert!((body.curvature.values()[0] - 2f64.powf(8.0 / 3.0)).abs() < 1e-3);
    }

    #[test]
    fn volumes_of_ball_and_ellipsoid() {
        let g = MeridianGrid::new(3, 128, 2.0).unwrap();
        let ball = AxiBody::unit_ball(&g);
        assert!((surface_area(&ball).unwrap() - 4.0 * PI).abs() < 1e-12);
        assert!((volume(&ball).unwrap() - 4.0 * PI / 3.0).abs() < 1e-12);
        let big = ball.scaled(2.0);
        assert!((volume(&big).unwrap() - 8.0 * 4.0 * PI / 3.0).abs() < 1e-11);
        let e = ellipsoid_body(RotEllipsoid { r: 1.3, a: 0.6 }, &g);
        let dv = dual_volume(&e, 3.0).unwrap();
        assert!((dv / volume(&e).unwrap() - 1.0).abs() < 1e-8);
        assert!((dv / (unit_ball_volume(3) * 1.3f64.powi(3)) - 1.0).abs() < 1e-10);
        assert!(dual_volume(&e, 0.0).is_err());
    }

    #[test]
    fn support_of_ellipsoid_radial() {
        let g = MeridianGrid::new(3, 128, 2.0).unwrap();
        let e = ellipsoid_body(RotEllipsoid { r: 0.8, a: 2.5 }, &g);
        let h = support_from_radial(&e.radial);
        for (x, y) in h.values().iter().zip(e.support.values()) {
            assert!((x - y).abs() < 1e-8);
        }
    }

    #[test]
    fn min_ellipsoid_cases() {
        let g = MeridianGrid::new(3, 128, 2.0).unwrap();
        let ball = min_ellipsoid(&AxiBody::unit_ball(&g)).unwrap();
        assert!((ball.r - 1.0).abs() < 1e-9 && (ball.a - 1.0).abs() < 1e-6);
        let e = min_ellipsoid(&ellipsoid_body(RotEllipsoid { r: 2.0, a: 3.0 }, &g)).unwrap();
        assert!((e.r - 2.0).abs() < 1e-6 && (e.a - 3.0).abs() < 1e-6, "{e:?}");

        // an odd node count puts a node on the corner direction π/4
        let g2 = MeridianGrid::new(2, 513, 1.0).unwrap();
        let sq = min_ellipsoid(&planar_square(&g2).unwrap()).unwrap();
        assert!((sq.r - 2f64.sqrt()).abs() < 1e-9, "{sq:?}");
        assert!((sq.a - 1.0).abs() < 1e-6, "{sq:?}");
    }

    #[test]
    fn isoperimetric_equality_for_ball() {
        for n in 2..5 {
            let g = MeridianGrid::new(n, 64, 1.0).unwrap();
            let ball = AxiBody::unit_ball(&g);
            let lhs = volume(&ball).unwrap();
            let rhs = isoperimetric_constant(n) * surface_area(&ball).unwrap().powf(n as f64 / (n as f64 - 1.0));
            assert!((lhs - rhs).abs() < 1e-12);
        }
    }
}
