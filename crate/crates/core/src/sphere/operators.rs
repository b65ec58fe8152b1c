//! Differential kernels on support functions: principal radii, the
//! Monge–Ampère density, the gradient map and the dual L_p operator.

use nalgebra::DMatrix;

use super::field::AxiFn;
use crate::error::{Error, Result};

/// Principal radii of curvature of the body with support function h, as
/// functions of the normal: meridional h″ + h and lateral h′cotθ + h.
#[derive(Clone, Debug)]
pub struct Radii {
    pub meridional: Vec<f64>,
    pub lateral: Vec<f64>,
}

/// Node values of h together with its first two θ-derivatives.
#[derive(Clone, Debug)]
pub struct Jet {
    pub h: Vec<f64>,
    pub d1: Vec<f64>,
    pub d2: Vec<f64>,
}

impl Jet {
    pub fn of(h: &AxiFn) -> Self {
        let (d1, d2) = h.derivatives();
        Jet {
            h: h.values().to_vec(),
            d1,
            d2,
        }
    }
}

pub fn principal_radii(h: &AxiFn) -> Radii {
    radii_from_jet(h, &Jet::of(h))
}

fn radii_from_jet(h: &AxiFn, jet: &Jet) -> Radii {
    let g = h.grid();
    let meridional = (0..h.len()).map(|i| jet.d2[i] + jet.h[i]).collect();
    let lateral = (0..h.len())
        .map(|i| jet.d1[i] * g.cos()[i] / g.sin()[i] + jet.h[i])
        .collect();
    Radii {
        meridional,
        lateral,
    }
}

/// Monge–Ampère density with the nodes where a principal radius is negative.
#[derive(Clone, Debug)]
pub struct MongeAmpere {
    pub density: AxiFn,
    pub nonconvex: Vec<usize>,
}

/// det(∇²h + hI) = (h″ + h)(h′cotθ + h)^{n−2}. Nodes with a negative radius
/// are reported, not rejected.
pub fn monge_ampere(h: &AxiFn) -> MongeAmpere {
    let radii = principal_radii(h);
    let m = h.grid().dim() as i32 - 2;
    let values: Vec<f64> = radii
        .meridional
        .iter()
        .zip(&radii.lateral)
        .map(|(r1, r2)| r1 * r2.powi(m))
        .collect();
    let nonconvex = (0..h.len())
        .filter(|&i| radii.meridional[i] < 0.0 || (m > 0 && radii.lateral[i] < 0.0))
        .collect();
    MongeAmpere {
        density: AxiFn::new(h.grid().clone(), values).expect("grid-sized"),
        nonconvex,
    }
}

/// The boundary point ∇̄h(x) split as (ξ′, ξ_n): the component along the
/// meridian direction of x′ and along the axis.
pub fn gradient_map(h: &AxiFn) -> (AxiFn, AxiFn) {
    let g = h.grid();
    let (d1, _) = h.derivatives();
    let hv = h.values();
    let lat = (0..h.len())
        .map(|i| d1[i] * g.cos()[i] + hv[i] * g.sin()[i])
        .collect();
    let axial = (0..h.len())
        .map(|i| hv[i] * g.cos()[i] - d1[i] * g.sin()[i])
        .collect();
    (
        AxiFn::new(g.clone(), lat).expect("grid-sized"),
        AxiFn::new(g.clone(), axial).expect("grid-sized"),
    )
}

/// |∇̄h|² = h² + h′².
pub fn gradient_norm_sq(h: &AxiFn) -> AxiFn {
    let (d1, _) = h.derivatives();
    let v = h.values().iter().zip(&d1).map(|(a, b)| a * a + b * b).collect();
    AxiFn::new(h.grid().clone(), v).expect("grid-sized")
}

/// Convexity tolerance for radius nonnegativity.
pub fn convexity_tol(h: &AxiFn) -> f64 {
    1e-9 * h.max_abs()
}

/// First node with a principal radius below −tol, as a `Convexity` error.
pub fn check_convex(h: &AxiFn) -> Result<()> {
    let tol = convexity_tol(h);
    let radii = principal_radii(h);
    let lateral_counts = h.grid().dim() > 2;
    for i in 0..h.len() {
        let r1 = radii.meridional[i];
        let r2 = radii.lateral[i];
        let bad = if r1 < -tol {
            Some(r1)
        } else if lateral_counts && r2 < -tol {
            Some(r2)
        } else {
            None
        };
        if let Some(radius) = bad {
            return Err(Error::Convexity {
                index: i,
                theta: h.grid().nodes()[i],
                radius,
            });
        }
        if !(h.values()[i] > 0.0) {
            return Err(Error::Domain(format!(
                "support function not positive at node {i} (value {})",
                h.values()[i]
            )));
        }
    }
    Ok(())
}

/// Φ(H) = H^{1−p}·|∇̄H|^{q−n}·det(∇²H + HI), the left side of the dual L_p
/// Minkowski equation.
#[derive(Clone, Copy, Debug)]
pub struct DualLpOperator {
    pub p: f64,
    pub q: f64,
}

impl DualLpOperator {
    pub fn new(p: f64, q: f64) -> Self {
        DualLpOperator { p, q }
    }

    pub fn apply(&self, h: &AxiFn) -> AxiFn {
        let jet = Jet::of(h);
        let v = self.apply_jet(h, &jet);
        AxiFn::new(h.grid().clone(), v).expect("grid-sized")
    }

    fn apply_jet(&self, h: &AxiFn, jet: &Jet) -> Vec<f64> {
        let n = h.grid().dim() as f64;
        let m = h.grid().dim() as i32 - 2;
        let radii = radii_from_jet(h, jet);
        let e = 0.5 * (self.q - n);
        (0..h.len())
            .map(|i| {
                let hh = jet.h[i];
                let grad = hh * hh + jet.d1[i] * jet.d1[i];
                hh.powf(1.0 - self.p)
                    * grad.powf(e)
                    * radii.meridional[i]
                    * radii.lateral[i].powi(m)
            })
            .collect()
    }

    /// Φ(H) and its Jacobian dΦ/dH as a dense nodal matrix.
    pub fn linearize(&self, h: &AxiFn) -> (Vec<f64>, DMatrix<f64>) {
        let grid = h.grid();
        let jet = Jet::of(h);
        let phi = self.apply_jet(h, &jet);
        let n = grid.dim() as f64;
        let m = grid.dim() as i32 - 2;
        let (p, q) = (self.p, self.q);
        let radii = radii_from_jet(h, &jet);
        let size = h.len();
        let mut a1 = vec![0.0; size];
        let mut a2 = vec![0.0; size];
        let mut a3 = vec![0.0; size];
        for i in 0..size {
            let hh = jet.h[i];
            let h1 = jet.d1[i];
            let cot = grid.cos()[i] / grid.sin()[i];
            let grad = hh * hh + h1 * h1;
            let p0 = hh.powf(1.0 - p);
            let dp0 = (1.0 - p) * hh.powf(-p);
            let gq = grad.powf(0.5 * (q - n));
            let dgq = (q - n) * grad.powf(0.5 * (q - n) - 1.0);
            let r1 = radii.meridional[i];
            let r2 = radii.lateral[i];
            let r2m = r2.powi(m);
            let dr2m = if m > 0 { m as f64 * r2.powi(m - 1) } else { 0.0 };
            a1[i] = dp0 * gq * r1 * r2m
                + p0 * dgq * hh * r1 * r2m
                + p0 * gq * r2m
                + p0 * gq * r1 * dr2m;
            a2[i] = p0 * dgq * h1 * r1 * r2m + p0 * gq * r1 * dr2m * cot;
            a3[i] = p0 * gq * r2m;
        }
        let (d1, d2) = grid.diff_matrices();
        let mut jac = DMatrix::zeros(size, size);
        for i in 0..size {
            for j in 0..size {
                jac[(i, j)] = a2[i] * d1[(i, j)] + a3[i] * d2[(i, j)];
            }
            jac[(i, i)] += a1[i];
        }
        (phi, jac)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sphere::MeridianGrid;

    #[test]
    fn ball_density_is_one() {
        for n in 2..5 {
            let g = MeridianGrid::new(n, 64, 2.0).unwrap();
            let ma = monge_ampere(&AxiFn::constant(&g, 1.0));
            assert!(ma.density.values().iter().all(|v| (v - 1.0).abs() < 1e-12));
            assert!(ma.nonconvex.is_empty());
        }
    }

    #[test]
    fn planar_density_of_cosine_perturbation() {
        let g = MeridianGrid::new(2, 64, 1.0).unwrap();
        let h = AxiFn::from_fn(&g, |pt| 1.0 + 0.1 * (2.0 * pt.theta).cos());
        let ma = monge_ampere(&h);
        for (i, v) in ma.density.values().iter().enumerate() {
            let t = g.nodes()[i];
            assert!((v - (1.0 - 0.3 * (2.0 * t).cos())).abs() < 1e-12);
        }
    }

    #[test]
    fn nonconvex_nodes_are_flagged() {
        let g = MeridianGrid::new(2, 64, 1.0).unwrap();
        let h = AxiFn::from_fn(&g, |pt| 1.0 + 0.5 * (2.0 * pt.theta).cos());
        let ma = monge_ampere(&h);
        assert!(!ma.nonconvex.is_empty());
        assert!(check_convex(&h).is_err());
    }

    #[test]
    fn gradient_map_of_ball() {
        let g = MeridianGrid::new(3, 64, 2.0).unwrap();
        let (lat, ax) = gradient_map(&AxiFn::constant(&g, 1.0));
        for i in 0..g.len() {
            assert!((lat.values()[i] - g.sin()[i]).abs() < 1e-13);
            assert!((ax.values()[i] - g.cos()[i]).abs() < 1e-13);
        }
    }

    #[test]
    fn jacobian_matches_finite_differences() {
        let g = MeridianGrid::new(3, 32, 2.0).unwrap();
        let h = AxiFn::from_fn(&g, |pt| 1.0 + 0.05 * (2.0 * pt.theta).cos() + 0.3 * pt.cos.powi(4));
        let op = DualLpOperator::new(-1.5, 0.7);
        let (phi, jac) = op.linearize(&h);
        let dir: Vec<f64> = g.nodes().iter().map(|t| (3.0 * t).cos().powi(2)).collect();
        let eps = 1e-6;
        let plus = AxiFn::new(g.clone(), h.values().iter().zip(&dir).map(|(a, b)| a + eps * b).collect()).unwrap();
        let minus = AxiFn::new(g.clone(), h.values().iter().zip(&dir).map(|(a, b)| a - eps * b).collect()).unwrap();
        let fp = op.apply(&plus);
        let fm = op.apply(&minus);
        let lin = &jac * nalgebra::DVector::from_vec(dir);
        let scale = phi.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        for i in 0..g.len() {
            let fd = (fp.values()[i] - fm.values()[i]) / (2.0 * eps);
            assert!((fd - lin[i]).abs() < 1e-6 * scale.max(1.0), "node {i}: {fd} vs {}", lin[i]);
        }
    }
}
