//! Alexandrov bodies and the radial/support conversions.
//!
//! For axisymmetric data both extremal problems
//!
//! ```text
//! ρ(u) = min_{⟨u,x⟩>0} g(x)/⟨u,x⟩,      h(x) = max_{⟨u,x⟩>0} ρ(u)⟨u,x⟩
//! ```
//!
//! are attained with x and u in a common meridian plane, so they reduce to a
//! one-dimensional search over θ ∈ (θ₀ − π/2, θ₀ + π/2) on the full meridian
//! circle, where the field is extended by its even reflections. The search
//! scans the reflected node images and then polishes the best bracket by
//! golden section on the spectral interpolant.

use std::f64::consts::{FRAC_PI_2, PI};

use rayon::prelude::*;

use super::field::{AxiFn, Interpolant};
use super::operators::check_convex;

/// A radial-type field known at the grid nodes and evaluable anywhere.
pub trait RadialField: Sync {
    fn field(&self) -> &AxiFn;
    fn at(&self, theta: f64) -> f64;
}

/// An `AxiFn` paired with its interpolant.
pub struct Interpolated<'a> {
    field: &'a AxiFn,
    interp: Interpolant,
}

impl<'a> Interpolated<'a> {
    pub fn new(field: &'a AxiFn) -> Self {
        Interpolated {
            field,
            interp: field.interpolant(),
        }
    }
}

impl RadialField for Interpolated<'_> {
    fn field(&self) -> &AxiFn {
        self.field
    }
    fn at(&self, theta: f64) -> f64 {
        self.interp.value(theta)
    }
}

/// Radial function of the Alexandrov body of g, evaluated exactly at any
/// angle (up to the golden-section tolerance on the minimizer).
pub struct AlexandrovBody<'a> {
    g: Interpolated<'a>,
    images: Images,
    radial: AxiFn,
}

impl<'a> AlexandrovBody<'a> {
    pub fn new(g: &'a AxiFn) -> Self {
        let g = Interpolated::new(g);
        let images = Images::new(g.field);
        let grid = g.field.grid().clone();
        let values: Vec<f64> = grid
            .nodes()
            .par_iter()
            .map(|&t| envelope(t, &images, &|x| g.at(x), Extremum::Min))
            .collect();
        let radial = AxiFn::new(grid, values).expect("grid-sized");
        AlexandrovBody { g, images, radial }
    }
}

impl RadialField for AlexandrovBody<'_> {
    fn field(&self) -> &AxiFn {
        &self.radial
    }
    fn at(&self, theta: f64) -> f64 {
        envelope(theta, &self.images, &|x| self.g.at(x), Extremum::Min)
    }
}

/// Radial function of the Alexandrov body of a positive g.
pub fn alexandrov_radial(g: &AxiFn) -> AxiFn {
    AlexandrovBody::new(g).radial
}

/// Support function h(x) = max_u ρ(u)⟨u, x⟩ of the star body with radial ρ.
pub fn support_from_radial(rho: &AxiFn) -> AxiFn {
    support_of(&Interpolated::new(rho))
}

/// `support_from_radial` for any radial field.
pub fn support_of<R: RadialField>(rho: &R) -> AxiFn {
    let field = rho.field();
    let images = Images::new(field);
    let grid = field.grid().clone();
    let values = grid
        .nodes()
        .par_iter()
        .map(|&t| envelope(t, &images, &|u| rho.at(u), Extremum::Max))
        .collect();
    AxiFn::new(grid, values).expect("grid-sized")
}

/// Support function of the Alexandrov body of g; g itself when g is already
/// a convex support function.
pub fn convexify(g: &AxiFn) -> AxiFn {
    if check_convex(g).is_ok() {
        return g.clone();
    }
    support_of(&AlexandrovBody::new(g))
}

/// Node values reflected onto (−π/2, π), sorted by angle.
struct Images {
    angles: Vec<f64>,
    values: Vec<f64>,
}

impl Images {
    fn new(f: &AxiFn) -> Self {
        let t = f.grid().nodes();
        let v = f.values();
        let n = t.len();
        let mut angles = Vec::with_capacity(3 * n);
        let mut values = Vec::with_capacity(3 * n);
        for i in (0..n).rev() {
            angles.push(-t[i]);
            values.push(v[i]);
        }
        for i in 0..n {
            angles.push(t[i]);
            values.push(v[i]);
        }
        for i in (0..n).rev() {
            angles.push(PI - t[i]);
            values.push(v[i]);
        }
        Images { angles, values }
    }
}

#[derive(Clone, Copy)]
enum Extremum {
    Min,
    Max,
}

/// min of f(θ)/cos(θ₀ − θ) or max of f(θ)·cos(θ₀ − θ) over the open half
/// circle around θ₀ ∈ [0, π/2], as a minimization of `objective`.
fn envelope(center: f64, images: &Images, eval: &dyn Fn(f64) -> f64, kind: Extremum) -> f64 {
    let (center, _) = super::grid::reduce_angle(center);
    let objective = |theta: f64, value: f64| -> f64 {
        let c = (center - theta).cos();
        match kind {
            Extremum::Min => value / c,
            Extremum::Max => -value * c,
        }
    };
    let lo = center - FRAC_PI_2;
    let hi = center + FRAC_PI_2;
    let start = images.angles.partition_point(|&a| a <= lo);
    let end = images.angles.partition_point(|&a| a < hi);
    let mut best = f64::INFINITY;
    let mut best_idx = start;
    for j in start..end {
        let v = objective(images.angles[j], images.values[j]);
        // strict comparison keeps the leftmost of tied candidates
        if v < best {
            best = v;
            best_idx = j;
        }
    }
    if end > start {
        let a = if best_idx > start {
            images.angles[best_idx - 1]
        } else {
            lo
        };
        let b = if best_idx + 1 < end {
            images.angles[best_idx + 1]
        } else {
            hi
        };
        let f = |theta: f64| objective(theta, eval(theta));
        let refined = golden_min(&f, a.max(lo + 1e-12), b.min(hi - 1e-12));
        if refined < best {
            best = refined;
        }
    }
    match kind {
        Extremum::Min => best,
        Extremum::Max => -best,
    }
}

/// Minimum value found by golden-section search on [a, b].
pub(crate) fn golden_min(f: &dyn Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    let mut best = fc.min(fd);
    for _ in 0..80 {
        if (b - a).abs() < 1e-14 {
            break;
        }
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
            best = best.min(fc);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
            best = best.min(fd);
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sphere::MeridianGrid;

    #[test]
    fn ball_is_fixed() {
        let g = MeridianGrid::new(3, 64, 2.0).unwrap();
        let one = AxiFn::constant(&g, 1.0);
        let rho = alexandrov_radial(&one);
        assert!(rho.values().iter().all(|v| (v - 1.0).abs() < 1e-12));
        let h = support_from_radial(&rho);
        assert!(h.values().iter().all(|v| (v - 1.0).abs() < 1e-12));
    }

    #[test]
    fn planar_brute_force_radial() {
        // g(θ) = 2 − cos 2θ in the plane, against a dense scan of constraints
        let g = MeridianGrid::new(2, 128, 2.0).unwrap();
        let gf = AxiFn::from_fn(&g, |pt| 2.0 - (2.0 * pt.theta).cos());
        let rho = alexandrov_radial(&gf);
        let m = 100_000;
        for (i, &tu) in g.nodes().iter().enumerate().step_by(9) {
            let mut best = f64::INFINITY;
            for k in 0..m {
                let tx = -PI + 2.0 * PI * (k as f64 + 0.5) / m as f64;
                let c = (tu - tx).cos();
                if c > 0.0 {
                    best = best.min((2.0 - (2.0 * tx).cos()) / c);
                }
            }
            assert!((rho.values()[i] - best).abs() < 1e-6, "node {i}: {} vs {best}", rho.values()[i]);
        }
    }

    #[test]
    fn convexify_leaves_support_functions_alone() {
        let g = MeridianGrid::new(3, 64, 2.0).unwrap();
        let h = AxiFn::from_fn(&g, |pt| (0.5 * pt.sin.powi(2) + 2.0 * pt.cos.powi(2)).sqrt());
        let c = convexify(&h);
        assert_eq!(c.values(), h.values());
    }

    #[test]
    fn convexify_lowers_nonconvex_data() {
        let g = MeridianGrid::new(2, 96, 2.0).unwrap();
        let bumpy = AxiFn::from_fn(&g, |pt| 1.0 + 0.4 * (6.0 * pt.theta).cos());
        let c = convexify(&bumpy);
        for (a, b) in c.values().iter().zip(bumpy.values()) {
            assert!(*a <= b * (1.0 + 1e-13));
        }
        assert!(c.values().iter().zip(bumpy.values()).any(|(a, b)| a < &(b - 1e-3)));
    }
}
