//! Seeded random test data.

use std::sync::Arc;

use rand::Rng;

use crate::sphere::{AxiFn, MeridianGrid, RotEllipsoid};

/// h = 1 + Σ_{k≤3} c_k cos 2kθ with Σ(4k² + 1)|c_k| ≤ 0.9, so both principal
/// radii stay above 0.1 and h is a strictly convex support function.
pub fn random_convex(grid: &Arc<MeridianGrid>, rng: &mut impl Rng) -> AxiFn {
    let raw: Vec<f64> = (1..=3).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let weight: f64 = raw
        .iter()
        .enumerate()
        .map(|(k, c)| (4.0 * ((k + 1) * (k + 1)) as f64 + 1.0) * c.abs())
        .sum();
    let budget = rng.gen_range(0.1..0.9);
    let coeffs: Vec<f64> = raw.iter().map(|c| c * budget / weight).collect();
    AxiFn::from_fn(grid, |pt| {
        1.0 + coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c * (2.0 * (k + 1) as f64 * pt.theta).cos())
            .sum::<f64>()
    })
}

/// A random smooth even perturbation direction of unit sup norm.
pub fn random_direction(grid: &Arc<MeridianGrid>, rng: &mut impl Rng) -> AxiFn {
    let coeffs: Vec<f64> = (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let eta = AxiFn::from_fn(grid, |pt| {
        coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c * (2.0 * k as f64 * pt.theta).cos())
            .sum::<f64>()
    });
    let scale = eta.max_abs().max(1e-300);
    eta.scale(1.0 / scale)
}

/// A rotational ellipsoid with r ∈ [0.5, 2] and log a ∈ [−1, 1].
pub fn random_ellipsoid(rng: &mut impl Rng) -> RotEllipsoid {
    RotEllipsoid {
        r: rng.gen_range(0.5..2.0),
        a: rng.gen_range(-1.0f64..1.0).exp(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sphere::operators::check_convex;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn samples_are_convex() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 2..5 {
            let grid = MeridianGrid::new(n, 64, 2.0).unwrap();
            for _ in 0..20 {
                check_convex(&random_convex(&grid, &mut rng)).unwrap();
            }
        }
    }
}
