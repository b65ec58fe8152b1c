use std::f64::consts::FRAC_PI_2;
use std::sync::Arc;

use dual_minkowski::nonuniqueness::{
    choose_parameters, envelope_constant, f_epsilon, family_point, positivity_window, pulled_angle, s0_checks,
    transform_identity_check, transform_support, S0Region,
};
use dual_minkowski::sphere::{principal_radii, AxiFn, MeridianGrid, ProblemParams};
use proptest::prelude::*;

fn trig(grid: &Arc<MeridianGrid>, c: &[f64]) -> AxiFn {
    AxiFn::from_fn(grid, |pt| {
        1.0 + c
            .iter()
            .enumerate()
            .map(|(k, ck)| ck * (2.0 * (k + 1) as f64 * pt.theta).cos())
            .sum::<f64>()
    })
}

fn convex_coeffs() -> impl Strategy<Value = Vec<f64>> {
    (prop::collection::vec(-1.0f64..1.0, 3), 0.05f64..0.8).prop_map(|(raw, budget)| {
        let weight: f64 = raw
            .iter()
            .enumerate()
            .map(|(k, c)| (4.0 * ((k + 1) * (k + 1)) as f64 + 1.0) * c.abs())
            .sum();
        raw.iter().map(|c| c * budget / weight.max(1e-12)).collect()
    })
}

#[test]
fn parameter_choice_for_the_standard_instances() {
    assert_eq!(choose_parameters(2, -1.0, 0.5).unwrap(), (0.0, 0.0, 0.75));
    for (n, p, q) in [(2, -1.0, 0.5), (3, -1.0, 2.0), (2, -1.0, 2.0), (3, -2.5, 1.0)] {
        let (alpha, beta, delta) = choose_parameters(n, p, q).unwrap();
        let params = ProblemParams { n, p, q, alpha, beta, delta, epsilon: 0.1 };
        params.validate().unwrap();
        assert!(1.0 - q < delta && delta < -p);
    }
    let err = choose_parameters(2, -0.4, 0.5).unwrap_err();
    assert!(err.to_string().contains("p < q-1 violated"), "{err}");
}

#[test]
fn positivity_window_instances() {
    // 1 + n/p < 1/p + 1/q < n/q − 1
    assert!(positivity_window(3, -1.0, 2.0));
    assert!(positivity_window(2, -1.0, 0.5));
    assert!(!positivity_window(2, -2.0, 4.0));
}

#[test]
fn s0_band_for_the_ball() {
    let grid = MeridianGrid::new(2, 256, 2.0).unwrap();
    let ball = AxiFn::constant(&grid, 1.0);
    let c = envelope_constant([&ball]);
    assert_eq!(c, 1.0);
    let (region, verdicts) = s0_checks(&[&ball], c).unwrap();
    // C = 1 puts the band boundary at 45 degrees
    assert!((region.threshold - std::f64::consts::FRAC_PI_4.cos()).abs() < 1e-12);
    assert!(verdicts[0]);
    let wide = S0Region::new(&grid, 3.0);
    let covered = |r: &S0Region| r.mask.iter().filter(|m| **m).count();
    assert!(covered(&wide) < covered(&region));
}

#[test]
fn f_is_positive_for_convex_data() {
    let grid = MeridianGrid::new(3, 128, 2.0).unwrap();
    let (alpha, beta, delta) = choose_parameters(3, -1.0, 2.0).unwrap();
    let params = ProblemParams { n: 3, p: -1.0, q: 2.0, alpha, beta, delta, epsilon: 0.2 };
    let f = f_epsilon(&trig(&grid, &[0.05, 0.01]), &params);
    assert!(f.values().iter().all(|v| v.is_finite() && *v > 0.0));
}

/// The constructed pair solves the equation to discretization accuracy:
/// the residual falls by at least the second-order factor from N = 32 to 64
/// at small ε and stays small once the grid resolves ε.
#[test]
fn constructed_residual_under_refinement() {
    for (n, p, q) in [(2, -1.0, 0.5), (3, -1.0, 2.0)] {
        let (alpha, beta, delta) = choose_parameters(n, p, q).unwrap();
        for eps in [0.1, 0.05] {
            let params = ProblemParams { n, p, q, alpha, beta, delta, epsilon: eps };
            let res: Vec<f64> = [32, 64, 128, 256]
                .iter()
                .map(|&size| {
                    let grid = MeridianGrid::new(n, size, 2.0).unwrap();
                    family_point(&params, &grid).unwrap().residual_constructed
                })
                .collect();
            assert!(res[0] / res[1] >= 4.0, "n = {n}, eps = {eps}: {res:?}");
            assert!(res[2..].iter().all(|r| *r <= 1e-6), "n = {n}, eps = {eps}: {res:?}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pulled_angle_is_monotone_and_fixes_the_ends(a in 0.0f64..FRAC_PI_2, b in 0.0f64..FRAC_PI_2, eps in 1e-3f64..1.0) {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        prop_assert!(pulled_angle(lo, eps) <= pulled_angle(hi, eps));
        prop_assert!(pulled_angle(0.0, eps).abs() < 1e-15);
        prop_assert!((pulled_angle(FRAC_PI_2, eps) - FRAC_PI_2).abs() < 1e-15);
        prop_assert!((pulled_angle(a, 1.0) - a).abs() < 1e-15);
        // ε < 1 pulls toward the equator
        prop_assert!(pulled_angle(a, eps) >= a - 1e-15);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn transform_is_homogeneous_and_keeps_convexity(
        c in convex_coeffs(),
        eps in 0.05f64..1.0,
        lambda in 0.2f64..5.0,
        n in 2usize..=3,
    ) {
        let grid = MeridianGrid::new(n, 256, 2.0).unwrap();
        let (p, q, delta) = (-1.0, 0.5, 0.75);
        let h = trig(&grid, &c);
        let big = transform_support(&h, eps, p, q, delta);
        let scaled = transform_support(&h.scale(lambda), eps, p, q, delta);
        for (u, v) in scaled.values().iter().zip(big.values()) {
            prop_assert!((u - lambda * v).abs() <= 1e-12 * lambda * v.abs());
        }
        let floor = -1e-9 * big.max();
        let radii = principal_radii(&big);
        prop_assert!(radii.meridional.iter().chain(&radii.lateral).all(|r| *r >= floor));
    }

    #[test]
    fn transform_identity_for_random_bodies(c in convex_coeffs(), eps in 0.1f64..0.5, n in 2usize..=3) {
        let grid = MeridianGrid::new(n, 1024, 2.0).unwrap();
        let mismatch = transform_identity_check(&trig(&grid, &c), eps);
        prop_assert!(mismatch <= 1e-6, "{mismatch:.3e}");
    }
}
