use std::f64::consts::PI;
use std::sync::Arc;

use dual_minkowski::dual_lp::{
    dual_volume_of_support, extract_solution, functional_j, maximize, normalize_to_constraint, variation_check,
    MaximizeOptions,
};
use dual_minkowski::sphere::{gradient_map, monge_ampere, AxiFn, MeridianGrid};
use proptest::prelude::*;

fn kappa(n: usize) -> f64 {
    match n {
        2 => PI,
        3 => 4.0 * PI / 3.0,
        _ => unreachable!(),
    }
}

fn trig(grid: &Arc<MeridianGrid>, base: f64, c: &[f64]) -> AxiFn {
    AxiFn::from_fn(grid, |pt| {
        base + c
            .iter()
            .enumerate()
            .map(|(k, ck)| ck * (2.0 * (k + 1) as f64 * pt.theta).cos())
            .sum::<f64>()
    })
}

fn scaled_coeffs(raw: &[f64], budget: f64) -> Vec<f64> {
    let weight: f64 = raw
        .iter()
        .enumerate()
        .map(|(k, c)| (4.0 * ((k + 1) * (k + 1)) as f64 + 1.0) * c.abs())
        .sum();
    raw.iter().map(|c| c * budget / weight.max(1e-12)).collect()
}

/// |∇̄h|^{q−n} det(∇²h + hI), from the gradient map and the Monge-Ampère density.
fn dual_curvature(h: &AxiFn, q: f64) -> AxiFn {
    let n = h.grid().dim() as f64;
    let (lat, ax) = gradient_map(h);
    let norm = lat.zip_with(&ax, |a, b| a.hypot(b));
    monge_ampere(h).density.zip_with(&norm, |m, g| m * g.powf(q - n))
}

#[test]
fn j_of_the_constant_is_the_mass() {
    let grid = MeridianGrid::new(3, 128, 2.0).unwrap();
    let f = trig(&grid, 1.0, &[0.3]);
    let j = functional_j(&AxiFn::constant(&grid, 1.0), &f, -1.5).unwrap();
    assert!((j - f.integral().unwrap()).abs() < 1e-12);
}

#[test]
fn normalization_hits_the_ball_volume() {
    let grid = MeridianGrid::new(2, 128, 2.0).unwrap();
    let g = trig(&grid, 2.0, &[0.1, -0.01]);
    for q in [0.5, 1.0, 3.0] {
        let h = normalize_to_constraint(&g, q).unwrap();
        let v = dual_volume_of_support(&h, q).unwrap();
        assert!((v / kappa(2) - 1.0).abs() < 1e-10);
    }
}

#[test]
fn inadmissible_exponents_are_rejected() {
    let grid = MeridianGrid::new(2, 64, 2.0).unwrap();
    let one = AxiFn::constant(&grid, 1.0);
    let opts = MaximizeOptions::default();
    assert!(maximize(&one, 0.5, 1.0, &one, &opts).is_err());
    assert!(maximize(&one, -1.0, -1.0, &one, &opts).is_err());
    assert!(maximize(&one.scale(-1.0), -1.0, 1.0, &one, &opts).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn maximizer_invariants(
        raw in prop::collection::vec(-1.0f64..1.0, 2),
        budget in 0.0f64..0.5,
        p in -2.0f64..-0.5,
        q in 0.5f64..3.0,
        n in 2usize..=3,
    ) {
        let grid = MeridianGrid::new(n, 64, 2.0).unwrap();
        let f = trig(&grid, 1.0, &scaled_coeffs(&raw, budget));
        let k = kappa(n);
        let state = maximize(&f, p, q, &AxiFn::constant(&grid, 1.0), &MaximizeOptions::default()).unwrap();

        // ascent and constraint preservation on every accepted iterate
        for w in state.log.windows(2) {
            prop_assert!(w[1].j_value >= w[0].j_value, "{:?}", state.log);
        }
        for entry in &state.log {
            prop_assert!(entry.constraint_gap.abs() / k <= 1e-10);
        }
        if state.converged {
            let f_l1 = f.integral().unwrap();
            let sol = extract_solution(&state, &f, p, q).unwrap();
            let floor = (f_l1 / (n as f64 * k)).powf(q / (q - p)) * k;
            let dv = dual_volume_of_support(&sol.big_h, q).unwrap();
            prop_assert!(dv >= floor - 1e-8, "dv {dv} below {floor}");

            // the Lagrange defect f h^{p−1} − cΨ is orthogonal to h itself
            let psi = dual_curvature(&state.h, q);
            let defect: Vec<f64> = (0..grid.len())
                .map(|i| {
                    let h = state.h.values()[i];
                    (f.values()[i] * h.powf(p - 1.0) - sol.c * psi.values()[i]) * h
                })
                .collect();
            let scale: f64 = grid.integrate(&defect.iter().map(|v| v.abs()).collect::<Vec<_>>()).unwrap()
                .max(state.j_value);
            let paired = grid.integrate(&defect).unwrap();
            prop_assert!(paired.abs() <= 1e-8 * scale, "{paired:.3e} vs {scale:.3e}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn first_variation_matches_formula(
        raw in prop::collection::vec(-1.0f64..1.0, 3),
        budget in 0.05f64..0.8,
        eta in prop::collection::vec(-1.0f64..1.0, 4),
        q in 0.5f64..3.0,
        n in 2usize..=3,
    ) {
        let grid = MeridianGrid::new(n, 256, 2.0).unwrap();
        let h = trig(&grid, 1.0, &scaled_coeffs(&raw, budget));
        let direction = trig(&grid, eta[0], &eta[1..]);
        let check = variation_check(&h, &direction, q, 1e-4).unwrap();
        prop_assert!(check.rel_error() <= 1e-5, "{check:?}");
    }
}
