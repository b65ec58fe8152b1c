//! Solves the dual Lp-Minkowski problem by maximizing ∫ f h^p over bodies of
//! fixed q-th dual volume.
//!
//! Run with `cargo run --release --example variational_solve`.

use dual_minkowski::dual_lp::{dual_volume_of_support, extract_solution, maximize, MaximizeOptions};
use dual_minkowski::quadrature::unit_ball_volume;
use dual_minkowski::sphere::{AxiFn, MeridianGrid};

fn main() -> dual_minkowski::Result<()> {
    let (n, p, q) = (3, -1.0, 2.0);
    let grid = MeridianGrid::new(n, 128, 2.0)?;
    let f = AxiFn::from_fn(&grid, |pt| 1.0 + 0.4 * (2.0 * pt.theta).cos());
    let state = maximize(&f, p, q, &AxiFn::constant(&grid, 1.0), &MaximizeOptions::default())?;
    for entry in &state.log {
        println!(
            "iter {:>3}  J {:.12}  residual {:.3e}  step {:.3e}{}",
            entry.iteration,
            entry.j_value,
            entry.residual,
            entry.step,
            if entry.newton { "  newton" } else { "" }
        );
    }
    let sol = extract_solution(&state, &f, p, q)?;
    let k = unit_ball_volume(n);
    let floor = (f.integral()? / (n as f64 * k)).powf(q / (q - p)) * k;
    println!("converged: {}  c = {:.10}", state.converged, sol.c);
    println!(
        "H in [{:.6}, {:.6}], dual volume {:.10} (floor {:.10}), residual {:.2e}",
        sol.big_h.min(),
        sol.big_h.max(),
        dual_volume_of_support(&sol.big_h, q)?,
        floor,
        sol.residual
    );
    Ok(())
}
