//! The classical Minkowski problem for the degenerate data used by the
//! construction, at a few values of ε.
//!
//! Run with `cargo run --release --example minkowski_solve`.

use dual_minkowski::minkowski::{minkowski_residual, rhs_classical, solve_minkowski, verify_h_bounds};
use dual_minkowski::nonuniqueness::choose_parameters;
use dual_minkowski::sphere::{monge_ampere, MeridianGrid, ProblemParams};

fn main() -> dual_minkowski::Result<()> {
    let (n, p, q) = (2, -1.0, 0.5);
    let (alpha, beta, delta) = choose_parameters(n, p, q)?;
    let grid = MeridianGrid::new(n, 512, 2.0)?;
    let mut solutions = Vec::new();
    for eps in [0.4, 0.2, 0.1, 0.05] {
        let params = ProblemParams { n, p, q, alpha, beta, delta, epsilon: eps };
        let g = rhs_classical(&params, &grid)?.values;
        let h = solve_minkowski(&g)?;
        let mass = g.integral()?;
        let area = monge_ampere(&h).density.integral()?;
        println!(
            "eps {eps:<5} h in [{:.6}, {:.6}]  residual {:.2e}  mass {:.10} area {:.10}",
            h.min(),
            h.max(),
            minkowski_residual(&h, &g),
            mass,
            area
        );
        solutions.push((eps, h));
    }
    let sweep: Vec<(f64, &_)> = solutions.iter().map(|(e, h)| (*e, h)).collect();
    let report = verify_h_bounds(&sweep);
    println!(
        "envelope slopes: max {:?}, min {:?}; bounded: {}",
        report.slope_max, report.slope_min, report.pass
    );
    Ok(())
}
