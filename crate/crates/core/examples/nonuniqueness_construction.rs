//! Builds the constructed and the variational solution for the same data
//! over an ε sweep and reports the distinctness verdict and decay fits.
//!
//! Run with `cargo run --release --example nonuniqueness_construction`.
//! Pass `n p q` as arguments to change the instance (default 2 -1 0.5).

use dual_minkowski::nonuniqueness::{
    choose_parameters, decay_checks, predicted_dv_slope, run_pipeline, PipelineOptions,
};
use dual_minkowski::sphere::ProblemParams;

fn main() -> dual_minkowski::Result<()> {
    let args: Vec<f64> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let (n, p, q) = match args.as_slice() {
        [n, p, q] => (*n as usize, *p, *q),
        _ => (2, -1.0, 0.5),
    };
    let (alpha, beta, delta) = choose_parameters(n, p, q)?;
    let params = ProblemParams { n, p, q, alpha, beta, delta, epsilon: 0.05 };
    let opts = PipelineOptions { nodes: 256, ..PipelineOptions::default() };
    let run = run_pipeline(&params, &[0.4, 0.2, 0.1, 0.05], &opts)?;
    println!("alpha {alpha}, beta {beta}, delta {delta}; N = {}", opts.nodes);
    println!("{:>6} {:>12} {:>12} {:>8} {:>10} {:>10} {:>6}", "eps", "dv_constr", "dv_var", "ratio", "gap", "f_l1", "S0");
    for r in &run.records {
        println!(
            "{:>6} {:>12.6e} {:>12.6e} {:>8.4} {:>10.3e} {:>10.6} {:>6}",
            r.params.epsilon,
            r.dv_constructed,
            r.dv_variational,
            r.ratio(),
            r.solution_gap,
            r.f_l1,
            r.s0_check
        );
    }
    let v = run.verdict;
    println!("verdict: {} (ratio {:.4}, gap {:.3e} at eps {})", if v.pass { "PASS" } else { "FAIL" }, v.ratio, v.gap, v.smallest_eps);
    let decay = decay_checks(&run.records)?;
    println!(
        "dv_constructed slope {:.4} (predicted {:.4}); f_l1 slope {:.4}; variational slope {:.4}",
        decay.family.dv_slope,
        predicted_dv_slope(p, q, delta),
        decay.family.f_l1_slope,
        decay.dv_variational_slope
    );
    Ok(())
}
