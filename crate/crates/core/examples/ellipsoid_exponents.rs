//! Decay of F(A) = ∫ |x'|^α |x_n|^β |Ax|^p along normalized ellipsoid sweeps,
//! fitted against the predicted exponents.
//!
//! Run with `cargo run --release --example ellipsoid_exponents`.

use dual_minkowski::ellipsoid_bounds::{band_ratio, geometric_sweep, regime_matrix, verify_decay, ARegime};

fn main() -> dual_minkowski::Result<()> {
    println!("{:<6} {:>2} {:>5} {:>6} {:>6} {:>10} {:>10} {:>6}", "regime", "n", "q", "alpha", "beta", "predicted", "fitted", "ok");
    for (fp, regime) in regime_matrix() {
        let sweep = match regime {
            ARegime::A1 => geometric_sweep(1e2, 10.0, 4),
            _ => geometric_sweep(1e-2, 0.1, 4),
        };
        let fit = verify_decay(&fp, regime, &sweep)?;
        let log = if fit.predicted.has_log() {
            format!(" (log^{})", fit.predicted.log_power)
        } else {
            String::new()
        };
        println!(
            "{:<6} {:>2} {:>5} {:>6.3} {:>6.3} {:>10.4} {:>10.4} {:>6}{log}",
            format!("{regime:?}"),
            fp.n,
            fp.q,
            fp.alpha,
            fp.beta,
            fit.predicted.power,
            fit.fitted_slope,
            fit.passes()
        );
    }
    let (fp, _) = regime_matrix()[0];
    let band = geometric_sweep(1.0 / 3.0, 9f64.powf(0.125), 9);
    println!("bounded band max/min for {fp:?}: {:.4}", band_ratio(&fp, &band)?);
    Ok(())
}
