//! Least-squares line fits for log-log slope measurements.

/// Slope and intercept of the least-squares line through (x, y).
pub fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64) {
    assert_eq!(x.len(), y.len());
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
    }
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

/// Slope of log y against log x.
pub fn log_log_slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    linear_fit(&lx, &ly).0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_power_law() {
        let x = [1e-2, 1e-1, 1.0, 10.0];
        let y: Vec<f64> = x.iter().map(|v: &f64| 3.0 * v.powf(-0.7)).collect();
        assert!((log_log_slope(&x, &y) + 0.7).abs() < 1e-12);
    }
}
