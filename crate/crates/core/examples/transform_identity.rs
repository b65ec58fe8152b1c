//! The linear stretch x ↦ diag(1, …, 1, ε)x acting on support functions:
//! det(∇²u + uI) of the image against the pulled-back density of h.
//!
//! Run with `cargo run --release --example transform_identity`.

use dual_minkowski::nonuniqueness::{pulled_angle, transform_identity_check};
use dual_minkowski::sphere::{AxiFn, MeridianGrid};

fn main() -> dual_minkowski::Result<()> {
    for theta in [0.1, 0.5, 1.0, 1.5] {
        println!("pulled angle of {theta}: eps 0.3 -> {:.6}, eps 0.1 -> {:.6}", pulled_angle(theta, 0.3), pulled_angle(theta, 0.1));
    }
    for size in [256, 512, 1024, 2048] {
        let grid = MeridianGrid::new(2, size, 2.0)?;
        let h = AxiFn::from_fn(&grid, |pt| 1.0 + 0.08 * (2.0 * pt.theta).cos() - 0.01 * (4.0 * pt.theta).cos());
        let row: Vec<String> = [0.3, 0.1, 0.03]
            .iter()
            .map(|&eps| format!("eps {eps}: {:.2e}", transform_identity_check(&h, eps)))
            .collect();
        println!("N = {size:>4}  {}", row.join("  "));
    }
    Ok(())
}
