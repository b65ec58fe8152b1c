//! Quadrature, dual volumes and the curvature of rotational ellipsoids.
//!
//! Run with `cargo run --release --example kernel_identities`.

use dual_minkowski::quadrature::unit_ball_volume;
use dual_minkowski::sphere::{
    dual_volume, ellipsoid_body, gradient_map, min_ellipsoid, monge_ampere, surface_area, volume, AxiBody,
    MeridianGrid, RotEllipsoid,
};

fn main() -> dual_minkowski::Result<()> {
    for n in [2, 3, 4] {
        let grid = MeridianGrid::new(n, 256, 2.0)?;
        let ball = AxiBody::unit_ball(&grid);
        println!(
            "n = {n}: sphere area {:.12} (n kappa_n = {:.12}), dual volume q = 0.5: {:.12}",
            grid.sphere_area(),
            n as f64 * unit_ball_volume(n),
            dual_volume(&ball, 0.5)?
        );
    }

    let grid = MeridianGrid::new(3, 512, 2.0)?;
    let e = RotEllipsoid { r: 1.5, a: 4.0 };
    let body = ellipsoid_body(e, &grid);
    let ma = monge_ampere(&body.support).density;
    let worst = (0..grid.len())
        .map(|i| (ma.values()[i] / body.curvature.values()[i] - 1.0).abs())
        .fold(0.0, f64::max);
    println!("ellipsoid {e:?}: det(D^2 h + h I) vs closed form, worst relative error {worst:.2e}");
    println!(
        "  volume {:.10}, dual volume q = n {:.10}, kappa_n r^n {:.10}, area {:.10}",
        volume(&body)?,
        dual_volume(&body, 3.0)?,
        unit_ball_volume(3) * e.r.powi(3),
        surface_area(&body)?
    );

    let (lat, ax) = gradient_map(&body.support);
    let last = grid.len() - 1;
    println!(
        "  gradient map near the equator: ({:.6}, {:.6}); axis length r a^(1/n) = {:.6}",
        lat.values()[last],
        ax.values()[last],
        e.r * e.a.powf(1.0 / 3.0)
    );
    let fitted = min_ellipsoid(&body)?;
    println!("  minimum ellipsoid recovers (r, a) = ({:.8}, {:.8})", fitted.r, fitted.a);
    Ok(())
}
