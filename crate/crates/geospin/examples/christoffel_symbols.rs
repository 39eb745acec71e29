//! Christoffel symbols and the log-volume gradient on two classic charts.
//!
//! Run with: cargo run --example christoffel_symbols

use geospin::manifold::zoo::builtin_manifold;
use geospin::{christoffel_at, ChartPoint};
use std::collections::BTreeMap;

fn main() -> geospin::Result<()> {
    let none = BTreeMap::new();

    // Poincaré half-plane, g = diag(1/y², 1/y²): the nonzero symbols are
    // Γ^x_xy = Γ^x_yx = −1/y, Γ^y_xx = 1/y, Γ^y_yy = −1/y.
    let half_plane = builtin_manifold("poincare-half-plane", &none)?;
    let p = ChartPoint(vec![0.0, 2.0]);
    let ch = christoffel_at(&half_plane, &p)?;
    println!("poincare-half-plane at (x, y) = (0, 2)");
    print_gamma(&ch.gamma, half_plane.coords());
    println!("  A = ∂ ln √det g = [{}, {}]   (expected [0, -1])\n", ch.a[0], ch.a[1]);

    // Unit sphere at θ = π/4: Γ^θ_φφ = −sinθcosθ = −1/2, Γ^φ_θφ = cotθ = 1.
    let sphere = builtin_manifold("sphere", &none)?;
    let p = ChartPoint(vec![std::f64::consts::FRAC_PI_4, 0.0]);
    let ch = christoffel_at(&sphere, &p)?;
    println!("unit sphere at theta = pi/4");
    print_gamma(&ch.gamma, sphere.coords());
    println!("  A = [{}, {}]   (expected [cot(pi/4), 0] = [1, 0])", ch.a[0], ch.a[1]);

    // The trace identity Σ_k Γ^k_kj = A_j, two independently computed sides.
    let trace = ch.gamma_trace();
    println!(
        "  trace identity residual: {:.3e}",
        (0..2).map(|j| (trace[j] - ch.a[j]).abs()).fold(0.0, f64::max)
    );
    Ok(())
}

fn print_gamma(gamma: &geospin::Tensor3, coords: &[String]) {
    let n = gamma.dim();
    for k in 0..n {
        for i in 0..n {
            for j in i..n {
                let value = gamma.get(k, i, j);
                if value != 0.0 {
                    println!(
                        "  Gamma^{}_{{{} {}}} = {}",
                        coords[k], coords[i], coords[j], value
                    );
                }
            }
        }
    }
}
