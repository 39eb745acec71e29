//! The mode equation dψ/dt + w⁽ʳ⁾ψ = 0 along a geodesic, driven through two
//! code paths that must agree: the real scalar ODE, and the same dynamics
//! written as iħ dψ/dt = Ĥψ with Ĥ = −iħw⁽ʳ⁾ in complex arithmetic.
//!
//! Along the half-plane semicircle geodesic the closed form is
//! ψ(t)/ψ(0) = √(det g(x₀)/det g(x(t))) = (y(t)/y₀)² = sech²(t).
//!
//! Run with: cargo run --example mode_analogy

use geospin::manifold::zoo::builtin_manifold;
use geospin::{
    evolve_mode, evolve_mode_schroedinger, integrate_geodesic, GeodesicState, ModeState,
};
use std::collections::BTreeMap;

fn main() -> geospin::Result<()> {
    let field = builtin_manifold("poincare-half-plane", &BTreeMap::new())?;
    let start = GeodesicState::new(0.0, vec![0.0, 1.0], vec![1.0, 0.0]);

    // The geodesic supplies w⁽ʳ⁾ on the half-step grid of the mode solver.
    let traj = integrate_geodesic(&field, &start, 1.0, 5e-4)?;
    traj.check_mode_grid()?;
    let w_samples = traj.w_samples()?;
    let h_mode = 2.0 * traj.step;

    let psi0 = ModeState::new(0.0, vec![1.0]);
    let real_path = evolve_mode(&w_samples, &psi0, h_mode)?;
    let schroedinger_path = evolve_mode_schroedinger(&w_samples, &psi0, h_mode, 1.0)?;

    println!("t       ψ(t)          sech²(t)      |ψ−sech²|   |paths differ|");
    let mut worst_closed = 0.0f64;
    let mut worst_paths = 0.0f64;
    for (a, b) in real_path.iter().zip(&schroedinger_path).step_by(125) {
        let expected = 1.0 / a.t.cosh().powi(2);
        let closed = (a.psi[0] - expected).abs();
        let paths = (a.psi[0] - b.psi[0]).abs();
        worst_closed = worst_closed.max(closed);
        worst_paths = worst_paths.max(paths);
        println!(
            "{:<7.3} {:<13.10} {:<13.10} {:<11.3e} {:.3e}",
            a.t, a.psi[0], expected, closed, paths
        );
    }
    println!("\nmax |ψ − sech²|:              {worst_closed:.3e}");
    println!("max |real − schroedinger|:    {worst_paths:.3e}");
    Ok(())
}
