//! Ricci flow dg/dt = −2 Ric on the two constant-curvature workhorses.
//!
//! The round unit sphere shrinks as g(t) = (1 − 2t) g₀ and goes extinct at
//! t = 1/2; the hyperbolic half-plane expands as g(t) = (1 + 2t) g₀. Along
//! both flows the geospin function w⁽ʳ⁾ = ½ tr(g⁻¹ ġ) equals −R, so the
//! geometric Hamiltonian H = −iħw⁽ʳ⁾ equals iħR.
//!
//! Run with: cargo run --example ricci_flow

use geospin::manifold::zoo::builtin_manifold;
use geospin::{corollary_check, ricci_flow_integrate, ChartPoint, FlowMode};
use std::collections::BTreeMap;

fn main() -> geospin::Result<()> {
    let none = BTreeMap::new();

    let sphere = builtin_manifold("sphere", &none)?;
    let p = ChartPoint(vec![std::f64::consts::FRAC_PI_2, 0.0]);
    let traj = ricci_flow_integrate(&sphere, &p, 1.0, 1e-3, FlowMode::Pointwise)?;
    println!("unit sphere under Ricci flow:");
    println!("  t        c(t)      R(t)       w⁽ʳ⁾(t)    |w⁽ʳ⁾+R|");
    for s in traj.samples.iter().step_by(100) {
        println!(
            "  {:<8.3} {:<9.6} {:<10.5} {:<10.5} {:.2e}",
            s.t, s.c, s.scalar, s.w_r, s.residual
        );
    }
    println!(
        "  extinction at t = {:?} (analytic: c(t) = 1 − 2t vanishes at 0.5)",
        traj.extinction
    );
    let report = corollary_check(&traj, 1.0)?;
    println!(
        "  corollary H = iħR: defect {:.2e} ≤ tolerance {:.2e} → pass = {}\n",
        report.hamiltonian_defect, report.tolerance, report.pass
    );

    let half_plane = builtin_manifold("poincare-half-plane", &none)?;
    let p = ChartPoint(vec![0.0, 1.0]);
    let traj = ricci_flow_integrate(&half_plane, &p, 1.0, 1e-3, FlowMode::Pointwise)?;
    println!("hyperbolic half-plane under Ricci flow (expanding):");
    for s in traj.samples.iter().step_by(250) {
        println!(
            "  t = {:<6.3} c = {:<9.6} R = {:<10.6} w⁽ʳ⁾ = {:<10.6} residual {:.2e}",
            s.t, s.c, s.scalar, s.w_r, s.residual
        );
    }
    let report = corollary_check(&traj, 1.0)?;
    println!("  corollary pass = {}", report.pass);
    Ok(())
}
