//! Loading a user metric from a JSON manifest and computing its curvature.
//!
//! The chart below is the hyperbolic plane in polar-like coordinates,
//! g = diag(1, sinh²r): constant scalar curvature −2.
//!
//! Run with: cargo run --example custom_manifold

use geospin::manifold::manifest::ManifoldManifest;
use geospin::{curvature_at, ChartPoint};

fn main() -> geospin::Result<()> {
    let manifest: ManifoldManifest = serde_json::from_str(
        r#"{
            "name": "hyperbolic-polar",
            "dimension": 2,
            "coordinates": ["r", "phi"],
            "metric": [["1", "0"], ["0", "sinh(r)^2"]],
            "domain": ["r > 0"]
        }"#,
    )?;
    let field = manifest.to_field()?;

    println!("{} on coordinates {:?}", field.name(), field.coords());
    for r in [0.5, 1.0, 2.0] {
        let p = ChartPoint(vec![r, 0.3]);
        let bundle = curvature_at(&field, &p)?;
        println!(
            "  r = {r}: R = {:.12} (constant −2 expected), Ricci = {:?}",
            bundle.scalar,
            bundle.ricci.as_slice()
        );
    }

    // Out-of-domain points are rejected, not extrapolated.
    let err = curvature_at(&field, &ChartPoint(vec![-0.1, 0.0])).unwrap_err();
    println!("  at r = -0.1: {err}");

    // Round trip: emit the manifest for the field we just built.
    let emitted = ManifoldManifest::from_field(&field);
    println!("\nre-emitted manifest:\n{}", serde_json::to_string_pretty(&emitted)?);
    Ok(())
}
