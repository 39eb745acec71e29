//! Geospin matrices: the velocity contraction W^i_j = Γ^i_jk v^k, its
//! diagonal/off-diagonal split, the symmetric lowered variant, and the
//! covariant-derivative rewrite ∇_k v^j = ∂v^j/∂x^k + W^j_k.
//!
//! Run with: cargo run --example geospin_matrix

use geospin::manifold::zoo::builtin_manifold;
use geospin::{
    christoffel_at, covariant_derivative, geospin_lowered, geospin_matrix, lower_index,
    ChartPoint, TangentVector,
};
use nalgebra::DMatrix;
use std::collections::BTreeMap;

fn main() -> geospin::Result<()> {
    let field = builtin_manifold("poincare-half-plane", &BTreeMap::new())?;
    let p = ChartPoint(vec![0.0, 1.0]);
    let ch = christoffel_at(&field, &p)?;

    for v in [vec![1.0, 0.0], vec![0.0, 1.0], vec![0.6, -0.8]] {
        let vel = TangentVector::upper(v.clone());
        let w = geospin_matrix(&ch, &vel)?;
        let (diag, hollow) = w.split_diag_offdiag();
        println!("v = {v:?}");
        println!("  W          = {:?}", rows(w.matrix()));
        println!("  W_diag     = {:?}", rows(&diag));
        println!("  W_offdiag  = {:?}", rows(&hollow));
        println!("  w⁽ʳ⁾ = tr W = {}   (A·v cross-check built in)", w.trace_w());

        let v_low = lower_index(&field, &p, &vel)?;
        let low = geospin_lowered(&ch, &v_low)?;
        println!(
            "  lowered W_ik = {:?} (symmetric: {:.1e})",
            rows(&low.w_low),
            (&low.w_low - low.w_low.transpose()).amax()
        );

        // For a field with zero Jacobian the covariant derivative is W itself.
        let nabla = covariant_derivative(&DMatrix::zeros(2, 2), &w)?;
        println!("  ∇v (zero Jacobian) = {:?}\n", rows(&nabla));
    }
    Ok(())
}

fn rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}
