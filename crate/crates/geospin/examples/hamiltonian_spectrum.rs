//! The geometric Hamiltonian matrix Ĥ = −iħW and its eigenvalue map.
//!
//! W is real and generally asymmetric, so its spectrum λ = λ⁽ˢ⁾ + iλ⁽ⁱᵐ⁾ is
//! complex; the Hamiltonian eigenvalues follow λ⁽ʳᵉ⁾ = ħλ⁽ⁱᵐ⁾ − iħλ⁽ˢ⁾. On
//! the half-plane with horizontal velocity, W generates a rotation, eig W =
//! ±i, and the Hamiltonian spectrum is the purely real pair ±ħ.
//!
//! Run with: cargo run --example hamiltonian_spectrum

use geospin::manifold::zoo::builtin_manifold;
use geospin::{
    christoffel_at, geospin_matrix, hamiltonian_matrix, ChartPoint, ComplexSpectrum,
    EigenConfig, TangentVector,
};
use std::collections::BTreeMap;

fn main() -> geospin::Result<()> {
    let field = builtin_manifold("poincare-half-plane", &BTreeMap::new())?;
    let p = ChartPoint(vec![0.0, 1.0]);
    let ch = christoffel_at(&field, &p)?;
    let hbar = 1.0;

    for v in [vec![1.0, 0.0], vec![0.0, 1.0], vec![0.5, 0.5]] {
        let w = geospin_matrix(&ch, &TangentVector::upper(v.clone()))?;
        let hamiltonian = hamiltonian_matrix(&w, hbar)?;
        let spectrum = ComplexSpectrum::of_geospin(&w, hbar, &EigenConfig::default())?;

        println!("v = {v:?}, ħ = {hbar}");
        println!("  W rows = {:?}", rows(w.matrix()));
        println!(
            "  Ĥ rows = {:?}",
            (0..2)
                .map(|i| (0..2)
                    .map(|j| {
                        let c = hamiltonian.entries[(i, j)];
                        format!("{}{:+}i", c.re + 0.0, c.im + 0.0)
                    })
                    .collect::<Vec<_>>())
                .collect::<Vec<_>>()
        );
        println!("  diagonal energies E⁽ᵏ⁾ = ħW^k_k = {:?}", hamiltonian.energies.as_slice());
        println!("  eig W      = {:?}", spectrum.eigenvalues);
        println!("  λ⁽ʳᵉ⁾(Ĥ)   = {:?}", spectrum.hamiltonian_eigenvalues);
        println!(
            "  Σλ − tr W  = {:.3e}   eigenpair residuals = {:?}\n",
            spectrum.trace_defect(w.trace_w()),
            spectrum.residuals
        );
    }

    // 1×1 case: W = [w⁽ʳ⁾] has the single Hamiltonian eigenvalue −iħw⁽ʳ⁾.
    let w_r = 0.37;
    let spec = ComplexSpectrum::of_matrix(
        &nalgebra::DMatrix::from_row_slice(1, 1, &[w_r]),
        hbar,
        &EigenConfig::default(),
    )?;
    println!("1x1 geospin [w⁽ʳ⁾ = {w_r}]: λ⁽ʳᵉ⁾ = {:?}", spec.hamiltonian_eigenvalues[0]);
    Ok(())
}

fn rows(m: &nalgebra::DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}
