//! The geometric Hamiltonian matrix Ĥ = −iħW and its complex spectrum.
//!
//! W is real but generally asymmetric, so its eigenvalues λ = λ⁽ˢ⁾ + iλ⁽ⁱᵐ⁾
//! come in conjugate pairs; the Hamiltonian eigenvalues follow from the map
//! λ⁽ʳᵉ⁾ = ħλ⁽ⁱᵐ⁾ − iħλ⁽ˢ⁾. Ĥ itself has purely imaginary entries and is not
//! Hermitian; nothing here assumes otherwise.

pub mod eig;

pub use eig::{eig_real_nonsymmetric, EigenConfig, RealEigen};

use crate::error::{Error, Result};
use crate::geospin::GeospinMatrix;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// Ĥ = −iħW with the diagonal energies E⁽ᵏ⁾ = ħ W^k_k.
#[derive(Debug, Clone)]
pub struct HamiltonianMatrix {
    /// Entrywise −iħ W; real parts are exactly zero.
    pub entries: DMatrix<Complex64>,
    pub hbar: f64,
    pub source: GeospinMatrix,
    /// E⁽ᵏ⁾ = ħ W^k_k, so the diagonal part of Ĥ is diag(−iE⁽¹⁾, …, −iE⁽ⁿ⁾).
    pub energies: DVector<f64>,
}

impl HamiltonianMatrix {
    /// diag(−iE⁽¹⁾, …, −iE⁽ⁿ⁾), the Hamiltonian of the diagonal geospin part.
    pub fn diagonal_part(&self) -> DMatrix<Complex64> {
        let n = self.energies.len();
        DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                Complex64::new(0.0, -self.energies[i])
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }
}

/// Builds Ĥ from a geospin matrix; `hbar` must be positive.
pub fn hamiltonian_matrix(w: &GeospinMatrix, hbar: f64) -> Result<HamiltonianMatrix> {
    if !(hbar > 0.0) {
        return Err(Error::NonPositiveHbar(hbar));
    }
    let n = w.dim();
    let entries = DMatrix::from_fn(n, n, |i, j| Complex64::new(0.0, -hbar * w.entry(i, j)));
    let energies = DVector::from_fn(n, |k, _| hbar * w.entry(k, k));
    Ok(HamiltonianMatrix {
        entries,
        hbar,
        source: w.clone(),
        energies,
    })
}

/// λ⁽ʳᵉ⁾ = ħλ⁽ⁱᵐ⁾ − iħλ⁽ˢ⁾ applied per eigenvalue, cross-checked against the
/// product form −iħ·λ computed independently.
pub fn spectrum_map(eigenvalues: &[Complex64], hbar: f64) -> Result<Vec<Complex64>> {
    if !(hbar > 0.0) {
        return Err(Error::NonPositiveHbar(hbar));
    }
    let minus_i_hbar = Complex64::new(0.0, -hbar);
    let mut out = Vec::with_capacity(eigenvalues.len());
    for &l in eigenvalues {
        let mapped = Complex64::new(hbar * l.im, -hbar * l.re);
        let product = minus_i_hbar * l;
        if (mapped - product).norm() > 1e-12 * (1.0 + hbar * l.norm()) {
            return Err(Error::Internal(format!(
                "spectrum map {mapped} disagrees with -i*hbar*lambda = {product}"
            )));
        }
        out.push(mapped);
    }
    Ok(out)
}

/// Spectrum of a geospin matrix: sorted eigenvalues of W, the mapped
/// Hamiltonian eigenvalues, and eigenpair residuals.
#[derive(Debug, Clone)]
pub struct ComplexSpectrum {
    pub hbar: f64,
    /// Eigenvalues of W sorted by (real, imaginary) ascending.
    pub eigenvalues: Vec<Complex64>,
    /// λ⁽ʳᵉ⁾ per eigenvalue, same order.
    pub hamiltonian_eigenvalues: Vec<Complex64>,
    pub eigenvectors: Vec<Option<DVector<Complex64>>>,
    /// ‖Wx − λx‖ per recovered eigenvector.
    pub residuals: Vec<Option<f64>>,
    /// False where the residual exceeds the configured tolerance (the vector
    /// is still reported, not fabricated).
    pub reliable: Vec<bool>,
}

impl ComplexSpectrum {
    pub fn of_geospin(w: &GeospinMatrix, hbar: f64, config: &EigenConfig) -> Result<Self> {
        Self::of_matrix(w.matrix(), hbar, config)
    }

    pub fn of_matrix(m: &DMatrix<f64>, hbar: f64, config: &EigenConfig) -> Result<Self> {
        if !(hbar > 0.0) {
            return Err(Error::NonPositiveHbar(hbar));
        }
        let eig = eig_real_nonsymmetric(m, config)?;
        let n = eig.values.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| {
            eig.values[i]
                .re
                .total_cmp(&eig.values[j].re)
                .then(eig.values[i].im.total_cmp(&eig.values[j].im))
        });

        let eigenvalues: Vec<Complex64> = order.iter().map(|&i| eig.values[i]).collect();
        let eigenvectors: Vec<_> = order.iter().map(|&i| eig.vectors[i].clone()).collect();
        let residuals: Vec<_> = order.iter().map(|&i| eig.residuals[i]).collect();
        let hamiltonian_eigenvalues = spectrum_map(&eigenvalues, hbar)?;

        let norm = m.iter().map(|x| x.abs()).fold(0.0f64, f64::max);
        let tol = config.residual_tol * (1.0 + norm);
        let reliable = residuals
            .iter()
            .map(|r| r.is_some_and(|r| r <= tol))
            .collect();

        Ok(ComplexSpectrum {
            hbar,
            eigenvalues,
            hamiltonian_eigenvalues,
            eigenvectors,
            residuals,
            reliable,
        })
    }

    /// |Σλ − tr W|: the eigenvalue sum must reproduce the geospin function.
    pub fn trace_defect(&self, trace_w: f64) -> f64 {
        let sum: Complex64 = self.eigenvalues.iter().sum();
        (sum - Complex64::new(trace_w, 0.0)).norm()
    }
}
