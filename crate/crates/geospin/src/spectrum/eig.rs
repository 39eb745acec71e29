//! Real nonsymmetric eigensolver.
//!
//! Pipeline: diagonal balancing (similarity scaling by radix powers),
//! Householder reduction to upper Hessenberg form, then Francis double-shift
//! QR iteration with deflation. Real eigenvalues come from 1x1 blocks and
//! conjugate pairs come from 2x2 blocks, so pairs are exact by construction.
//! Eigenvectors are recovered afterwards by complex inverse iteration against
//! the original matrix, with per-pair residuals reported rather than hidden.

use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// Iteration and reliability knobs; defaults match the documented contract.
#[derive(Debug, Clone)]
pub struct EigenConfig {
    /// Total QR sweep cap is `max_sweeps_per_dim * n`.
    pub max_sweeps_per_dim: usize,
    /// Eigenvector residual threshold, relative to the matrix norm.
    pub residual_tol: f64,
}

impl Default for EigenConfig {
    fn default() -> Self {
        EigenConfig {
            max_sweeps_per_dim: 30,
            residual_tol: 1e-8,
        }
    }
}

/// Eigenvalues in deflation order with optional eigenpairs.
#[derive(Debug, Clone)]
pub struct RealEigen {
    pub values: Vec<Complex64>,
    /// Unit eigenvectors where inverse iteration produced one.
    pub vectors: Vec<Option<DVector<Complex64>>>,
    /// ‖A x − λ x‖₂ for each recovered vector.
    pub residuals: Vec<Option<f64>>,
}

/// Computes the complex spectrum of a real square matrix.
pub fn eig_real_nonsymmetric(a: &DMatrix<f64>, config: &EigenConfig) -> Result<RealEigen> {
    let n = a.nrows();
    if n == 0 || a.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n.max(1),
            got: a.ncols(),
        });
    }
    if a.iter().any(|x| !x.is_finite()) {
        return Err(Error::Internal("eigenvalue input has non-finite entries".into()));
    }

    let values = if n == 1 {
        vec![Complex64::new(a[(0, 0)], 0.0)]
    } else {
        let mut work = a.clone();
        balance(&mut work);
        hessenberg(&mut work);
        francis_qr(&mut work, config.max_sweeps_per_dim * n)?
    };

    let norm = a.iter().map(|x| x.abs()).fold(0.0f64, f64::max);
    let mut vectors = Vec::with_capacity(n);
    let mut residuals = Vec::with_capacity(n);
    for &lambda in &values {
        match inverse_iteration(a, lambda, norm) {
            Some((vec, res)) => {
                vectors.push(Some(vec));
                residuals.push(Some(res));
            }
            None => {
                vectors.push(None);
                residuals.push(None);
            }
        }
    }
    Ok(RealEigen {
        values,
        vectors,
        residuals,
    })
}

/// Similarity scaling so row and column norms roughly agree; powers of two
/// only, hence no rounding at all.
fn balance(a: &mut DMatrix<f64>) {
    const RADIX: f64 = 2.0;
    let n = a.nrows();
    let b2 = RADIX * RADIX;
    loop {
        let mut converged = true;
        for i in 0..n {
            let mut c: f64 = (0..n).filter(|&j| j != i).map(|j| a[(j, i)].abs()).sum();
            let r: f64 = (0..n).filter(|&j| j != i).map(|j| a[(i, j)].abs()).sum();
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let mut g = r / RADIX;
            while c < g {
                f *= RADIX;
                c *= b2;
            }
            g = r * RADIX;
            while c >= g {
                f /= RADIX;
                c /= b2;
            }
            if (c + r) / f < 0.95 * s {
                converged = false;
                let g = 1.0 / f;
                for j in 0..n {
                    a[(i, j)] *= g;
                }
                for j in 0..n {
                    a[(j, i)] *= f;
                }
            }
        }
        if converged {
            return;
        }
    }
}

/// In-place Householder reduction to upper Hessenberg form.
fn hessenberg(a: &mut DMatrix<f64>) {
    let n = a.nrows();
    for k in 0..n.saturating_sub(2) {
        let col: Vec<f64> = ((k + 1)..n).map(|i| a[(i, k)]).collect();
        let norm = col.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let alpha = if col[0] >= 0.0 { -norm } else { norm };
        let mut v = col;
        v[0] -= alpha;
        let vtv: f64 = v.iter().map(|x| x * x).sum();
        if vtv == 0.0 {
            continue;
        }
        let tau = 2.0 / vtv;
        // Left: rows k+1..n over all columns.
        for j in 0..n {
            let dot: f64 = v
                .iter()
                .enumerate()
                .map(|(idx, &vi)| vi * a[(k + 1 + idx, j)])
                .sum();
            let dot = tau * dot;
            for (idx, &vi) in v.iter().enumerate() {
                a[(k + 1 + idx, j)] -= dot * vi;
            }
        }
        // Right: columns k+1..n over all rows.
        for i in 0..n {
            let dot: f64 = v
                .iter()
                .enumerate()
                .map(|(idx, &vi)| vi * a[(i, k + 1 + idx)])
                .sum();
            let dot = tau * dot;
            for (idx, &vi) in v.iter().enumerate() {
                a[(i, k + 1 + idx)] -= dot * vi;
            }
        }
        a[(k + 1, k)] = alpha;
        for i in (k + 2)..n {
            a[(i, k)] = 0.0;
        }
    }
}

/// Eigenvalues of a real 2x2 block; conjugate pairs share their parts exactly.
fn eig2x2(a: f64, b: f64, c: f64, d: f64) -> (Complex64, Complex64) {
    let half_tr = 0.5 * (a + d);
    let det = a * d - b * c;
    let p = 0.5 * (a - d);
    let disc = p * p + b * c;
    if disc >= 0.0 {
        let sq = disc.sqrt();
        let l1 = if half_tr >= 0.0 {
            half_tr + sq
        } else {
            half_tr - sq
        };
        let l2 = if l1 != 0.0 { det / l1 } else { 0.0 };
        (Complex64::new(l1, 0.0), Complex64::new(l2, 0.0))
    } else {
        let im = (-disc).sqrt();
        (Complex64::new(half_tr, im), Complex64::new(half_tr, -im))
    }
}

/// Francis implicit double-shift QR on an upper Hessenberg matrix.
/// Eigenvalues only; transformations are confined to the active block.
fn francis_qr(h: &mut DMatrix<f64>, sweep_cap: usize) -> Result<Vec<Complex64>> {
    let n = h.nrows();
    let mut values = vec![Complex64::new(0.0, 0.0); n];
    let overall_norm: f64 = h.iter().map(|x| x.abs()).sum::<f64>().max(f64::MIN_POSITIVE);

    let mut en = n - 1;
    let mut its = 0usize;
    let mut total_sweeps = 0usize;

    loop {
        // Find the top of the irreducible block ending at `en`.
        let mut l = 0;
        for m in (1..=en).rev() {
            let mut s = h[(m - 1, m - 1)].abs() + h[(m, m)].abs();
            if s == 0.0 {
                s = overall_norm;
            }
            if h[(m, m - 1)].abs() <= f64::EPSILON * s {
                h[(m, m - 1)] = 0.0;
                l = m;
                break;
            }
        }

        if l == en {
            values[en] = Complex64::new(h[(en, en)], 0.0);
            its = 0;
            if en == 0 {
                break;
            }
            en -= 1;
            continue;
        }
        if l + 1 == en {
            let (l1, l2) = eig2x2(h[(l, l)], h[(l, en)], h[(en, l)], h[(en, en)]);
            values[l] = l1;
            values[en] = l2;
            its = 0;
            if l == 0 {
                break;
            }
            en = l - 1;
            continue;
        }

        if total_sweeps >= sweep_cap {
            return Err(Error::NonConvergence {
                converged: n - 1 - en,
                n,
                sweeps: total_sweeps,
            });
        }
        total_sweeps += 1;
        its += 1;

        // Shift polynomial coefficients: s = σ₁+σ₂, t = σ₁σ₂ from the
        // trailing 2x2, replaced by an ad-hoc shift when stalling.
        let (s, t) = if its.is_multiple_of(10) {
            let sh = h[(en, en - 1)].abs() + h[(en - 1, en - 2)].abs();
            let sigma = 0.75 * sh + h[(en, en)];
            (2.0 * sigma, sigma * sigma)
        } else {
            let q = en - 1;
            (
                h[(q, q)] + h[(en, en)],
                h[(q, q)] * h[(en, en)] - h[(q, en)] * h[(en, q)],
            )
        };

        // First column of (H − σ₁)(H − σ₂) within the block.
        let mut x = h[(l, l)] * h[(l, l)] + h[(l, l + 1)] * h[(l + 1, l)] - s * h[(l, l)] + t;
        let mut y = h[(l + 1, l)] * (h[(l, l)] + h[(l + 1, l + 1)] - s);
        let mut z = h[(l + 1, l)] * h[(l + 2, l + 1)];

        for k in l..en {
            let last = k == en - 1;
            if k > l {
                x = h[(k, k - 1)];
                y = h[(k + 1, k - 1)];
                z = if !last { h[(k + 2, k - 1)] } else { 0.0 };
            }
            let scale = x.abs() + y.abs() + z.abs();
            if scale == 0.0 {
                continue;
            }
            let (xs, ys, zs) = (x / scale, y / scale, z / scale);
            let mut r = (xs * xs + ys * ys + zs * zs).sqrt();
            if xs < 0.0 {
                r = -r;
            }
            let v0 = xs + r;
            let vnorm2 = v0 * v0 + ys * ys + zs * zs;
            if vnorm2 == 0.0 {
                continue;
            }
            let tau = 2.0 / vnorm2;

            let c0 = if k > l { k - 1 } else { l };
            for j in c0..=en {
                let mut dot = v0 * h[(k, j)] + ys * h[(k + 1, j)];
                if !last {
                    dot += zs * h[(k + 2, j)];
                }
                let dot = tau * dot;
                h[(k, j)] -= dot * v0;
                h[(k + 1, j)] -= dot * ys;
                if !last {
                    h[(k + 2, j)] -= dot * zs;
                }
            }
            let r1 = en.min(k + 3);
            for i in l..=r1 {
                let mut dot = v0 * h[(i, k)] + ys * h[(i, k + 1)];
                if !last {
                    dot += zs * h[(i, k + 2)];
                }
                let dot = tau * dot;
                h[(i, k)] -= dot * v0;
                h[(i, k + 1)] -= dot * ys;
                if !last {
                    h[(i, k + 2)] -= dot * zs;
                }
            }
            if k > l {
                h[(k + 1, k - 1)] = 0.0;
                if !last {
                    h[(k + 2, k - 1)] = 0.0;
                }
            }
        }
    }

    Ok(values)
}

/// One eigenvector for `lambda` by shifted complex inverse iteration on the
/// original matrix; returns the unit vector with its residual ‖Ax − λx‖.
fn inverse_iteration(
    a: &DMatrix<f64>,
    lambda: Complex64,
    norm: f64,
) -> Option<(DVector<Complex64>, f64)> {
    let n = a.nrows();
    let ac: DMatrix<Complex64> = a.map(|x| Complex64::new(x, 0.0));

    let solve_with = |delta: f64| -> Option<nalgebra::LU<Complex64, nalgebra::Dyn, nalgebra::Dyn>> {
        let mut b = ac.clone();
        let shift = lambda + Complex64::new(delta, delta);
        for i in 0..n {
            b[(i, i)] -= shift;
        }
        let lu = b.lu();
        // A fully singular U makes solves return garbage; probe once.
        let probe = DVector::from_element(n, Complex64::new(1.0, 0.0));
        lu.solve(&probe).map(|_| lu)
    };

    let base = f64::EPSILON * (1.0 + norm) * 16.0;
    let lu = solve_with(base).or_else(|| solve_with(base * 1e4))?;

    // Deterministic pseudo-random start (golden-ratio lattice).
    let mut x = DVector::from_fn(n, |i, _| {
        let u = ((i + 1) as f64 * 0.618_033_988_749_894_9).fract() - 0.5;
        let v = ((i + 1) as f64 * 0.381_966_011_250_105).fract() - 0.5;
        Complex64::new(1.0 + u, v)
    });
    x /= Complex64::new(x.norm(), 0.0);

    let mut best: Option<(DVector<Complex64>, f64)> = None;
    for _ in 0..4 {
        let y = lu.solve(&x)?;
        let norm_y = y.norm();
        if !(norm_y.is_finite() && norm_y > 0.0) {
            break;
        }
        x = y / Complex64::new(norm_y, 0.0);
        let residual = (&ac * &x - &x * lambda).norm();
        let better = best.as_ref().is_none_or(|(_, r)| residual < *r);
        if better {
            best = Some((x.clone(), residual));
        }
        if residual <= f64::EPSILON * 16.0 * (1.0 + norm) {
            break;
        }
    }
    best
}
