//! Levi-Civita connection coefficients.
//!
//! Γ^k_ij = ½ g^kl (∂_i g_jl + ∂_j g_il − ∂_l g_ij), with all metric partials
//! taken from the symbolic-derivative cache, plus the log-volume gradient
//! A_j = ∂_j ln √det g, which equals the Christoffel trace Σ_k Γ^k_kj.

use crate::error::{Error, Result};
use crate::manifold::{ChartPoint, IndexPosition, MetricField, TangentVector};
use crate::tensor::Tensor3;
use nalgebra::{DMatrix, DVector};

/// Connection data at one chart point.
///
/// Storage order is `gamma.get(k, i, j)` = Γ^k_ij (upper index first, then
/// the symmetric lower pair); symmetry Γ^k_ij = Γ^k_ji holds exactly because
/// each pair is computed once and mirrored.
#[derive(Debug, Clone)]
pub struct ChristoffelAtPoint {
    pub point: ChartPoint,
    pub gamma: Tensor3,
    /// A_j = ∂_j ln √det g.
    pub a: DVector<f64>,
}

impl ChristoffelAtPoint {
    pub fn dim(&self) -> usize {
        self.gamma.dim()
    }

    /// Σ_k Γ^k_kj, the independent route to A_j.
    pub fn gamma_trace(&self) -> DVector<f64> {
        let n = self.dim();
        DVector::from_fn(n, |j, _| (0..n).map(|k| self.gamma.get(k, k, j)).sum())
    }
}

/// Computes Γ^k_ij and A_j at `p`.
pub fn christoffel_at(field: &MetricField, p: &ChartPoint) -> Result<ChristoffelAtPoint> {
    let n = field.dim();
    let metric = field.metric_at(p)?;
    let dg = field.partials_at(p)?;

    let mut gamma = Tensor3::zeros(n);
    for k in 0..n {
        for i in 0..n {
            for j in i..n {
                let mut sum = 0.0;
                for l in 0..n {
                    sum += metric.g_inv[(k, l)]
                        * (dg.get(i, j, l) + dg.get(j, i, l) - dg.get(l, i, j));
                }
                let value = 0.5 * sum;
                gamma.set(k, i, j, value);
                gamma.set(k, j, i, value);
            }
        }
    }

    let a = log_volume_gradient(field, p)?;
    Ok(ChristoffelAtPoint {
        point: p.clone(),
        gamma,
        a,
    })
}

/// A_j = ∂_j ln √det g.
///
/// Uses the symbolic derivative of ½ ln det g when the chart is small enough
/// to carry a cofactor determinant expression; otherwise the exact trace form
/// ½ tr(g⁻¹ ∂_j g), still built from symbolic metric partials.
pub fn log_volume_gradient(field: &MetricField, p: &ChartPoint) -> Result<DVector<f64>> {
    field.check_domain(p)?;
    let n = field.dim();
    if field.log_sqrt_det_grad_expr(0).is_some() {
        let mut a = DVector::zeros(n);
        for j in 0..n {
            a[j] = field
                .log_sqrt_det_grad_expr(j)
                .expect("all gradient components present")
                .evaluate(p.as_slice())?;
        }
        return Ok(a);
    }
    let metric = field.metric_at(p)?;
    let dg = field.partials_at(p)?;
    let mut a = DVector::zeros(n);
    for j in 0..n {
        let mut tr = 0.0;
        for i in 0..n {
            for m in 0..n {
                tr += metric.g_inv[(i, m)] * dg.get(j, i, m);
            }
        }
        a[j] = 0.5 * tr;
    }
    Ok(a)
}

/// Coefficient matrix of the connection one-form along a curve with upper
/// velocity `v`, in the dt basis: entry (j, i) = Γ^j_ik v^k. This is exactly
/// the geospin matrix; both loops run in the same order so the outputs agree
/// bitwise.
pub fn connection_one_form_coeffs(
    christoffel: &ChristoffelAtPoint,
    v: &TangentVector,
) -> Result<DMatrix<f64>> {
    if v.position != IndexPosition::Upper {
        return Err(Error::IndexPosition { expected: "upper" });
    }
    let n = christoffel.dim();
    if v.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: v.dim(),
        });
    }
    let mut w = DMatrix::zeros(n, n);
    for upper in 0..n {
        for lower in 0..n {
            let mut sum = 0.0;
            for k in 0..n {
                sum += christoffel.gamma.get(upper, lower, k) * v.components[k];
            }
            w[(upper, lower)] = sum;
        }
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifold::zoo::builtin_manifold;
    use approx::assert_relative_eq;
    use std::collections::BTreeMap;

    fn half_plane() -> MetricField {
        builtin_manifold("poincare-half-plane", &BTreeMap::new()).unwrap()
    }

    #[test]
    fn euclidean_connection_vanishes() {
        let f = builtin_manifold("euclidean", &BTreeMap::new()).unwrap();
        let ch = christoffel_at(&f, &ChartPoint(vec![1.0, -2.0])).unwrap();
        for k in 0..2 {
            for i in 0..2 {
                for j in 0..2 {
                    assert_eq!(ch.gamma.get(k, i, j), 0.0);
                }
            }
        }
        assert_eq!(ch.a.as_slice(), &[0.0, 0.0]);
    }

    #[test]
    fn half_plane_christoffel_components() {
        let f = half_plane();
        let y = 1.7;
        let ch = christoffel_at(&f, &ChartPoint(vec![0.3, y])).unwrap();
        let tol = 1e-12;
        assert_relative_eq!(ch.gamma.get(0, 0, 1), -1.0 / y, max_relative = tol);
        assert_relative_eq!(ch.gamma.get(0, 1, 0), -1.0 / y, max_relative = tol);
        assert_relative_eq!(ch.gamma.get(1, 0, 0), 1.0 / y, max_relative = tol);
        assert_relative_eq!(ch.gamma.get(1, 1, 1), -1.0 / y, max_relative = tol);
        assert_eq!(ch.gamma.get(0, 0, 0), 0.0);
        assert_eq!(ch.gamma.get(1, 0, 1), 0.0);
    }

    #[test]
    fn sphere_christoffel_components() {
        let f = builtin_manifold("sphere", &BTreeMap::new()).unwrap();
        let theta = std::f64::consts::FRAC_PI_4;
        let ch = christoffel_at(&f, &ChartPoint(vec![theta, 1.2])).unwrap();
        assert_relative_eq!(ch.gamma.get(0, 1, 1), -0.5, max_relative = 1e-12);
        assert_relative_eq!(ch.gamma.get(1, 0, 1), 1.0, max_relative = 1e-12);
    }

    #[test]
    fn log_volume_gradient_examples() {
        let hp = half_plane();
        let a = log_volume_gradient(&hp, &ChartPoint(vec![0.0, 2.0])).unwrap();
        assert_relative_eq!(a[0], 0.0);
        assert_relative_eq!(a[1], -1.0, max_relative = 1e-12);

        let sphere = builtin_manifold("sphere", &BTreeMap::new()).unwrap();
        let a = log_volume_gradient(&sphere, &ChartPoint(vec![std::f64::consts::FRAC_PI_4, 0.0]))
            .unwrap();
        assert_relative_eq!(a[0], 1.0, max_relative = 1e-12); // cot(π/4)
        assert_relative_eq!(a[1], 0.0);
    }

    #[test]
    fn gamma_trace_matches_log_volume_gradient() {
        let f = half_plane();
        let p = ChartPoint(vec![0.7, 0.9]);
        let ch = christoffel_at(&f, &p).unwrap();
        let trace = ch.gamma_trace();
        for j in 0..2 {
            assert_relative_eq!(trace[j], ch.a[j], epsilon = 1e-12, max_relative = 1e-9);
        }
    }

    #[test]
    fn one_form_coeffs_match_known_matrix() {
        let f = half_plane();
        let ch = christoffel_at(&f, &ChartPoint(vec![0.0, 1.0])).unwrap();
        let v = TangentVector::upper(vec![1.0, 0.0]);
        let w = connection_one_form_coeffs(&ch, &v).unwrap();
        assert_eq!(w[(0, 0)], 0.0);
        assert_eq!(w[(0, 1)], -1.0);
        assert_eq!(w[(1, 0)], 1.0);
        assert_eq!(w[(1, 1)], 0.0);
    }

    #[test]
    fn out_of_domain_point_errors() {
        let f = half_plane();
        assert!(christoffel_at(&f, &ChartPoint(vec![0.0, -1.0])).is_err());
    }
}
