//! Geospin variables and the geospin matrix.
//!
//! Contracting the Christoffel symbols with a curve velocity gives the two
//! geospin variables W^i_j = Γ^i_jk v^k (upper/lower, matrix form) and
//! W_ik = Γ^j_ik v_j (both indices lower, symmetric). The matrix W drives the
//! first-order geodesic system dv/dt = −W v, and its trace w⁽ʳ⁾ = Σ_i W^i_i
//! equals A·v, the directional derivative of ln √det g.

use crate::connection::ChristoffelAtPoint;
use crate::error::{Error, Result};
use crate::manifold::{ChartPoint, IndexPosition, TangentVector};
use nalgebra::{DMatrix, DVector};

/// Relative tolerance for the internal trace cross-check against A·v.
const TRACE_CHECK_TOL: f64 = 1e-9;

/// The geospin matrix W at a point, for a given upper velocity.
///
/// Matrix layout: `w[(i, j)]` = W^i_j = Γ^i_jk v^k, i.e. rows carry the upper
/// index and columns the lower one, matching the displayed matrix
/// (row i = (W^i_1 … W^i_n)) so that (W v)^i = Σ_j w[(i,j)] v^j.
#[derive(Debug, Clone)]
pub struct GeospinMatrix {
    w: DMatrix<f64>,
    point: ChartPoint,
    velocity: TangentVector,
    trace: f64,
}

impl GeospinMatrix {
    pub fn dim(&self) -> usize {
        self.w.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.w
    }

    /// Entry W^upper_lower.
    pub fn entry(&self, upper: usize, lower: usize) -> f64 {
        self.w[(upper, lower)]
    }

    pub fn point(&self) -> &ChartPoint {
        &self.point
    }

    pub fn velocity(&self) -> &TangentVector {
        &self.velocity
    }

    /// The geospin function w⁽ʳ⁾ = Σ_i W^i_i.
    pub fn trace_w(&self) -> f64 {
        self.trace
    }

    /// (W v)^i = Σ_j W^i_j v^j.
    pub fn apply(&self, v: &DVector<f64>) -> DVector<f64> {
        &self.w * v
    }

    /// Diagonal part W⁽ʳ⁾ and hollow part W⁽ᵃ⁾ with W = W⁽ʳ⁾ + W⁽ᵃ⁾ exactly.
    pub fn split_diag_offdiag(&self) -> (DMatrix<f64>, DMatrix<f64>) {
        let n = self.dim();
        let mut diag = DMatrix::zeros(n, n);
        let mut hollow = self.w.clone();
        for i in 0..n {
            diag[(i, i)] = self.w[(i, i)];
            hollow[(i, i)] = 0.0;
        }
        (diag, hollow)
    }
}

/// Builds W from connection data and an upper velocity; the trace field is
/// cross-checked against the independent A·v route.
pub fn geospin_matrix(
    christoffel: &ChristoffelAtPoint,
    v: &TangentVector,
) -> Result<GeospinMatrix> {
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
    let trace = (0..n).map(|i| w[(i, i)]).sum::<f64>();
    let a_dot_v = christoffel.a.dot(&v.components);
    if (trace - a_dot_v).abs() > TRACE_CHECK_TOL * (1.0 + a_dot_v.abs()) {
        return Err(Error::Internal(format!(
            "geospin trace {trace} disagrees with A·v = {a_dot_v}"
        )));
    }
    Ok(GeospinMatrix {
        w,
        point: christoffel.point.clone(),
        velocity: v.clone(),
        trace,
    })
}

/// The lower-index geospin variable W_ik = Γ^j_ik v_j; symmetric in (i, k).
#[derive(Debug, Clone)]
pub struct LoweredGeospin {
    pub w_low: DMatrix<f64>,
}

pub fn geospin_lowered(
    christoffel: &ChristoffelAtPoint,
    v_low: &TangentVector,
) -> Result<LoweredGeospin> {
    if v_low.position != IndexPosition::Lower {
        return Err(Error::IndexPosition { expected: "lower" });
    }
    let n = christoffel.dim();
    if v_low.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: v_low.dim(),
        });
    }
    let mut w = DMatrix::zeros(n, n);
    for i in 0..n {
        for k in i..n {
            let mut sum = 0.0;
            for j in 0..n {
                sum += christoffel.gamma.get(j, i, k) * v_low.components[j];
            }
            w[(i, k)] = sum;
            w[(k, i)] = sum;
        }
    }
    Ok(LoweredGeospin { w_low: w })
}

/// ∇_k v^j = ∂v^j/∂x^k + W^j_k for a field whose pointwise value built `w`.
/// Input and output are indexed `[(k, j)]` with k the derivative direction.
pub fn covariant_derivative(jacobian: &DMatrix<f64>, w: &GeospinMatrix) -> Result<DMatrix<f64>> {
    let n = w.dim();
    if jacobian.nrows() != n || jacobian.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: jacobian.nrows().max(jacobian.ncols()),
        });
    }
    Ok(DMatrix::from_fn(n, n, |k, j| {
        jacobian[(k, j)] + w.entry(j, k)
    }))
}

/// Lowered variant: ∇_k v_j = ∂v_j/∂x^k − W_kj.
pub fn covariant_derivative_lowered(
    jacobian_low: &DMatrix<f64>,
    w_low: &LoweredGeospin,
) -> Result<DMatrix<f64>> {
    let n = w_low.w_low.nrows();
    if jacobian_low.nrows() != n || jacobian_low.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: jacobian_low.nrows().max(jacobian_low.ncols()),
        });
    }
    Ok(jacobian_low - &w_low.w_low)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::connection::christoffel_at;
    use crate::manifold::zoo::builtin_manifold;
    use crate::manifold::{lower_index, ChartPoint, MetricField};
    use approx::assert_relative_eq;
    use std::collections::BTreeMap;

    fn half_plane() -> MetricField {
        builtin_manifold("poincare-half-plane", &BTreeMap::new()).unwrap()
    }

    fn half_plane_connection(x: f64, y: f64) -> ChristoffelAtPoint {
        christoffel_at(&half_plane(), &ChartPoint(vec![x, y])).unwrap()
    }

    #[test]
    fn euclidean_geospin_is_zero() {
        let f = builtin_manifold("euclidean", &BTreeMap::new()).unwrap();
        let ch = christoffel_at(&f, &ChartPoint(vec![0.4, 0.6])).unwrap();
        let w = geospin_matrix(&ch, &TangentVector::upper(vec![2.0, -1.0])).unwrap();
        assert_eq!(w.matrix(), &DMatrix::zeros(2, 2));
        assert_eq!(w.trace_w(), 0.0);
    }

    #[test]
    fn half_plane_horizontal_velocity() {
        let ch = half_plane_connection(0.0, 1.0);
        let w = geospin_matrix(&ch, &TangentVector::upper(vec![1.0, 0.0])).unwrap();
        assert_eq!(w.entry(0, 0), 0.0);
        assert_eq!(w.entry(0, 1), -1.0);
        assert_eq!(w.entry(1, 0), 1.0);
        assert_eq!(w.entry(1, 1), 0.0);
        assert_eq!(w.trace_w(), 0.0);
    }

    #[test]
    fn half_plane_vertical_velocity() {
        let ch = half_plane_connection(0.0, 1.0);
        let w = geospin_matrix(&ch, &TangentVector::upper(vec![0.0, 1.0])).unwrap();
        assert_eq!(w.entry(0, 0), -1.0);
        assert_eq!(w.entry(0, 1), 0.0);
        assert_eq!(w.entry(1, 0), 0.0);
        assert_eq!(w.entry(1, 1), -1.0);
        assert_relative_eq!(w.trace_w(), -2.0, max_relative = 1e-12);
    }

    #[test]
    fn lowered_geospin_is_symmetric_and_matches_contraction() {
        let field = half_plane();
        let p = ChartPoint(vec![0.0, 1.0]);
        let ch = christoffel_at(&field, &p).unwrap();
        let v = TangentVector::upper(vec![1.0, 0.0]);
        let v_low = lower_index(&field, &p, &v).unwrap();
        assert_eq!(v_low.components.as_slice(), &[1.0, 0.0]);
        let low = geospin_lowered(&ch, &v_low).unwrap();
        assert_eq!(low.w_low[(0, 0)], 0.0);
        assert_eq!(low.w_low[(0, 1)], -1.0);
        assert_eq!(low.w_low[(1, 0)], -1.0);
        assert_eq!(low.w_low[(1, 1)], 0.0);
    }

    #[test]
    fn split_reassembles_exactly() {
        let ch = half_plane_connection(0.2, 0.8);
        let w = geospin_matrix(&ch, &TangentVector::upper(vec![0.3, -0.7])).unwrap();
        let (diag, hollow) = w.split_diag_offdiag();
        assert_eq!(&diag + &hollow, *w.matrix());
        for i in 0..2 {
            assert_eq!(hollow[(i, i)], 0.0);
            for j in 0..2 {
                if i != j {
                    assert_eq!(diag[(i, j)], 0.0);
                }
            }
        }
    }

    #[test]
    fn covariant_derivative_of_radial_field_is_identity() {
        // v^j = x^j on Euclidean space: jacobian = I, W = 0.
        let f = builtin_manifold("euclidean", &BTreeMap::new()).unwrap();
        let p = ChartPoint(vec![1.3, -0.2]);
        let ch = christoffel_at(&f, &p).unwrap();
        let w = geospin_matrix(&ch, &TangentVector::upper(vec![1.3, -0.2])).unwrap();
        let nabla = covariant_derivative(&DMatrix::identity(2, 2), &w).unwrap();
        assert_eq!(nabla, DMatrix::identity(2, 2));
    }

    #[test]
    fn covariant_derivative_zero_jacobian_reduces_to_geospin_entries() {
        let ch = half_plane_connection(0.0, 1.0);
        let w = geospin_matrix(&ch, &TangentVector::upper(vec![1.0, 0.0])).unwrap();
        let nabla = covariant_derivative(&DMatrix::zeros(2, 2), &w).unwrap();
        for k in 0..2 {
            for j in 0..2 {
                assert_eq!(nabla[(k, j)], w.entry(j, k));
            }
        }
    }

    #[test]
    fn geospin_rejects_lower_velocity() {
        let ch = half_plane_connection(0.0, 1.0);
        assert!(geospin_matrix(&ch, &TangentVector::lower(vec![1.0, 0.0])).is_err());
    }

    #[test]
    fn one_form_coefficients_equal_geospin_bitwise() {
        let ch = half_plane_connection(-0.4, 2.3);
        let v = TangentVector::upper(vec![0.9, -1.1]);
        let w = geospin_matrix(&ch, &v).unwrap();
        let omega = crate::connection::connection_one_form_coeffs(&ch, &v).unwrap();
        assert_eq!(&omega, w.matrix());
    }
}
