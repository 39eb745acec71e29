//! Riemannian metrics on a single coordinate chart.
//!
//! A [`MetricField`] holds the symmetric grid of metric-component expressions
//! g_ij together with their exact symbolic partial derivatives (first order
//! eagerly, second order on demand) and optional open-set domain constraints
//! such as `y > 0` on the half-plane. Everything downstream — connection
//! coefficients, geodesic flow, curvature — evaluates these cached ASTs, so
//! no finite differencing enters any production path.

pub mod manifest;
pub mod zoo;

use crate::error::{Error, Result};
use crate::expr::{parse_expr, Expr};
use nalgebra::{DMatrix, DVector};
use std::sync::OnceLock;

use crate::tensor::{Tensor3, Tensor4};

/// A point of the chart, one real per coordinate.
#[derive(Debug, Clone, PartialEq)]
pub struct ChartPoint(pub Vec<f64>);

impl ChartPoint {
    pub fn new(coords: Vec<f64>) -> Self {
        ChartPoint(coords)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

impl From<Vec<f64>> for ChartPoint {
    fn from(v: Vec<f64>) -> Self {
        ChartPoint(v)
    }
}

impl From<&[f64]> for ChartPoint {
    fn from(v: &[f64]) -> Self {
        ChartPoint(v.to_vec())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IndexPosition {
    Upper,
    Lower,
}

/// Tangent (upper) or cotangent (lower) vector at a chart point.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentVector {
    pub components: DVector<f64>,
    pub position: IndexPosition,
}

impl TangentVector {
    pub fn upper(components: Vec<f64>) -> Self {
        TangentVector {
            components: DVector::from_vec(components),
            position: IndexPosition::Upper,
        }
    }

    pub fn lower(components: Vec<f64>) -> Self {
        TangentVector {
            components: DVector::from_vec(components),
            position: IndexPosition::Lower,
        }
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    fn expect_position(&self, position: IndexPosition) -> Result<()> {
        if self.position == position {
            Ok(())
        } else {
            Err(Error::IndexPosition {
                expected: match position {
                    IndexPosition::Upper => "upper",
                    IndexPosition::Lower => "lower",
                },
            })
        }
    }
}

/// Strict open-set predicate `expr > 0`.
#[derive(Debug, Clone)]
pub struct DomainConstraint {
    expr: Expr,
    text: String,
}

impl DomainConstraint {
    /// Parses one constraint string. Accepts `a < b`, `a > b` and chains like
    /// `0 < theta < pi`, producing one predicate per comparison.
    pub fn parse(text: &str, coords: &[String]) -> Result<Vec<DomainConstraint>> {
        let mut parts: Vec<(&str, char)> = Vec::new();
        let mut rest = text;
        while let Some(pos) = rest.find(['<', '>']) {
            let op = rest.as_bytes()[pos] as char;
            parts.push((&rest[..pos], op));
            rest = &rest[pos + 1..];
        }
        if parts.is_empty() {
            return Err(Error::Manifest(format!(
                "domain constraint `{text}` must contain `<` or `>`"
            )));
        }
        let mut sides: Vec<&str> = parts.iter().map(|(s, _)| *s).collect();
        sides.push(rest);

        let mut out = Vec::new();
        for (k, (_, op)) in parts.iter().enumerate() {
            let (lo, hi) = match op {
                '<' => (sides[k], sides[k + 1]),
                _ => (sides[k + 1], sides[k]),
            };
            let lo_expr = parse_expr(lo, coords)
                .map_err(|e| Error::Manifest(format!("constraint `{text}`: {e}")))?;
            let hi_expr = parse_expr(hi, coords)
                .map_err(|e| Error::Manifest(format!("constraint `{text}`: {e}")))?;
            out.push(DomainConstraint {
                expr: Expr::sub(hi_expr, lo_expr),
                text: format!("{} < {}", lo.trim(), hi.trim()),
            });
        }
        Ok(out)
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    /// True when the predicate holds strictly at `point`.
    pub fn holds(&self, point: &[f64]) -> bool {
        matches!(self.expr.evaluate(point), Ok(v) if v > 0.0)
    }
}

/// Metric evaluated at one chart point.
#[derive(Debug, Clone)]
pub struct MetricAtPoint {
    pub g: DMatrix<f64>,
    pub g_inv: DMatrix<f64>,
    pub det: f64,
    pub log_sqrt_det: f64,
}

/// A Riemannian metric on a named coordinate chart.
#[derive(Debug, Clone)]
pub struct MetricField {
    name: String,
    coords: Vec<String>,
    /// n*n row-major; entries (i,j) and (j,i) are clones of the same AST.
    components: Vec<Expr>,
    /// First partials, `dg[(k*n+i)*n+j]` = ∂_k g_ij, simplified.
    dg: Vec<Expr>,
    /// Second partials, filled on first curvature request.
    d2g: OnceLock<Vec<Expr>>,
    /// Symbolic A_j = ∂_j ln √det g via a cofactor determinant (n ≤ 4 only;
    /// larger charts fall back to the exact trace form ½ tr(g⁻¹ ∂_j g)).
    log_sqrt_det_grad: Option<Vec<Expr>>,
    constraints: Vec<DomainConstraint>,
}

impl MetricField {
    pub fn new(
        name: impl Into<String>,
        coords: Vec<String>,
        grid: Vec<Vec<Expr>>,
        constraints: Vec<DomainConstraint>,
    ) -> Result<Self> {
        let n = coords.len();
        if n == 0 {
            return Err(Error::Manifest("chart needs at least one coordinate".into()));
        }
        if grid.len() != n || grid.iter().any(|row| row.len() != n) {
            return Err(Error::Manifest(format!(
                "metric grid must be {n}x{n} to match the {n} coordinates"
            )));
        }
        for (i, row) in grid.iter().enumerate() {
            for (j, entry) in row.iter().enumerate() {
                if let Some(max) = entry.max_coord_index() {
                    if max >= n {
                        return Err(Error::Manifest(format!(
                            "metric[{i}][{j}] references coordinate index {max}, chart has {n}"
                        )));
                    }
                }
            }
        }
        // Symmetry is structural: entry (i,j) must be the same AST as (j,i).
        for (i, row) in grid.iter().enumerate() {
            for (j, entry) in row.iter().enumerate().skip(i + 1) {
                if *entry != grid[j][i] {
                    return Err(Error::AsymmetricMetric { i, j });
                }
            }
        }

        let mut components = vec![Expr::zero(); n * n];
        for i in 0..n {
            for j in i..n {
                let e = grid[i][j].simplify();
                components[i * n + j] = e.clone();
                components[j * n + i] = e;
            }
        }

        let mut dg = vec![Expr::zero(); n * n * n];
        for k in 0..n {
            for i in 0..n {
                for j in i..n {
                    let e = components[i * n + j].differentiate(k).simplify();
                    dg[(k * n + i) * n + j] = e.clone();
                    dg[(k * n + j) * n + i] = e;
                }
            }
        }

        let log_sqrt_det_grad = (n <= 4).then(|| {
            let det = det_expr(&components, n).simplify();
            let half_log_det = Expr::mul(Expr::constant(0.5), Expr::ln(det));
            (0..n)
                .map(|j| half_log_det.differentiate(j).simplify())
                .collect()
        });

        Ok(MetricField {
            name: name.into(),
            coords,
            components,
            dg,
            d2g: OnceLock::new(),
            log_sqrt_det_grad,
            constraints,
        })
    }

    /// Builds a field from expression source strings.
    pub fn from_strings(
        name: impl Into<String>,
        coords: &[&str],
        grid: &[&[&str]],
        domain: &[&str],
    ) -> Result<Self> {
        let coords: Vec<String> = coords.iter().map(|c| c.to_string()).collect();
        let mut parsed = Vec::with_capacity(grid.len());
        for (i, row) in grid.iter().enumerate() {
            let mut out = Vec::with_capacity(row.len());
            for (j, text) in row.iter().enumerate() {
                let e = parse_expr(text, &coords)
                    .map_err(|e| Error::Manifest(format!("metric[{i}][{j}] `{text}`: {e}")))?;
                out.push(e);
            }
            parsed.push(out);
        }
        let mut constraints = Vec::new();
        for text in domain {
            constraints.extend(DomainConstraint::parse(text, &coords)?);
        }
        MetricField::new(name, coords, parsed, constraints)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[String] {
        &self.coords
    }

    pub fn constraints(&self) -> &[DomainConstraint] {
        &self.constraints
    }

    pub fn component(&self, i: usize, j: usize) -> &Expr {
        &self.components[i * self.dim() + j]
    }

    pub fn component_partial(&self, k: usize, i: usize, j: usize) -> &Expr {
        let n = self.dim();
        &self.dg[(k * n + i) * n + j]
    }

    pub fn component_partial2(&self, k: usize, l: usize, i: usize, j: usize) -> &Expr {
        let n = self.dim();
        let d2g = self.d2g.get_or_init(|| {
            let mut out = vec![Expr::zero(); n * n * n * n];
            for k in 0..n {
                for l in 0..n {
                    for i in 0..n {
                        for j in i..n {
                            let e = self.dg[(l * n + i) * n + j].differentiate(k).simplify();
                            out[((k * n + l) * n + i) * n + j] = e.clone();
                            out[((k * n + l) * n + j) * n + i] = e;
                        }
                    }
                }
            }
            out
        });
        &d2g[((k * n + l) * n + i) * n + j]
    }

    pub(crate) fn log_sqrt_det_grad_expr(&self, j: usize) -> Option<&Expr> {
        self.log_sqrt_det_grad.as_ref().map(|v| &v[j])
    }

    /// Errors unless `p` satisfies every domain constraint strictly.
    pub fn check_domain(&self, p: &ChartPoint) -> Result<()> {
        if p.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: p.dim(),
            });
        }
        for c in &self.constraints {
            if !c.holds(p.as_slice()) {
                return Err(Error::OutOfDomain {
                    point: p.0.clone(),
                    constraint: c.text.clone(),
                });
            }
        }
        Ok(())
    }

    /// Evaluates g, g⁻¹, det g and ln √det g at `p`, verifying positive
    /// definiteness through the leading principal minors.
    pub fn metric_at(&self, p: &ChartPoint) -> Result<MetricAtPoint> {
        self.check_domain(p)?;
        let n = self.dim();
        let mut g = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let v = self.component(i, j).evaluate(p.as_slice())?;
                g[(i, j)] = v;
                g[(j, i)] = v;
            }
        }
        for k in 1..=n {
            let minor = g.view((0, 0), (k, k)).clone_owned().determinant();
            if !(minor > 0.0) {
                return Err(Error::NotPositiveDefinite {
                    point: p.0.clone(),
                    order: k,
                    minor,
                });
            }
        }
        let lu = g.clone().lu();
        let det = lu.determinant();
        let g_inv = lu.try_inverse().ok_or_else(|| Error::DegenerateMetric {
            point: p.0.clone(),
            det,
        })?;
        Ok(MetricAtPoint {
            g,
            g_inv,
            det,
            log_sqrt_det: 0.5 * det.ln(),
        })
    }

    /// All first partials of g evaluated at `p`: `out.get(k,i,j)` = ∂_k g_ij.
    pub fn partials_at(&self, p: &ChartPoint) -> Result<Tensor3> {
        let n = self.dim();
        let mut out = Tensor3::zeros(n);
        for k in 0..n {
            for i in 0..n {
                for j in i..n {
                    let v = self.component_partial(k, i, j).evaluate(p.as_slice())?;
                    out.set(k, i, j, v);
                    out.set(k, j, i, v);
                }
            }
        }
        Ok(out)
    }

    /// All second partials of g at `p`: `out.get(k,l,i*n+j ...)` packs
    /// ∂_k ∂_l g_ij as a rank-4 grid.
    pub fn second_partials_at(&self, p: &ChartPoint) -> Result<Tensor4> {
        let n = self.dim();
        let mut out = Tensor4::zeros(n);
        for k in 0..n {
            for l in 0..n {
                for i in 0..n {
                    for j in i..n {
                        let v = self
                            .component_partial2(k, l, i, j)
                            .evaluate(p.as_slice())?;
                        out.set(k, l, i, j, v);
                        out.set(k, l, j, i, v);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Same chart with every metric component scaled by the constant `c`.
    pub fn scaled(&self, c: f64) -> Result<MetricField> {
        let n = self.dim();
        let grid: Vec<Vec<Expr>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| Expr::mul(Expr::constant(c), self.component(i, j).clone()))
                    .collect()
            })
            .collect();
        MetricField::new(
            self.name.clone(),
            self.coords.clone(),
            grid,
            self.constraints.clone(),
        )
    }
}

/// Cofactor-expansion determinant over expression entries (small n only).
fn det_expr(components: &[Expr], n: usize) -> Expr {
    fn go(entry: &dyn Fn(usize, usize) -> Expr, n: usize) -> Expr {
        if n == 1 {
            return entry(0, 0);
        }
        let mut acc = Expr::zero();
        for j in 0..n {
            let minor = move |r: usize, c: usize| entry(r + 1, if c < j { c } else { c + 1 });
            let term = Expr::mul(entry(0, j), go(&minor, n - 1));
            acc = if j % 2 == 0 {
                Expr::add(acc, term)
            } else {
                Expr::sub(acc, term)
            };
        }
        acc
    }
    let entry = |i: usize, j: usize| components[i * n + j].clone();
    go(&entry, n)
}

/// g_ij vⁱ cʲ for two upper-index vectors at `p`.
pub fn inner_product(
    field: &MetricField,
    p: &ChartPoint,
    v: &TangentVector,
    c: &TangentVector,
) -> Result<f64> {
    v.expect_position(IndexPosition::Upper)?;
    c.expect_position(IndexPosition::Upper)?;
    if v.dim() != field.dim() || c.dim() != field.dim() {
        return Err(Error::DimensionMismatch {
            expected: field.dim(),
            got: v.dim().max(c.dim()),
        });
    }
    let m = field.metric_at(p)?;
    Ok((v.components.transpose() * &m.g * &c.components)[(0, 0)])
}

/// v_j = g_ij vⁱ.
pub fn lower_index(field: &MetricField, p: &ChartPoint, v: &TangentVector) -> Result<TangentVector> {
    v.expect_position(IndexPosition::Upper)?;
    if v.dim() != field.dim() {
        return Err(Error::DimensionMismatch {
            expected: field.dim(),
            got: v.dim(),
        });
    }
    let m = field.metric_at(p)?;
    Ok(TangentVector {
        components: &m.g * &v.components,
        position: IndexPosition::Lower,
    })
}

/// vⁱ = g^ij v_j, inverse of [`lower_index`].
pub fn raise_index(field: &MetricField, p: &ChartPoint, v: &TangentVector) -> Result<TangentVector> {
    v.expect_position(IndexPosition::Lower)?;
    if v.dim() != field.dim() {
        return Err(Error::DimensionMismatch {
            expected: field.dim(),
            got: v.dim(),
        });
    }
    let m = field.metric_at(p)?;
    Ok(TangentVector {
        components: &m.g_inv * &v.components,
        position: IndexPosition::Upper,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifold::zoo;
    use approx::assert_relative_eq;
    use std::collections::BTreeMap;

    fn half_plane() -> MetricField {
        zoo::builtin_manifold("poincare_half_plane", &BTreeMap::new()).unwrap()
    }

    #[test]
    fn euclidean_metric_is_identity() {
        let f = zoo::builtin_manifold("euclidean", &BTreeMap::new()).unwrap();
        let m = f.metric_at(&ChartPoint(vec![3.0, -1.5])).unwrap();
        assert_eq!(m.g, DMatrix::identity(2, 2));
        assert_eq!(m.det, 1.0);
        assert_eq!(m.log_sqrt_det, 0.0);
    }

    #[test]
    fn half_plane_metric_at_height_two() {
        let f = half_plane();
        let m = f.metric_at(&ChartPoint(vec![0.0, 2.0])).unwrap();
        assert_relative_eq!(m.g[(0, 0)], 0.25);
        assert_relative_eq!(m.g[(1, 1)], 0.25);
        assert_relative_eq!(m.det, 1.0 / 16.0);
        assert_relative_eq!(m.log_sqrt_det, (0.25f64).ln(), max_relative = 1e-15);
    }

    #[test]
    fn sphere_metric_at_quarter_turn() {
        let mut params = BTreeMap::new();
        params.insert("radius".to_string(), "1".to_string());
        let f = zoo::builtin_manifold("sphere", &params).unwrap();
        let m = f
            .metric_at(&ChartPoint(vec![std::f64::consts::FRAC_PI_4, 0.3]))
            .unwrap();
        assert_relative_eq!(m.g[(0, 0)], 1.0);
        assert_relative_eq!(m.g[(1, 1)], 0.5, max_relative = 1e-15);
        assert_relative_eq!(m.det, 0.5, max_relative = 1e-15);
    }

    #[test]
    fn half_plane_boundary_is_out_of_domain() {
        let f = half_plane();
        assert!(matches!(
            f.metric_at(&ChartPoint(vec![0.0, 0.0])),
            Err(Error::OutOfDomain { .. })
        ));
        assert!(matches!(
            f.metric_at(&ChartPoint(vec![0.0, -1.0])),
            Err(Error::OutOfDomain { .. })
        ));
    }

    #[test]
    fn non_positive_definite_is_reported() {
        let f = MetricField::from_strings("bad", &["x", "y"], &[&["x", "0"], &["0", "1"]], &[])
            .unwrap();
        let err = f.metric_at(&ChartPoint(vec![-1.0, 0.0])).unwrap_err();
        assert!(matches!(err, Error::NotPositiveDefinite { order: 1, .. }));
    }

    #[test]
    fn asymmetric_grid_is_rejected() {
        let err =
            MetricField::from_strings("bad", &["x", "y"], &[&["1", "x"], &["y", "1"]], &[])
                .unwrap_err();
        assert!(matches!(err, Error::AsymmetricMetric { i: 0, j: 1 }));
    }

    #[test]
    fn inner_product_examples() {
        let e2 = zoo::builtin_manifold("euclidean", &BTreeMap::new()).unwrap();
        let p = ChartPoint(vec![0.0, 0.0]);
        let v = TangentVector::upper(vec![1.0, 0.0]);
        let c = TangentVector::upper(vec![0.0, 1.0]);
        assert_eq!(inner_product(&e2, &p, &v, &c).unwrap(), 0.0);

        let hp = half_plane();
        let p = ChartPoint(vec![0.0, 2.0]);
        let v = TangentVector::upper(vec![1.0, 0.0]);
        assert_relative_eq!(inner_product(&hp, &p, &v, &v).unwrap(), 0.25);

        let mut params = BTreeMap::new();
        params.insert("radius".to_string(), "1".to_string());
        let sphere = zoo::builtin_manifold("sphere", &params).unwrap();
        let p = ChartPoint(vec![std::f64::consts::FRAC_PI_4, 0.0]);
        let v = TangentVector::upper(vec![0.0, 1.0]);
        assert_relative_eq!(
            inner_product(&sphere, &p, &v, &v).unwrap(),
            0.5,
            max_relative = 1e-15
        );
    }

    #[test]
    fn lower_and_raise_are_inverse() {
        let hp = half_plane();
        let p = ChartPoint(vec![0.0, 2.0]);
        let v = TangentVector::upper(vec![1.0, 0.0]);
        let low = lower_index(&hp, &p, &v).unwrap();
        assert_relative_eq!(low.components[0], 0.25);
        assert_relative_eq!(low.components[1], 0.0);
        let back = raise_index(&hp, &p, &low).unwrap();
        assert_relative_eq!(back.components[0], 1.0, max_relative = 1e-12);

        // wrong index position is rejected
        assert!(lower_index(&hp, &p, &low).is_err());
    }

    #[test]
    fn euclidean_lowering_is_identity() {
        let e2 = zoo::builtin_manifold("euclidean", &BTreeMap::new()).unwrap();
        let p = ChartPoint(vec![0.0, 0.0]);
        let v = TangentVector::upper(vec![3.0, 4.0]);
        let low = lower_index(&e2, &p, &v).unwrap();
        assert_eq!(low.components.as_slice(), &[3.0, 4.0]);
    }

    #[test]
    fn scaled_field_scales_determinant() {
        let hp = half_plane();
        let scaled = hp.scaled(3.0).unwrap();
        let p = ChartPoint(vec![0.4, 1.7]);
        let m0 = hp.metric_at(&p).unwrap();
        let m1 = scaled.metric_at(&p).unwrap();
        assert_relative_eq!(m1.det, 9.0 * m0.det, max_relative = 1e-12);
    }

    #[test]
    fn constraint_chain_parses_both_sides() {
        let coords = vec!["theta".to_string(), "phi".to_string()];
        let cs = DomainConstraint::parse("0 < theta < pi", &coords).unwrap();
        assert_eq!(cs.len(), 2);
        assert!(cs.iter().all(|c| c.holds(&[1.0, 0.0])));
        assert!(!cs[0].holds(&[0.0, 0.0]));
        assert!(!cs[1].holds(&[std::f64::consts::PI, 0.0]));
    }
}
