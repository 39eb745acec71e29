//! Built-in manifolds and the fixed instance set used by the verify suite.

use super::{ChartPoint, MetricField};
use crate::error::{Error, Result};
use rand::Rng;
use std::collections::BTreeMap;

/// (name, dimension, parameter signature, description) rows for
/// `list-manifolds`.
pub fn zoo_entries() -> &'static [(&'static str, &'static str, &'static str, &'static str)] {
    &[
        (
            "euclidean",
            "n (1..=16, default 2)",
            "dim=<n>",
            "flat metric, identity grid",
        ),
        (
            "sphere",
            "2",
            "radius=<r> (default 1)",
            "round 2-sphere in (theta, phi), domain 0 < theta < pi",
        ),
        (
            "poincare-half-plane",
            "2",
            "",
            "hyperbolic upper half-plane, g = diag(1/y^2, 1/y^2), domain y > 0",
        ),
        (
            "poincare-disk",
            "2",
            "",
            "hyperbolic unit disk, g = 4/(1-x^2-y^2)^2 * I, domain x^2+y^2 < 1",
        ),
        (
            "flat-torus",
            "n (1..=16, default 2)",
            "dim=<n>",
            "identity metric on the (0, 2*pi)^n fundamental chart",
        ),
        (
            "warped-product",
            "2",
            "warp=<f(x)> (default cosh(x))",
            "surface g = diag(1, f(x)^2)",
        ),
    ]
}

fn get_usize(params: &BTreeMap<String, String>, key: &str, default: usize) -> Result<usize> {
    match params.get(key) {
        None => Ok(default),
        Some(raw) => raw.parse::<usize>().map_err(|_| Error::InvalidParameter {
            name: key.into(),
            reason: format!("`{raw}` is not a positive integer"),
        }),
    }
}

fn get_f64(params: &BTreeMap<String, String>, key: &str, default: f64) -> Result<f64> {
    match params.get(key) {
        None => Ok(default),
        Some(raw) => raw.parse::<f64>().map_err(|_| Error::InvalidParameter {
            name: key.into(),
            reason: format!("`{raw}` is not a real number"),
        }),
    }
}

fn reject_unknown(params: &BTreeMap<String, String>, allowed: &[&str]) -> Result<()> {
    for key in params.keys() {
        if !allowed.contains(&key.as_str()) {
            return Err(Error::InvalidParameter {
                name: key.clone(),
                reason: format!("not recognized; allowed: {}", allowed.join(", ")),
            });
        }
    }
    Ok(())
}

fn coord_names(n: usize) -> Vec<String> {
    if n <= 4 {
        ["x", "y", "z", "w"][..n].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=n).map(|i| format!("x{i}")).collect()
    }
}

fn identity_grid(n: usize) -> Vec<Vec<String>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { "1".to_string() } else { "0".to_string() })
                .collect()
        })
        .collect()
}

fn build(name: &str, coords: Vec<String>, grid: Vec<Vec<String>>, domain: Vec<String>) -> Result<MetricField> {
    let coord_refs: Vec<&str> = coords.iter().map(String::as_str).collect();
    let grid_refs: Vec<Vec<&str>> = grid
        .iter()
        .map(|row| row.iter().map(String::as_str).collect())
        .collect();
    let row_slices: Vec<&[&str]> = grid_refs.iter().map(Vec::as_slice).collect();
    let domain_refs: Vec<&str> = domain.iter().map(String::as_str).collect();
    MetricField::from_strings(name, &coord_refs, &row_slices, &domain_refs)
}

/// Constructs a zoo metric by name. Names are case-insensitive and accept
/// `-` or `_` interchangeably.
pub fn builtin_manifold(name: &str, params: &BTreeMap<String, String>) -> Result<MetricField> {
    let canonical = name.to_ascii_lowercase().replace('-', "_");
    match canonical.as_str() {
        "euclidean" => {
            reject_unknown(params, &["dim"])?;
            let n = get_usize(params, "dim", 2)?;
            if n == 0 || n > 16 {
                return Err(Error::InvalidParameter {
                    name: "dim".into(),
                    reason: format!("{n} outside supported range 1..=16"),
                });
            }
            build("euclidean", coord_names(n), identity_grid(n), vec![])
        }
        "sphere" => {
            reject_unknown(params, &["radius"])?;
            let r = get_f64(params, "radius", 1.0)?;
            if !(r > 0.0) {
                return Err(Error::InvalidParameter {
                    name: "radius".into(),
                    reason: format!("must be positive, got {r}"),
                });
            }
            let r2 = format!("{}", r * r);
            build(
                "sphere",
                vec!["theta".into(), "phi".into()],
                vec![
                    vec![r2.clone(), "0".into()],
                    vec!["0".into(), format!("{r2}*sin(theta)^2")],
                ],
                vec!["0 < theta < pi".into()],
            )
        }
        "poincare_half_plane" => {
            reject_unknown(params, &[])?;
            build(
                "poincare-half-plane",
                vec!["x".into(), "y".into()],
                vec![
                    vec!["1/y^2".into(), "0".into()],
                    vec!["0".into(), "1/y^2".into()],
                ],
                vec!["y > 0".into()],
            )
        }
        "poincare_disk" => {
            reject_unknown(params, &[])?;
            let conformal = "4/(1 - x^2 - y^2)^2".to_string();
            build(
                "poincare-disk",
                vec!["x".into(), "y".into()],
                vec![
                    vec![conformal.clone(), "0".into()],
                    vec!["0".into(), conformal],
                ],
                vec!["x^2 + y^2 < 1".into()],
            )
        }
        "flat_torus" => {
            reject_unknown(params, &["dim"])?;
            let n = get_usize(params, "dim", 2)?;
            if n == 0 || n > 16 {
                return Err(Error::InvalidParameter {
                    name: "dim".into(),
                    reason: format!("{n} outside supported range 1..=16"),
                });
            }
            let coords = coord_names(n);
            let domain = coords.iter().map(|c| format!("0 < {c} < 2*pi")).collect();
            build("flat-torus", coords, identity_grid(n), domain)
        }
        "warped_product" => {
            reject_unknown(params, &["warp"])?;
            let warp = params
                .get("warp")
                .cloned()
                .unwrap_or_else(|| "cosh(x)".to_string());
            // Validate the warp now so errors name the parameter.
            let coords = vec!["x".to_string(), "y".to_string()];
            let f = crate::expr::parse_expr(&warp, &coords).map_err(|e| Error::InvalidParameter {
                name: "warp".into(),
                reason: format!("`{warp}`: {e}"),
            })?;
            if f.max_coord_index() == Some(1) {
                return Err(Error::InvalidParameter {
                    name: "warp".into(),
                    reason: "warp function may depend on x only".into(),
                });
            }
            build(
                "warped-product",
                vec!["x".into(), "y".into()],
                vec![
                    vec!["1".into(), "0".into()],
                    vec!["0".into(), format!("({warp})^2")],
                ],
                vec![],
            )
        }
        _ => Err(Error::UnknownManifold { name: name.into() }),
    }
}

/// One zoo member pinned for verification: the field, a sampling box that
/// stays inside the chart domain, and a canonical geodesic start that
/// remains in-domain for curve parameter t ∈ [0, 2].
#[derive(Debug, Clone)]
pub struct ZooInstance {
    pub label: String,
    pub field: MetricField,
    sample_lo: Vec<f64>,
    sample_hi: Vec<f64>,
    pub geodesic_start: (Vec<f64>, Vec<f64>),
}

impl ZooInstance {
    fn new(
        label: &str,
        field: MetricField,
        sample_lo: Vec<f64>,
        sample_hi: Vec<f64>,
        start: (Vec<f64>, Vec<f64>),
    ) -> Self {
        ZooInstance {
            label: label.to_string(),
            field,
            sample_lo,
            sample_hi,
            geodesic_start: start,
        }
    }

    pub fn sample_point<R: Rng>(&self, rng: &mut R) -> ChartPoint {
        let coords = self
            .sample_lo
            .iter()
            .zip(&self.sample_hi)
            .map(|(&lo, &hi)| rng.random_range(lo..hi))
            .collect();
        ChartPoint(coords)
    }

    /// Uniform components in [-1, 1], rejecting near-zero vectors so
    /// relative tolerances stay meaningful.
    pub fn sample_velocity<R: Rng>(&self, rng: &mut R) -> Vec<f64> {
        let n = self.field.dim();
        loop {
            let v: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
            if v.iter().map(|x| x * x).sum::<f64>().sqrt() > 1e-3 {
                return v;
            }
        }
    }
}

/// The fixed instance set every cross-manifold check runs over.
pub fn verification_zoo() -> Vec<ZooInstance> {
    let none = BTreeMap::new();
    let mut d3 = BTreeMap::new();
    d3.insert("dim".to_string(), "3".to_string());
    let pi = std::f64::consts::PI;

    vec![
        ZooInstance::new(
            "euclidean-2",
            builtin_manifold("euclidean", &none).unwrap(),
            vec![-2.0, -2.0],
            vec![2.0, 2.0],
            (vec![0.0, 0.0], vec![0.6, 0.8]),
        ),
        ZooInstance::new(
            "euclidean-3",
            builtin_manifold("euclidean", &d3).unwrap(),
            vec![-2.0; 3],
            vec![2.0; 3],
            (vec![0.0; 3], vec![0.3, 0.2, 0.1]),
        ),
        ZooInstance::new(
            "sphere-1",
            builtin_manifold("sphere", &none).unwrap(),
            vec![0.4, -pi],
            vec![pi - 0.4, pi],
            (vec![pi / 2.0, 0.0], vec![0.1, 0.2]),
        ),
        ZooInstance::new(
            "poincare-half-plane",
            builtin_manifold("poincare-half-plane", &none).unwrap(),
            vec![-2.0, 0.4],
            vec![2.0, 3.0],
            (vec![0.0, 1.0], vec![1.0, 0.0]),
        ),
        ZooInstance::new(
            "poincare-disk",
            builtin_manifold("poincare-disk", &none).unwrap(),
            vec![-0.5, -0.5],
            vec![0.5, 0.5],
            (vec![0.0, 0.0], vec![0.3, 0.0]),
        ),
        ZooInstance::new(
            "flat-torus-2",
            builtin_manifold("flat-torus", &none).unwrap(),
            vec![0.5, 0.5],
            vec![2.0 * pi - 0.5, 2.0 * pi - 0.5],
            (vec![pi, pi], vec![0.3, 0.2]),
        ),
        ZooInstance::new(
            "warped-cosh",
            builtin_manifold("warped-product", &none).unwrap(),
            vec![-1.5, -1.5],
            vec![1.5, 1.5],
            (vec![0.0, 0.0], vec![0.3, 0.2]),
        ),
    ]
}
