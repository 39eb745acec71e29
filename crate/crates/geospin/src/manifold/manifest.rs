//! JSON manifest format for user-supplied metrics.
//!
//! ```json
//! {
//!   "name": "poincare-half-plane",
//!   "dimension": 2,
//!   "coordinates": ["x", "y"],
//!   "metric": [["1/y^2", "0"], ["0", "1/y^2"]],
//!   "domain": ["y > 0"]
//! }
//! ```

use super::{DomainConstraint, MetricField};
use crate::error::{Error, Result};
use crate::expr::parse_expr;
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ManifoldManifest {
    pub name: String,
    pub dimension: usize,
    pub coordinates: Vec<String>,
    pub metric: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub domain: Vec<String>,
}

impl ManifoldManifest {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn from_field(field: &MetricField) -> Self {
        let n = field.dim();
        ManifoldManifest {
            name: field.name().to_string(),
            dimension: n,
            coordinates: field.coords().to_vec(),
            metric: (0..n)
                .map(|i| (0..n).map(|j| field.component(i, j).to_string()).collect())
                .collect(),
            domain: field.constraints().iter().map(|c| c.text().to_string()).collect(),
        }
    }

    pub fn to_field(&self) -> Result<MetricField> {
        let n = self.dimension;
        if self.coordinates.len() != n {
            return Err(Error::Manifest(format!(
                "dimension is {n} but {} coordinates are listed",
                self.coordinates.len()
            )));
        }
        for name in &self.coordinates {
            let ok = !name.is_empty()
                && name.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !ok {
                return Err(Error::Manifest(format!("bad coordinate name `{name}`")));
            }
            if name == "pi" || ["sin", "cos", "sinh", "cosh", "exp", "ln", "sqrt"].contains(&name.as_str()) {
                return Err(Error::Manifest(format!(
                    "coordinate name `{name}` collides with a builtin"
                )));
            }
        }
        if self.coordinates.iter().enumerate().any(|(i, a)| {
            self.coordinates[..i].contains(a)
        }) {
            return Err(Error::Manifest("duplicate coordinate names".into()));
        }
        if self.metric.len() != n || self.metric.iter().any(|row| row.len() != n) {
            return Err(Error::Manifest(format!("metric grid must be {n}x{n}")));
        }

        let mut grid = Vec::with_capacity(n);
        for (i, row) in self.metric.iter().enumerate() {
            let mut out = Vec::with_capacity(n);
            for (j, text) in row.iter().enumerate() {
                let e = parse_expr(text, &self.coordinates)
                    .map_err(|e| Error::Manifest(format!("metric[{i}][{j}] `{text}`: {e}")))?;
                out.push(e);
            }
            grid.push(out);
        }
        let mut constraints = Vec::new();
        for text in &self.domain {
            constraints.extend(DomainConstraint::parse(text, &self.coordinates)?);
        }
        MetricField::new(self.name.clone(), self.coordinates.clone(), grid, constraints)
    }
}
