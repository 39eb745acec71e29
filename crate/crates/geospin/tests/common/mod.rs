//! Test oracles, independent of the library paths they check.
//!
//! The finite-difference oracles rebuild connection and curvature data from
//! plain metric evaluations; the cubic solver produces 3x3 eigenvalues from
//! the characteristic polynomial without any matrix iteration; the closed
//! forms come from textbook solutions.

#![allow(dead_code)]

use geospin::{ChartPoint, MetricField, Tensor3};
use nalgebra::DMatrix;
use num_complex::Complex64;

/// Christoffel symbols from Eq.-(7) assembly with numeric metric partials
/// (central differences, step 1e-6·max(1, |x_k|)).
pub fn christoffel_fd(field: &MetricField, p: &ChartPoint) -> Tensor3 {
    let n = field.dim();
    let g_inv = field.metric_at(p).expect("in-domain point").g_inv;
    let mut dg = Tensor3::zeros(n);
    for k in 0..n {
        let h = 1e-6 * p.0[k].abs().max(1.0);
        let mut plus = p.0.clone();
        plus[k] += h;
        let mut minus = p.0.clone();
        minus[k] -= h;
        for i in 0..n {
            for j in i..n {
                let gp = field.component(i, j).evaluate(&plus).expect("evaluable");
                let gm = field.component(i, j).evaluate(&minus).expect("evaluable");
                let d = (gp - gm) / (2.0 * h);
                dg.set(k, i, j, d);
                dg.set(k, j, i, d);
            }
        }
    }
    let mut gamma = Tensor3::zeros(n);
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let mut sum = 0.0;
                for l in 0..n {
                    sum += g_inv[(k, l)] * (dg.get(i, j, l) + dg.get(j, i, l) - dg.get(l, i, j));
                }
                gamma.set(k, i, j, 0.5 * sum);
            }
        }
    }
    gamma
}

/// Scalar curvature with ∂Γ from central differences of the FD Christoffel
/// oracle itself, so the whole chain is independent of symbolic derivatives.
pub fn scalar_curvature_fd(field: &MetricField, p: &ChartPoint) -> f64 {
    let n = field.dim();
    let metric = field.metric_at(p).expect("in-domain point");
    let gamma = christoffel_fd(field, p);

    let mut dgamma: Vec<Tensor3> = Vec::with_capacity(n);
    for k in 0..n {
        let h = 1e-4 * p.0[k].abs().max(1.0);
        let mut plus = p.0.clone();
        plus[k] += h;
        let mut minus = p.0.clone();
        minus[k] -= h;
        let gp = christoffel_fd(field, &ChartPoint(plus));
        let gm = christoffel_fd(field, &ChartPoint(minus));
        let mut d = Tensor3::zeros(n);
        for i in 0..n {
            for l in 0..n {
                for j in 0..n {
                    d.set(i, l, j, (gp.get(i, l, j) - gm.get(i, l, j)) / (2.0 * h));
                }
            }
        }
        dgamma.push(d);
    }

    let mut scalar = 0.0;
    for j in 0..n {
        for l in 0..n {
            let mut ric = 0.0;
            for i in 0..n {
                let mut r = dgamma[i].get(i, l, j) - dgamma[l].get(i, i, j);
                for m in 0..n {
                    r += gamma.get(i, i, m) * gamma.get(m, l, j)
                        - gamma.get(i, l, m) * gamma.get(m, i, j);
                }
                ric += r;
            }
            scalar += metric.g_inv[(j, l)] * ric;
        }
    }
    scalar
}

/// Roots of λ³ + p λ² + q λ + r with real coefficients, by depressing the
/// cubic and branching on the discriminant (trigonometric form for three
/// real roots, Cardano for one real plus a conjugate pair).
pub fn cubic_roots(p: f64, q: f64, r: f64) -> [Complex64; 3] {
    let a = q - p * p / 3.0;
    let b = 2.0 * p * p * p / 27.0 - p * q / 3.0 + r;
    let shift = -p / 3.0;

    let discriminant = -4.0 * a * a * a - 27.0 * b * b;
    if discriminant >= 0.0 && a < 0.0 {
        // Three real roots.
        let m = 2.0 * (-a / 3.0).sqrt();
        let arg = (3.0 * b / (a * m)).clamp(-1.0, 1.0);
        let phi = arg.acos() / 3.0;
        let mut out = [Complex64::new(0.0, 0.0); 3];
        for (k, slot) in out.iter_mut().enumerate() {
            let angle = phi - 2.0 * std::f64::consts::PI * k as f64 / 3.0;
            *slot = Complex64::new(shift + m * angle.cos(), 0.0);
        }
        out
    } else if a == 0.0 && b == 0.0 {
        [Complex64::new(shift, 0.0); 3]
    } else {
        // One real root, one conjugate pair.
        let delta = (b * b / 4.0 + a * a * a / 27.0).sqrt();
        let u = (-b / 2.0 + delta).cbrt();
        let v = (-b / 2.0 - delta).cbrt();
        let real = u + v;
        let im = (u - v) * 3.0f64.sqrt() / 2.0;
        [
            Complex64::new(shift + real, 0.0),
            Complex64::new(shift - real / 2.0, im),
            Complex64::new(shift - real / 2.0, -im),
        ]
    }
}

/// Characteristic polynomial λ³ + p λ² + q λ + r of a 3x3 matrix:
/// p = −tr M, q = Σ principal 2x2 minors, r = −det M.
pub fn char_poly_3x3(m: &DMatrix<f64>) -> (f64, f64, f64) {
    assert_eq!(m.nrows(), 3);
    let tr = m[(0, 0)] + m[(1, 1)] + m[(2, 2)];
    // principal 2x2 minor obtained by deleting row/column i
    let minor = |i: usize| {
        let (a, c) = ((i + 1) % 3, (i + 2) % 3);
        m[(a, a)] * m[(c, c)] - m[(a, c)] * m[(c, a)]
    };
    let m2 = minor(0) + minor(1) + minor(2);
    let det = m.determinant();
    (-tr, m2, -det)
}

/// Closed-form unit-speed half-plane geodesic from (0, 1) with v = (1, 0):
/// (x, y) = (tanh t, sech t), (ẋ, ẏ) = (sech² t, −sech t · tanh t).
pub fn half_plane_exact(t: f64) -> ([f64; 2], [f64; 2]) {
    let sech = 1.0 / t.cosh();
    ([t.tanh(), sech], [sech * sech, -sech * t.tanh()])
}

pub fn sort_complex(v: Vec<Complex64>) -> Vec<Complex64> {
    // normalize -0.0 so signed zeros cannot reorder exact-zero parts
    let mut v: Vec<Complex64> = v
        .into_iter()
        .map(|c| Complex64::new(c.re + 0.0, c.im + 0.0))
        .collect();
    v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    v
}
