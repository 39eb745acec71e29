//! Curvature tensors and Ricci flow on Einstein families.
//!
//! Conventions, fixed once and validated against the constant-curvature
//! oracles R(unit sphere) = +2 and R(half-plane) = −2:
//!
//! ```text
//! R^i_jkl = ∂_k Γ^i_lj − ∂_l Γ^i_kj + Γ^i_km Γ^m_lj − Γ^i_lm Γ^m_kj
//! Ric_jl  = R^i_jil,    R = g^jl Ric_jl
//! ```
//!
//! ∂Γ is assembled exactly from symbolic first and second metric partials
//! via ∂(g⁻¹) = −g⁻¹ (∂g) g⁻¹; no finite differencing appears anywhere.
//!
//! The metric evolution dg/dt = −2 Ric is integrated on homothetic families
//! g(t) = c(t) g₀ with g₀ Einstein (Ric = ρ g₀), where the flow reduces to
//! the scalar ODE ċ = −2ρ. Every dimension-2 constant-curvature chart and
//! every round sphere qualifies. Along the flow w⁽ʳ⁾ = ½ tr(g⁻¹ ġ) and the
//! recorded residual |w⁽ʳ⁾ + R| is the corollary check H = −iħw⁽ʳ⁾ = iħR.

use crate::error::{Error, Result};
use crate::manifold::{ChartPoint, MetricField};
use crate::tensor::{Tensor3, Tensor4};
use nalgebra::DMatrix;

/// Flow stops when the scale factor reaches this value (metric extinction).
pub const EXTINCTION_SCALE: f64 = 1e-6;

/// Allowed pointwise deviation from Ric = ρg when validating a flow family.
const EINSTEIN_TOL: f64 = 1e-8;

/// Riemann, Ricci and scalar curvature at one point.
#[derive(Debug, Clone)]
pub struct CurvatureBundle {
    pub point: ChartPoint,
    /// `riemann.get(i,j,k,l)` = R^i_jkl.
    pub riemann: Tensor4,
    pub ricci: DMatrix<f64>,
    pub scalar: f64,
}

/// Computes the curvature bundle from exact symbolic metric derivatives.
pub fn curvature_at(field: &MetricField, p: &ChartPoint) -> Result<CurvatureBundle> {
    let n = field.dim();
    let metric = field.metric_at(p)?;
    let ginv = &metric.g_inv;
    let dg = field.partials_at(p)?;
    let d2g = field.second_partials_at(p)?;

    // Christoffel symbols of the first kind: gamma1(m, l, j) = Γ_{m,lj}.
    let mut gamma1 = Tensor3::zeros(n);
    for m in 0..n {
        for l in 0..n {
            for j in 0..n {
                gamma1.set(
                    m,
                    l,
                    j,
                    0.5 * (dg.get(l, j, m) + dg.get(j, l, m) - dg.get(m, l, j)),
                );
            }
        }
    }

    // Second kind: gamma2(i, l, j) = Γ^i_lj.
    let mut gamma2 = Tensor3::zeros(n);
    for i in 0..n {
        for l in 0..n {
            for j in 0..n {
                let mut sum = 0.0;
                for m in 0..n {
                    sum += ginv[(i, m)] * gamma1.get(m, l, j);
                }
                gamma2.set(i, l, j, sum);
            }
        }
    }

    // ∂_k g^im = −g^ia (∂_k g_ab) g^bm.
    let mut dginv = Tensor3::zeros(n);
    for k in 0..n {
        for i in 0..n {
            for m in 0..n {
                let mut sum = 0.0;
                for a in 0..n {
                    for b in 0..n {
                        sum -= ginv[(i, a)] * dg.get(k, a, b) * ginv[(b, m)];
                    }
                }
                dginv.set(k, i, m, sum);
            }
        }
    }

    // ∂_k Γ_{m,lj} = ½(∂_k∂_l g_jm + ∂_k∂_j g_lm − ∂_k∂_m g_lj).
    // ∂_k Γ^i_lj = (∂_k g^im) Γ_{m,lj} + g^im ∂_k Γ_{m,lj}.
    let mut dgamma2 = Tensor4::zeros(n);
    for k in 0..n {
        for i in 0..n {
            for l in 0..n {
                for j in 0..n {
                    let mut sum = 0.0;
                    for m in 0..n {
                        let dgamma1 = 0.5
                            * (d2g.get(k, l, j, m) + d2g.get(k, j, l, m) - d2g.get(k, m, l, j));
                        sum += dginv.get(k, i, m) * gamma1.get(m, l, j)
                            + ginv[(i, m)] * dgamma1;
                    }
                    dgamma2.set(k, i, l, j, sum);
                }
            }
        }
    }

    let mut riemann = Tensor4::zeros(n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let mut value = dgamma2.get(k, i, l, j) - dgamma2.get(l, i, k, j);
                    for m in 0..n {
                        value += gamma2.get(i, k, m) * gamma2.get(m, l, j)
                            - gamma2.get(i, l, m) * gamma2.get(m, k, j);
                    }
                    riemann.set(i, j, k, l, value);
                }
            }
        }
    }

    let ricci = DMatrix::from_fn(n, n, |j, l| {
        (0..n).map(|i| riemann.get(i, j, i, l)).sum::<f64>()
    });
    let scalar = (0..n)
        .flat_map(|j| (0..n).map(move |l| (j, l)))
        .map(|(j, l)| ginv[(j, l)] * ricci[(j, l)])
        .sum();

    Ok(CurvatureBundle {
        point: p.clone(),
        riemann,
        ricci,
        scalar,
    })
}

/// w⁽ʳ⁾ = ½ tr(g⁻¹ ġ) for a metric matrix and its time derivative.
pub fn w_r_from_metric_rate(g: &DMatrix<f64>, g_dot: &DMatrix<f64>) -> Result<f64> {
    let n = g.nrows();
    if g.ncols() != n || g_dot.nrows() != n || g_dot.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: g_dot.nrows().max(g_dot.ncols()).max(g.ncols()),
        });
    }
    let asym = (g_dot - g_dot.transpose()).amax();
    if asym > 1e-9 * (1.0 + g_dot.amax()) {
        return Err(Error::Internal(format!(
            "metric rate must be symmetric (asymmetry {asym:.3e})"
        )));
    }
    let lu = g.clone().lu();
    let det = lu.determinant();
    let inv = lu
        .try_inverse()
        .ok_or(Error::SingularMatrix { det })?;
    Ok(0.5 * (inv * g_dot).trace())
}

/// How the flow recomputes its driving Einstein constant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlowMode {
    /// ρ frozen at its t = 0 value (the flow is then exactly linear in t).
    Homothetic,
    /// ρ re-measured from the scaled metric at every integrator stage.
    Pointwise,
}

/// One Ricci-flow sample at the evaluation point.
#[derive(Debug, Clone)]
pub struct RicciFlowSample {
    pub t: f64,
    pub c: f64,
    pub g: DMatrix<f64>,
    pub g_dot: DMatrix<f64>,
    pub w_r: f64,
    pub scalar: f64,
    /// |w⁽ʳ⁾ + R|.
    pub residual: f64,
}

#[derive(Debug, Clone)]
pub struct RicciFlowTrajectory {
    pub point: ChartPoint,
    pub mode: FlowMode,
    pub samples: Vec<RicciFlowSample>,
    /// Time at which the scale factor reached [`EXTINCTION_SCALE`], if it did.
    pub extinction: Option<f64>,
}

impl RicciFlowTrajectory {
    pub fn max_residual(&self) -> f64 {
        self.samples.iter().map(|s| s.residual).fold(0.0, f64::max)
    }

    pub fn max_abs_scalar(&self) -> f64 {
        self.samples
            .iter()
            .map(|s| s.scalar.abs())
            .fold(0.0, f64::max)
    }
}

/// Integrates dg/dt = −2 Ric at `p` for a homothetic (Einstein) family.
pub fn ricci_flow_integrate(
    field: &MetricField,
    p: &ChartPoint,
    t_end: f64,
    h: f64,
    mode: FlowMode,
) -> Result<RicciFlowTrajectory> {
    if !(h > 0.0) {
        return Err(Error::BadIntegration(format!("step h must be positive, got {h}")));
    }
    if !(t_end > 0.0) {
        return Err(Error::BadIntegration(format!(
            "t_end must be positive, got {t_end}"
        )));
    }

    let base_metric = field.metric_at(p)?;
    let base_bundle = curvature_at(field, p)?;
    let n = field.dim();
    let rho0 = base_bundle.scalar / n as f64;

    // The family must be Einstein for the homothetic reduction to be exact:
    // Ric = ρ g₀ at the base point, and — since in dimension 2 that holds for
    // every metric pointwise — ρ must also be constant across nearby chart
    // points.
    let deviation = (&base_bundle.ricci - &base_metric.g * rho0).amax();
    if deviation > EINSTEIN_TOL * (1.0 + rho0.abs() * base_metric.g.amax()) {
        return Err(Error::NotEinstein { deviation });
    }
    for k in 0..n {
        for sign in [-1.0, 1.0] {
            let mut probe = p.0.clone();
            probe[k] += sign * 0.01 * (1.0 + probe[k].abs());
            let probe = ChartPoint(probe);
            if field.check_domain(&probe).is_err() {
                continue;
            }
            let rho_probe = curvature_at(field, &probe)?.scalar / n as f64;
            let drift = (rho_probe - rho0).abs();
            if drift > 1e-6 * (1.0 + rho0.abs()) {
                return Err(Error::NotEinstein { deviation: drift });
            }
        }
    }

    // Einstein constant re-measured from the scaled metric: ġ = ċ g₀ and
    // ġ = −2 Ric give ċ = −2 (Ric : g₀)/(g₀ : g₀), projecting onto the BASE
    // metric. For an exact Einstein family this is scale-invariant.
    let g0 = base_metric.g.clone();
    let g0_norm2: f64 = g0.iter().map(|b| b * b).sum();
    let rho_at = |c: f64| -> Result<f64> {
        let scaled = field.scaled(c)?;
        let ric = curvature_at(&scaled, p)?.ricci;
        let num: f64 = ric.iter().zip(g0.iter()).map(|(a, b)| a * b).sum();
        Ok(num / g0_norm2)
    };

    let c_dot = |c: f64| -> Result<f64> {
        match mode {
            FlowMode::Homothetic => Ok(-2.0 * rho0),
            FlowMode::Pointwise => Ok(-2.0 * rho_at(c)?),
        }
    };

    let record = |t: f64, c: f64| -> Result<RicciFlowSample> {
        let scaled = field.scaled(c)?;
        let g = scaled.metric_at(p)?.g;
        let bundle = curvature_at(&scaled, p)?;
        let g_dot = bundle.ricci.map(|r| -2.0 * r);
        let w_r = w_r_from_metric_rate(&g, &g_dot)?;
        let residual = (w_r + bundle.scalar).abs();
        Ok(RicciFlowSample {
            t,
            c,
            g,
            g_dot,
            w_r,
            scalar: bundle.scalar,
            residual,
        })
    };

    let time_scale = t_end.abs().max(1.0);
    let mut samples = vec![record(0.0, 1.0)?];
    let mut extinction = None;
    let mut t = 0.0f64;
    let mut c = 1.0f64;

    loop {
        let remaining = t_end - t;
        if remaining <= 1e-12 * time_scale {
            break;
        }
        let dt = remaining.min(h);

        let k1 = c_dot(c)?;
        // Shrinking flow: detect the extinction crossing inside this step and
        // solve for it with the current (constant-in-c for Einstein) rate.
        if k1 < 0.0 {
            let c_predicted = c + dt * k1;
            if c_predicted <= EXTINCTION_SCALE {
                let t_ext = t + (c - EXTINCTION_SCALE) / (-k1);
                extinction = Some(t_ext);
                break;
            }
        }
        let k2 = c_dot(c + 0.5 * dt * k1)?;
        let k3 = c_dot(c + 0.5 * dt * k2)?;
        let k4 = c_dot(c + dt * k3)?;
        c += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        let mut t_next = t + dt;
        if (t_end - t_next).abs() <= 1e-12 * time_scale {
            t_next = t_end;
        }
        t = t_next;
        if !(c > EXTINCTION_SCALE) {
            extinction = Some(t);
            break;
        }
        samples.push(record(t, c)?);
    }

    Ok(RicciFlowTrajectory {
        point: p.clone(),
        mode,
        samples,
        extinction,
    })
}

/// Result of comparing H = −iħw⁽ʳ⁾ against H′ = iħR along a flow.
#[derive(Debug, Clone, serde::Serialize)]
pub struct CorollaryReport {
    pub hbar: f64,
    /// max |w⁽ʳ⁾ + R| over the samples.
    pub max_residual: f64,
    pub max_abs_scalar: f64,
    /// ħ · max |w⁽ʳ⁾ + R| = max |H − iħR|.
    pub hamiltonian_defect: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Checks H = iħR per sample: the defect is ħ·max|w⁽ʳ⁾ + R| and the pass
/// threshold is 1e-6·ħ·(1 + max|R|).
pub fn corollary_check(traj: &RicciFlowTrajectory, hbar: f64) -> Result<CorollaryReport> {
    if !(hbar > 0.0) {
        return Err(Error::NonPositiveHbar(hbar));
    }
    let max_residual = traj.max_residual();
    let max_abs_scalar = traj.max_abs_scalar();
    let hamiltonian_defect = hbar * max_residual;
    let tolerance = 1e-6 * hbar * (1.0 + max_abs_scalar);
    Ok(CorollaryReport {
        hbar,
        max_residual,
        max_abs_scalar,
        hamiltonian_defect,
        tolerance,
        pass: hamiltonian_defect <= tolerance,
    })
}
