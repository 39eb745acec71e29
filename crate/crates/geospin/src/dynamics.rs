//! Geodesic flow and the scalar mode equation.
//!
//! The geodesic is integrated as the first-order system
//! dx/dt = v, dv/dt = −W(x, v) v with classical fixed-step RK4. Along a
//! trajectory the trace w⁽ʳ⁾ = A·v satisfies d/dt ln √det g = w⁽ʳ⁾, which
//! [`logdet_rate_residual`] checks numerically. Separately, the scalar mode
//! equation dψ/dt + w⁽ʳ⁾ ψ = 0 evolves amplitudes along a precomputed
//! geodesic; [`evolve_mode_schroedinger`] drives the identical dynamics
//! through iħ dψ/dt = Ĥψ with Ĥ = −iħ w⁽ʳ⁾ in complex arithmetic.
//!
//! The mode equation is deliberately *not* substituted for the geodesic
//! system: −Wv equals −w⁽ʳ⁾v only when v is an eigenvector of W.

use crate::connection::christoffel_at;
use crate::error::{Error, Result};
use crate::geospin::geospin_matrix;
use crate::manifold::{inner_product, ChartPoint, IndexPosition, MetricField, TangentVector};
use nalgebra::DVector;
use num_complex::Complex64;

/// One phase point of the geodesic flow.
#[derive(Debug, Clone)]
pub struct GeodesicState {
    pub t: f64,
    pub x: ChartPoint,
    pub v: TangentVector,
}

impl GeodesicState {
    pub fn new(t: f64, x: Vec<f64>, v: Vec<f64>) -> Self {
        GeodesicState {
            t,
            x: ChartPoint(x),
            v: TangentVector::upper(v),
        }
    }
}

/// Right-hand side of the system: dx = v, dv = −W(x, v) v.
pub fn geodesic_rhs(
    field: &MetricField,
    state: &GeodesicState,
) -> Result<(DVector<f64>, DVector<f64>)> {
    if state.v.position != IndexPosition::Upper {
        return Err(Error::IndexPosition { expected: "upper" });
    }
    let ch = christoffel_at(field, &state.x)?;
    let w = geospin_matrix(&ch, &state.v)?;
    let dv = -w.apply(&state.v.components);
    Ok((state.v.components.clone(), dv))
}

/// ‖v‖ = √(g_ij v^i v^j) at the state's base point.
pub fn speed(field: &MetricField, state: &GeodesicState) -> Result<f64> {
    Ok(inner_product(field, &state.x, &state.v, &state.v)?.sqrt())
}

/// A time-sampled geodesic. Samples are strictly increasing in t, spaced by
/// `step` except possibly a shorter final step landing on the requested end.
#[derive(Debug, Clone)]
pub struct GeodesicTrajectory {
    pub field: MetricField,
    pub samples: Vec<GeodesicState>,
    pub step: f64,
}

impl GeodesicTrajectory {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn last(&self) -> &GeodesicState {
        self.samples.last().expect("trajectory holds the start state")
    }

    pub fn speed_at(&self, i: usize) -> Result<f64> {
        speed(&self.field, &self.samples[i])
    }

    /// w⁽ʳ⁾ = A(x)·v at sample `i`.
    pub fn w_r_at(&self, i: usize) -> Result<f64> {
        let s = &self.samples[i];
        let a = crate::connection::log_volume_gradient(&self.field, &s.x)?;
        Ok(a.dot(&s.v.components))
    }

    /// Largest |‖v(t)‖ − ‖v(0)‖| over the samples.
    pub fn max_speed_drift(&self) -> Result<f64> {
        let s0 = self.speed_at(0)?;
        let mut max = 0.0f64;
        for i in 1..self.len() {
            max = max.max((self.speed_at(i)? - s0).abs());
        }
        Ok(max)
    }

    /// w⁽ʳ⁾ at every sample, for feeding the mode equation.
    pub fn w_samples(&self) -> Result<Vec<f64>> {
        (0..self.len()).map(|i| self.w_r_at(i)).collect()
    }

    /// Errors unless samples sit on a uniform grid with an even interval
    /// count, as the mode integrator requires.
    pub fn check_mode_grid(&self) -> Result<()> {
        let len = self.len();
        if len < 3 || len.is_multiple_of(2) {
            return Err(Error::GridMisalignment { len });
        }
        let t0 = self.samples[0].t;
        for (i, s) in self.samples.iter().enumerate() {
            let expected = t0 + i as f64 * self.step;
            if (s.t - expected).abs() > 1e-9 * (1.0 + expected.abs()) {
                return Err(Error::GridMisalignment { len });
            }
        }
        Ok(())
    }
}

fn finite(v: &DVector<f64>) -> bool {
    v.iter().all(|x| x.is_finite())
}

/// Classical RK4 over the joint (x, v) state. Halts with a domain-exit error
/// (carrying the last valid state) if any stage leaves the chart.
pub fn integrate_geodesic(
    field: &MetricField,
    s0: &GeodesicState,
    t_end: f64,
    h: f64,
) -> Result<GeodesicTrajectory> {
    if !(h > 0.0) {
        return Err(Error::BadIntegration(format!("step h must be positive, got {h}")));
    }
    if !(t_end > s0.t) {
        return Err(Error::BadIntegration(format!(
            "t_end = {t_end} must exceed the start time {}",
            s0.t
        )));
    }
    if s0.v.position != IndexPosition::Upper {
        return Err(Error::IndexPosition { expected: "upper" });
    }
    field.check_domain(&s0.x)?;

    let time_scale = t_end.abs().max(1.0);
    let mut samples = vec![s0.clone()];
    let mut t = s0.t;
    let mut x = DVector::from_vec(s0.x.0.clone());
    let mut v = s0.v.components.clone();

    let eval = |x: &DVector<f64>, v: &DVector<f64>| -> Result<(DVector<f64>, DVector<f64>)> {
        let state = GeodesicState {
            t: 0.0,
            x: ChartPoint(x.iter().copied().collect()),
            v: TangentVector {
                components: v.clone(),
                position: IndexPosition::Upper,
            },
        };
        geodesic_rhs(field, &state)
    };

    loop {
        let remaining = t_end - t;
        if remaining <= 1e-12 * time_scale {
            break;
        }
        let dt = remaining.min(h);

        let exit = |err: Error, t: f64, x: &DVector<f64>, v: &DVector<f64>| Error::DomainExit {
            t,
            x: x.iter().copied().collect(),
            v: v.iter().copied().collect(),
            reason: err.to_string(),
        };

        let (k1x, k1v) = eval(&x, &v).map_err(|e| exit(e, t, &x, &v))?;
        let (k2x, k2v) = eval(&(&x + &k1x * (dt / 2.0)), &(&v + &k1v * (dt / 2.0)))
            .map_err(|e| exit(e, t, &x, &v))?;
        let (k3x, k3v) = eval(&(&x + &k2x * (dt / 2.0)), &(&v + &k2v * (dt / 2.0)))
            .map_err(|e| exit(e, t, &x, &v))?;
        let (k4x, k4v) = eval(&(&x + &k3x * dt), &(&v + &k3v * dt))
            .map_err(|e| exit(e, t, &x, &v))?;

        let x_next = &x + (k1x + k2x * 2.0 + k3x * 2.0 + k4x) * (dt / 6.0);
        let v_next = &v + (k1v + k2v * 2.0 + k3v * 2.0 + k4v) * (dt / 6.0);
        let mut t_next = t + dt;
        if (t_end - t_next).abs() <= 1e-12 * time_scale {
            t_next = t_end;
        }
        if !finite(&x_next) || !finite(&v_next) {
            return Err(Error::NonFiniteState { t: t_next });
        }
        // The endpoint itself must be a chart point.
        let p_next = ChartPoint(x_next.iter().copied().collect());
        field
            .check_domain(&p_next)
            .map_err(|e| exit(e, t, &x, &v))?;

        x = x_next;
        v = v_next;
        t = t_next;
        samples.push(GeodesicState {
            t,
            x: p_next,
            v: TangentVector {
                components: v.clone(),
                position: IndexPosition::Upper,
            },
        });
    }

    Ok(GeodesicTrajectory {
        field: field.clone(),
        samples,
        step: h,
    })
}

/// Max over interior samples of |d/dt ln √det g − w⁽ʳ⁾|, the numerical check
/// that the log-volume rate along the flow equals the geospin trace. The time
/// derivative is a three-point finite difference (exact central difference on
/// the uniform part of the grid).
pub fn logdet_rate_residual(traj: &GeodesicTrajectory) -> Result<f64> {
    let m = traj.len();
    if m < 3 {
        return Err(Error::TooFewSamples { need: 3, got: m });
    }
    let mut logs = Vec::with_capacity(m);
    for s in &traj.samples {
        logs.push(traj.field.metric_at(&s.x)?.log_sqrt_det);
    }
    let mut max = 0.0f64;
    for i in 1..m - 1 {
        let h1 = traj.samples[i].t - traj.samples[i - 1].t;
        let h2 = traj.samples[i + 1].t - traj.samples[i].t;
        let fd = -h2 / (h1 * (h1 + h2)) * logs[i - 1]
            + (h2 - h1) / (h1 * h2) * logs[i]
            + h1 / (h2 * (h1 + h2)) * logs[i + 1];
        let w_r = traj.w_r_at(i)?;
        max = max.max((fd - w_r).abs());
    }
    Ok(max)
}

/// Mode amplitudes at one time.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeState {
    pub t: f64,
    pub psi: DVector<f64>,
}

impl ModeState {
    pub fn new(t: f64, psi: Vec<f64>) -> Self {
        ModeState {
            t,
            psi: DVector::from_vec(psi),
        }
    }
}

fn check_mode_samples(w_half_samples: &[f64]) -> Result<usize> {
    let len = w_half_samples.len();
    if len < 3 || len.is_multiple_of(2) {
        return Err(Error::GridMisalignment { len });
    }
    Ok((len - 1) / 2)
}

/// Integrates dψ/dt = −w⁽ʳ⁾(t) ψ componentwise with RK4.
///
/// `w_half_samples` holds w⁽ʳ⁾ on the half-step grid t₀, t₀+h/2, t₀+h, …
/// (odd length), exactly the sample grid of a geodesic integrated with step
/// h/2, so `traj.w_samples()` feeds this directly with h = 2·traj.step.
pub fn evolve_mode(
    w_half_samples: &[f64],
    psi0: &ModeState,
    h: f64,
) -> Result<Vec<ModeState>> {
    let steps = check_mode_samples(w_half_samples)?;
    let mut out = Vec::with_capacity(steps + 1);
    out.push(psi0.clone());
    let mut psi = psi0.psi.clone();
    for i in 0..steps {
        let w0 = w_half_samples[2 * i];
        let wm = w_half_samples[2 * i + 1];
        let w1 = w_half_samples[2 * i + 2];
        let k1 = &psi * -w0;
        let k2 = (&psi + &k1 * (h / 2.0)) * -wm;
        let k3 = (&psi + &k2 * (h / 2.0)) * -wm;
        let k4 = (&psi + &k3 * h) * -w1;
        psi += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
        if !finite(&psi) {
            return Err(Error::NonFiniteState {
                t: psi0.t + (i + 1) as f64 * h,
            });
        }
        out.push(ModeState {
            t: psi0.t + (i + 1) as f64 * h,
            psi: psi.clone(),
        });
    }
    Ok(out)
}

/// Same dynamics written as iħ dψ/dt = Ĥψ with Ĥ = −iħ w⁽ʳ⁾, integrated in
/// complex arithmetic. For real starting amplitudes the imaginary parts stay
/// identically zero and the result matches [`evolve_mode`] to rounding.
pub fn evolve_mode_schroedinger(
    w_half_samples: &[f64],
    psi0: &ModeState,
    h: f64,
    hbar: f64,
) -> Result<Vec<ModeState>> {
    if !(hbar > 0.0) {
        return Err(Error::NonPositiveHbar(hbar));
    }
    let steps = check_mode_samples(w_half_samples)?;
    let minus_i_over_hbar = Complex64::new(0.0, -1.0 / hbar);
    // dψ/dt = (−i/ħ) Ĥ ψ with Ĥ(t) = −iħ w⁽ʳ⁾(t)
    let rhs = |w: f64, psi: &DVector<Complex64>| -> DVector<Complex64> {
        let hamiltonian = Complex64::new(0.0, -hbar * w);
        psi.map(|c| hamiltonian * c * minus_i_over_hbar)
    };

    let mut out = Vec::with_capacity(steps + 1);
    out.push(psi0.clone());
    let mut psi: DVector<Complex64> = psi0.psi.map(|x| Complex64::new(x, 0.0));
    let half = Complex64::new(h / 2.0, 0.0);
    let full = Complex64::new(h, 0.0);
    let sixth = Complex64::new(h / 6.0, 0.0);
    let two = Complex64::new(2.0, 0.0);
    for i in 0..steps {
        let w0 = w_half_samples[2 * i];
        let wm = w_half_samples[2 * i + 1];
        let w1 = w_half_samples[2 * i + 2];
        let k1 = rhs(w0, &psi);
        let k2 = rhs(wm, &(&psi + &k1 * half));
        let k3 = rhs(wm, &(&psi + &k2 * half));
        let k4 = rhs(w1, &(&psi + &k3 * full));
        psi += (k1 + k2 * two + k3 * two + k4) * sixth;
        let real = psi.map(|c| c.re);
        if !finite(&real) {
            return Err(Error::NonFiniteState {
                t: psi0.t + (i + 1) as f64 * h,
            });
        }
        out.push(ModeState {
            t: psi0.t + (i + 1) as f64 * h,
            psi: real,
        });
    }
    Ok(out)
}
