//! Geodesic flow, mode evolution, and Ricci flow against closed forms.

mod common;

use approx::assert_relative_eq;
use geospin::manifold::zoo::{builtin_manifold, verification_zoo};
use geospin::{
    corollary_check, evolve_mode, geodesic_rhs, integrate_geodesic, logdet_rate_residual,
    ricci_flow_integrate, speed, ChartPoint, FlowMode, GeodesicState, ModeState,
};
use std::collections::BTreeMap;

#[test]
fn half_plane_geodesic_matches_closed_form() {
    let f = builtin_manifold("poincare-half-plane", &BTreeMap::new()).unwrap();
    let start = GeodesicState::new(0.0, vec![0.0, 1.0], vec![1.0, 0.0]);
    let traj = integrate_geodesic(&f, &start, 2.0, 1e-3).unwrap();
    let mut worst = 0.0f64;
    for s in &traj.samples {
        let (x_exact, v_exact) = common::half_plane_exact(s.t);
        worst = worst
            .max((s.x.0[0] - x_exact[0]).abs())
            .max((s.x.0[1] - x_exact[1]).abs())
            .max((s.v.components[0] - v_exact[0]).abs())
            .max((s.v.components[1] - v_exact[1]).abs());
    }
    assert!(worst <= 1e-10, "closed-form deviation {worst}");
}

#[test]
fn sphere_equator_advances_phi_by_pi() {
    let f = builtin_manifold("sphere", &BTreeMap::new()).unwrap();
    let pi = std::f64::consts::PI;
    let start = GeodesicState::new(0.0, vec![pi / 2.0, 0.0], vec![0.0, 1.0]);
    let traj = integrate_geodesic(&f, &start, pi, 1e-3).unwrap();
    let end = traj.last();
    assert_relative_eq!(end.x.0[0], pi / 2.0, epsilon = 1e-8);
    assert_relative_eq!(end.x.0[1], pi, epsilon = 1e-8);
}

#[test]
fn rhs_quadratic_term_matches_direct_contraction() {
    let f = builtin_manifold("poincare-disk", &BTreeMap::new()).unwrap();
    let s = GeodesicState::new(0.0, vec![0.2, -0.3], vec![0.4, 0.7]);
    let (_, dv) = geodesic_rhs(&f, &s).unwrap();
    let ch = geospin::christoffel_at(&f, &s.x).unwrap();
    for i in 0..2 {
        let mut direct = 0.0;
        for j in 0..2 {
            for k in 0..2 {
                direct -= ch.gamma.get(i, j, k) * s.v.components[j] * s.v.components[k];
            }
        }
        assert!((dv[i] - direct).abs() <= 1e-12);
    }
}

#[test]
fn speed_examples_across_charts() {
    let hp = builtin_manifold("poincare-half-plane", &BTreeMap::new()).unwrap();
    let s = GeodesicState::new(0.0, vec![0.0, 2.0], vec![2.0, 0.0]);
    assert_relative_eq!(speed(&hp, &s).unwrap(), 1.0, max_relative = 1e-15);

    let sphere = builtin_manifold("sphere", &BTreeMap::new()).unwrap();
    let s = GeodesicState::new(0.0, vec![std::f64::consts::FRAC_PI_4, 0.0], vec![0.0, 1.0]);
    assert_relative_eq!(
        speed(&sphere, &s).unwrap(),
        (0.5f64).sqrt(),
        max_relative = 1e-15
    );
}

#[test]
fn logdet_rate_residual_small_on_equator() {
    // w⁽ʳ⁾ = cot(θ) v^θ vanishes on the equator and so does d/dt ln √g.
    let f = builtin_manifold("sphere", &BTreeMap::new()).unwrap();
    let start = GeodesicState::new(0.0, vec![std::f64::consts::FRAC_PI_2, 0.0], vec![0.0, 1.0]);
    let traj = integrate_geodesic(&f, &start, 2.0, 1e-3).unwrap();
    assert!(logdet_rate_residual(&traj).unwrap() <= 1e-8);
}

#[test]
fn mode_factor_equals_volume_ratio_across_zoo() {
    // ψ(t)/ψ(0) = √(det g(x₀)/det g(x(t))) along any geodesic.
    for inst in verification_zoo() {
        let (x0, v0) = inst.geodesic_start.clone();
        let start = GeodesicState::new(0.0, x0, v0);
        let traj = integrate_geodesic(&inst.field, &start, 1.0, 1e-3).unwrap();
        traj.check_mode_grid().unwrap();
        let w = traj.w_samples().unwrap();
        let states = evolve_mode(&w, &ModeState::new(0.0, vec![1.0]), 2.0 * traj.step).unwrap();
        let l0 = inst.field.metric_at(&traj.samples[0].x).unwrap().log_sqrt_det;
        for s in &states {
            let idx = (s.t / traj.step).round() as usize;
            let l = inst.field.metric_at(&traj.samples[idx].x).unwrap().log_sqrt_det;
            let product = s.psi[0] * (l - l0).exp();
            assert!(
                (product - 1.0).abs() <= 1e-6,
                "{} at t = {}: {product}",
                inst.label,
                s.t
            );
        }
    }
}

#[test]
fn flow_matches_analytic_solution_between_modes() {
    // Homothetic (frozen constant) and pointwise (re-measured) runs agree.
    let f = builtin_manifold("sphere", &BTreeMap::new()).unwrap();
    let p = ChartPoint(vec![std::f64::consts::FRAC_PI_2, 0.0]);
    let a = ricci_flow_integrate(&f, &p, 0.4, 1e-3, FlowMode::Homothetic).unwrap();
    let b = ricci_flow_integrate(&f, &p, 0.4, 1e-3, FlowMode::Pointwise).unwrap();
    assert_eq!(a.samples.len(), b.samples.len());
    for (x, y) in a.samples.iter().zip(&b.samples) {
        assert_relative_eq!(x.c, y.c, epsilon = 1e-10);
        assert_relative_eq!(x.c, 1.0 - 2.0 * x.t, epsilon = 1e-10);
    }
}

#[test]
fn expanding_flow_has_no_extinction_and_negative_curvature() {
    let f = builtin_manifold("warped-product", &BTreeMap::new()).unwrap();
    let p = ChartPoint(vec![0.0, 0.0]);
    let traj = ricci_flow_integrate(&f, &p, 1.0, 1e-3, FlowMode::Pointwise).unwrap();
    assert!(traj.extinction.is_none());
    let last = traj.samples.last().unwrap();
    assert_relative_eq!(last.c, 3.0, max_relative = 1e-9);
    assert_relative_eq!(last.scalar, -2.0 / 3.0, max_relative = 1e-8);
    let report = corollary_check(&traj, 2.5).unwrap();
    assert!(report.pass);
}

#[test]
fn geodesic_and_flow_w_r_share_the_trace_reduction() {
    // A·v (geodesic context) and ½ tr(g⁻¹ ġ) with ġ = Σ_j v^j ∂_j g (flow
    // context) are the same number: both reduce to ½ tr(g⁻¹ ∂_v g).
    use geospin::{log_volume_gradient, w_r_from_metric_rate};
    use nalgebra::{DMatrix, DVector};
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
    for inst in verification_zoo() {
        let n = inst.field.dim();
        for _ in 0..20 {
            let p = inst.sample_point(&mut rng);
            let v = inst.sample_velocity(&mut rng);
            let a = log_volume_gradient(&inst.field, &p).unwrap();
            let via_geodesic = a.dot(&DVector::from_vec(v.clone()));

            let g = inst.field.metric_at(&p).unwrap().g;
            let dg = inst.field.partials_at(&p).unwrap();
            let g_dot = DMatrix::from_fn(n, n, |i, j| {
                (0..n).map(|k| v[k] * dg.get(k, i, j)).sum::<f64>()
            });
            let via_flow = w_r_from_metric_rate(&g, &g_dot).unwrap();
            assert!(
                (via_geodesic - via_flow).abs() <= 1e-9 * (1.0 + via_flow.abs()),
                "{}: {via_geodesic} vs {via_flow}",
                inst.label
            );
        }
    }
}

#[test]
fn torus_flow_is_static() {
    let f = builtin_manifold("flat-torus", &BTreeMap::new()).unwrap();
    let p = ChartPoint(vec![std::f64::consts::PI, std::f64::consts::PI]);
    let traj = ricci_flow_integrate(&f, &p, 0.3, 1e-2, FlowMode::Pointwise).unwrap();
    for s in &traj.samples {
        assert_eq!(s.scalar, 0.0);
        assert_relative_eq!(s.c, 1.0, epsilon = 1e-13);
    }
}
