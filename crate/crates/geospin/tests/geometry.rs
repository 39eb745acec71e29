//! Cross-module geometry checks: pinned connection/curvature values on the
//! classic charts and randomized invariants over the zoo.

mod common;

use approx::assert_relative_eq;
use geospin::manifold::zoo::{builtin_manifold, verification_zoo};
use geospin::{
    christoffel_at, connection_one_form_coeffs, curvature_at, geospin_lowered, geospin_matrix,
    inner_product, log_volume_gradient, lower_index, raise_index, ChartPoint, TangentVector,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

#[test]
fn half_plane_christoffel_frozen_values() {
    // At (x, y): Γ^x_xy = Γ^x_yx = −1/y, Γ^y_xx = 1/y, Γ^y_yy = −1/y, rest 0.
    let f = builtin_manifold("poincare-half-plane", &BTreeMap::new()).unwrap();
    let fd = common::christoffel_fd(&f, &ChartPoint(vec![0.4, 2.0]));
    let sym = christoffel_at(&f, &ChartPoint(vec![0.4, 2.0])).unwrap().gamma;
    for k in 0..2 {
        for i in 0..2 {
            for j in 0..2 {
                assert_relative_eq!(
                    sym.get(k, i, j),
                    fd.get(k, i, j),
                    epsilon = 1e-8,
                    max_relative = 1e-8
                );
            }
        }
    }
    assert_relative_eq!(sym.get(0, 0, 1), -0.5);
    assert_relative_eq!(sym.get(0, 1, 0), -0.5);
    assert_relative_eq!(sym.get(1, 0, 0), 0.5);
    assert_relative_eq!(sym.get(1, 1, 1), -0.5);
}

#[test]
fn sphere_christoffel_frozen_values() {
    let f = builtin_manifold("sphere", &BTreeMap::new()).unwrap();
    let theta = std::f64::consts::FRAC_PI_4;
    let p = ChartPoint(vec![theta, 0.7]);
    let sym = christoffel_at(&f, &p).unwrap().gamma;
    let fd = common::christoffel_fd(&f, &p);
    assert_relative_eq!(sym.get(0, 1, 1), -0.5, max_relative = 1e-12);
    assert_relative_eq!(sym.get(1, 0, 1), 1.0, max_relative = 1e-12);
    assert_relative_eq!(sym.get(0, 1, 1), fd.get(0, 1, 1), epsilon = 1e-9);
    assert_relative_eq!(sym.get(1, 0, 1), fd.get(1, 0, 1), epsilon = 1e-9);
}

#[test]
fn log_volume_gradient_agrees_with_christoffel_trace_across_zoo() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for inst in verification_zoo() {
        for _ in 0..100 {
            let p = inst.sample_point(&mut rng);
            let a = log_volume_gradient(&inst.field, &p).unwrap();
            let trace = christoffel_at(&inst.field, &p).unwrap().gamma_trace();
            for j in 0..inst.field.dim() {
                assert!(
                    (a[j] - trace[j]).abs() <= 1e-9 * (1.0 + a[j].abs()),
                    "{} at {:?}: A = {}, trace = {}",
                    inst.label,
                    p.0,
                    a[j],
                    trace[j]
                );
            }
        }
    }
}

#[test]
fn torsion_free_and_metric_compatible_across_zoo() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for inst in verification_zoo() {
        let n = inst.field.dim();
        for _ in 0..100 {
            let p = inst.sample_point(&mut rng);
            let ch = christoffel_at(&inst.field, &p).unwrap();
            let m = inst.field.metric_at(&p).unwrap();
            let dg = inst.field.partials_at(&p).unwrap();
            for k in 0..n {
                for i in 0..n {
                    for j in 0..n {
                        assert_eq!(ch.gamma.get(k, i, j), ch.gamma.get(k, j, i));
                        let mut resid = dg.get(k, i, j);
                        for l in 0..n {
                            resid -= ch.gamma.get(l, k, i) * m.g[(l, j)]
                                + ch.gamma.get(l, k, j) * m.g[(i, l)];
                        }
                        assert!(resid.abs() <= 1e-9, "{}: ∇g residual {resid}", inst.label);
                    }
                }
            }
        }
    }
}

#[test]
fn raise_lower_round_trip_across_zoo() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for inst in verification_zoo() {
        for _ in 0..100 {
            let p = inst.sample_point(&mut rng);
            let v = TangentVector::upper(inst.sample_velocity(&mut rng));
            let low = lower_index(&inst.field, &p, &v).unwrap();
            let back = raise_index(&inst.field, &p, &low).unwrap();
            let err = (&back.components - &v.components).amax();
            assert!(err <= 1e-12 * (1.0 + v.components.amax()), "{}: {err}", inst.label);

            // positive definiteness through the inner product
            let norm2 = inner_product(&inst.field, &p, &v, &v).unwrap();
            assert!(norm2 > 0.0);
        }
    }
}

#[test]
fn one_form_coefficients_equal_geospin_across_zoo() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for inst in verification_zoo() {
        for _ in 0..20 {
            let p = inst.sample_point(&mut rng);
            let v = TangentVector::upper(inst.sample_velocity(&mut rng));
            let ch = christoffel_at(&inst.field, &p).unwrap();
            let w = geospin_matrix(&ch, &v).unwrap();
            let omega = connection_one_form_coeffs(&ch, &v).unwrap();
            // definitional identity, bitwise
            assert_eq!(&omega, w.matrix(), "{}", inst.label);
        }
    }
}

#[test]
fn lowered_geospin_symmetry_across_zoo() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for inst in verification_zoo() {
        for _ in 0..100 {
            let p = inst.sample_point(&mut rng);
            let v = TangentVector::upper(inst.sample_velocity(&mut rng));
            let ch = christoffel_at(&inst.field, &p).unwrap();
            let v_low = lower_index(&inst.field, &p, &v).unwrap();
            let low = geospin_lowered(&ch, &v_low).unwrap();
            assert!((&low.w_low - low.w_low.transpose()).amax() <= 1e-12);
        }
    }
}

#[test]
fn ricci_symmetry_and_riemann_antisymmetry_across_zoo() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for inst in verification_zoo() {
        let n = inst.field.dim();
        for _ in 0..20 {
            let p = inst.sample_point(&mut rng);
            let b = curvature_at(&inst.field, &p).unwrap();
            assert!(
                (&b.ricci - b.ricci.transpose()).amax() <= 1e-9,
                "{}: Ricci asymmetry",
                inst.label
            );
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        for l in 0..n {
                            let s = b.riemann.get(i, j, k, l) + b.riemann.get(i, j, l, k);
                            assert!(s.abs() <= 1e-9, "{}: antisymmetry {s}", inst.label);
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn symbolic_curvature_matches_fd_oracle_across_zoo() {
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    for inst in verification_zoo() {
        for _ in 0..20 {
            let p = inst.sample_point(&mut rng);
            let sym = curvature_at(&inst.field, &p).unwrap().scalar;
            let num = common::scalar_curvature_fd(&inst.field, &p);
            assert!(
                (sym - num).abs() <= 1e-5,
                "{} at {:?}: symbolic {sym} vs fd {num}",
                inst.label,
                p.0
            );
        }
    }
}

#[test]
fn disk_and_half_plane_share_curvature() {
    // Both model ℍ²; R must be −2 on each, at unrelated points.
    let disk = builtin_manifold("poincare-disk", &BTreeMap::new()).unwrap();
    let hp = builtin_manifold("poincare-half-plane", &BTreeMap::new()).unwrap();
    for &(x, y) in &[(0.0, 0.0), (0.3, -0.2), (-0.5, 0.1)] {
        let b = curvature_at(&disk, &ChartPoint(vec![x, y])).unwrap();
        assert_relative_eq!(b.scalar, -2.0, epsilon = 1e-9);
    }
    for &(x, y) in &[(0.0, 1.0), (2.0, 0.5), (-1.0, 3.0)] {
        let b = curvature_at(&hp, &ChartPoint(vec![x, y])).unwrap();
        assert_relative_eq!(b.scalar, -2.0, epsilon = 1e-9);
    }
}

#[test]
fn sphere_radius_scales_curvature() {
    // R = 2/r² for the round sphere of radius r.
    for r in [0.5f64, 1.0, 3.0] {
        let mut params = BTreeMap::new();
        params.insert("radius".to_string(), r.to_string());
        let f = builtin_manifold("sphere", &params).unwrap();
        let b = curvature_at(&f, &ChartPoint(vec![1.1, 0.3])).unwrap();
        assert_relative_eq!(b.scalar, 2.0 / (r * r), max_relative = 1e-9);
    }
}
