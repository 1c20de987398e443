use std::sync::Arc;

use maupertuis::geometry::{
    christoffels, conformal_factor, curvature_tensors, ricci_scalar_analytic, ricci_scalar_conformal, ricci_scalar_fd,
    ricci_tensor_conformal, weyl_coupling, ConformalFactor, HydrogenMomentumMetric, MaupertuisMetric, RectGrid, Side,
};
use maupertuis::{Error, Potential};
use nalgebra::DVector;
use proptest::prelude::*;

fn pt(v: &[f64]) -> DVector<f64> {
    DVector::from_column_slice(v)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn christoffels_symmetric_in_lower_indices(dim in 2usize..=4, coords in prop::collection::vec(-1.5f64..1.5, 4)) {
        let pot = Potential::gaussian_well(dim, 1.0, 1.0).unwrap();
        let jet = conformal_factor(&pot, -2.0, &pt(&coords[..dim])).unwrap().jet;
        let g = christoffels(&jet);
        for m in 0..dim {
            for n in 0..dim {
                for l in 0..dim {
                    prop_assert_eq!(g.get(m, n, l), g.get(n, m, l));
                }
            }
        }
    }

    #[test]
    fn closed_form_scalar_agrees_with_conformal_formula(dim in 1usize..=5, coords in prop::collection::vec(-1.5f64..1.5, 5)) {
        let pot = Potential::quartic(dim, 0.8).unwrap();
        let x = pt(&coords[..dim]);
        let an = ricci_scalar_analytic(&pot, -1.0, &x, 0.0).unwrap().value;
        let conf = ricci_scalar_conformal(&conformal_factor(&pot, -1.0, &x).unwrap().jet);
        prop_assert!((an - conf).abs() <= 1e-10 * (1.0 + an.abs()));
    }

    #[test]
    fn ricci_tensor_traces_to_scalar(dim in 2usize..=4, coords in prop::collection::vec(-1.0f64..1.0, 4)) {
        let pot = Potential::harmonic(dim, 1.0).unwrap();
        let jet = conformal_factor(&pot, -1.0, &pt(&coords[..dim])).unwrap().jet;
        let trace = ricci_tensor_conformal(&jet).trace() / jet.omega2;
        let r = ricci_scalar_conformal(&jet);
        prop_assert!((trace - r).abs() <= 1e-10 * (1.0 + r.abs()));
    }
}

#[test]
fn three_dimensional_oscillator_reference_value() {
    let pot = Potential::harmonic(3, 1.0).unwrap();
    let r = ricci_scalar_analytic(&pot, -1.0, &pt(&[1.0, 0.0, 0.0]), 0.0).unwrap().value;
    assert!((r + 10.0 / 9.0).abs() < 1e-14, "{r}");
}

#[test]
fn closed_form_follows_tensor_for_any_gap() {
    // on the positive side the closed form must follow the tensor result for
    // gaps of either magnitude
    let pot = Potential::harmonic(2, 1.0).unwrap();
    for e in [-0.01, -1.0, -10.0] {
        let x = pt(&[0.4, 0.2]);
        let metric = MaupertuisMetric::new(pot.clone(), e);
        let an = ricci_scalar_analytic(&pot, e, &x, 0.0).unwrap().value;
        let fd = ricci_scalar_fd(&metric, &x, 1e-4).unwrap();
        assert!((an - fd).abs() < 1e-4 * (1.0 + an.abs()), "E={e}: {an} vs {fd}");
    }
}

#[test]
fn riemann_antisymmetries() {
    let metric = MaupertuisMetric::new(Potential::gaussian_well(3, 1.0, 0.9).unwrap(), -2.0);
    let t = curvature_tensors(&metric, &pt(&[0.3, -0.2, 0.4]), 1e-4).unwrap();
    let scale = t.riemann.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    for a in 0..3 {
        for b in 0..3 {
            for c in 0..3 {
                for d in 0..3 {
                    assert!((t.riemann(a, b, c, d) + t.riemann(b, a, c, d)).abs() < 1e-6 * scale);
                    assert!((t.riemann(a, b, c, d) + t.riemann(a, b, d, c)).abs() < 1e-6 * scale);
                    assert!((t.riemann(a, b, c, d) - t.riemann(c, d, a, b)).abs() < 1e-5 * scale);
                }
            }
        }
    }
}

#[test]
fn hydrogen_sphere_constant_curvature() {
    for dim in 2..=5 {
        let m = HydrogenMomentumMetric::new(dim, 0.7).unwrap();
        let r = m.analytic_ricci_scalar();
        let d = dim as f64;
        assert!((r - 2.0 * d * (d - 1.0) * 0.49).abs() < 1e-13);
        assert!((m.sectional_curvature() - 0.98).abs() < 1e-14);
        let fd = ricci_scalar_fd(&m, &pt(&vec![0.2; dim]), 1e-4).unwrap();
        assert!((fd - r).abs() / r < 1e-6);
    }
}

#[test]
fn forbidden_region_is_an_error() {
    let pot = Potential::harmonic(2, 1.0).unwrap();
    match ricci_scalar_analytic(&pot, 1.0, &pt(&[0.1, 0.1]), 0.0) {
        Err(Error::ForbiddenRegion { coordinate, .. }) => assert_eq!(coordinate, vec![0.1, 0.1]),
        other => panic!("{other:?}"),
    }
    let m = MaupertuisMetric::with_side(Arc::new(pot), 1.0, Side::Allowed);
    assert!(m.jet(&pt(&[0.1, 0.1])).is_ok());
    assert!(m.jet(&pt(&[3.0, 0.0])).is_err());
}

#[test]
fn near_turning_flag() {
    let pot = Potential::harmonic(1, 1.0).unwrap();
    let s = ricci_scalar_analytic(&pot, 0.0, &pt(&[0.1]), 0.01).unwrap();
    assert!(s.near_turning);
    assert!(!ricci_scalar_analytic(&pot, 0.0, &pt(&[1.0]), 0.01).unwrap().near_turning);
}

#[test]
fn conformal_coupling() {
    assert_eq!(weyl_coupling(3), Some(0.125));
    assert_eq!(weyl_coupling(4), Some(1.0 / 6.0));
    assert_eq!(weyl_coupling(1), None);
    assert!(RectGrid::cube(2, 0.0, 1.0, 1).is_err());
}
