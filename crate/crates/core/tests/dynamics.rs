use std::f64::consts::PI;
use std::sync::Arc;

use maupertuis::dynamics::{
    compare_geodesic_newton, eikonal, geodesic_boundary_value, geodesic_integrate, newton_integrate, unit_velocity,
};
use maupertuis::geometry::{ConformalFactor, HydrogenMomentumMetric, MaupertuisMetric, Side};
use maupertuis::Potential;
use nalgebra::DVector;

fn pt(v: &[f64]) -> DVector<f64> {
    DVector::from_column_slice(v)
}

#[test]
fn newton_matches_closed_form_oscillator() {
    let pot = Potential::harmonic(2, 1.0).unwrap();
    let (x0, v0) = (pt(&[1.0, 0.0]), pt(&[0.0, 0.5]));
    let tr = newton_integrate(&pot, &x0, &v0, PI, 1e-11).unwrap();
    let (x, v) = tr.state_at(PI / 3.0);
    let want = pt(&[(PI / 3.0).cos(), 0.5 * (PI / 3.0).sin()]);
    assert!((&x - want).norm() < 1e-8);
    assert!((v.norm_squared() + x.norm_squared() - 1.25).abs() < 1e-8);
    assert!(tr.max_drift() < 1e-8);
}

#[test]
fn geodesic_follows_newton_in_several_potentials() {
    let cases = [
        (Potential::harmonic(2, 1.0).unwrap(), pt(&[1.0, 0.3]), pt(&[0.2, 0.9])),
        (Potential::quartic(2, 0.5).unwrap(), pt(&[0.4, -0.2]), pt(&[0.7, 0.6])),
        (Potential::gaussian_well(3, 2.0, 1.0).unwrap(), pt(&[0.5, 0.0, 0.1]), pt(&[0.0, 0.8, 0.3])),
    ];
    for (pot, x0, v0) in cases {
        let e = 0.5 * v0.norm_squared() + pot.value(&x0).unwrap();
        let rep = compare_geodesic_newton(&pot, e, &x0, &v0, 1.0, 1e-10).unwrap();
        assert!(rep.max_deviation < 1e-6, "{:?}: {}", pot.family(), rep.max_deviation);
        assert!(rep.rate_mismatch < 1e-6);
        assert!(!rep.truncated);
    }
}

#[test]
fn geodesic_keeps_unit_speed() {
    let pot = Arc::new(Potential::harmonic(2, 1.0).unwrap());
    let metric = MaupertuisMetric::with_side(pot, 1.0, Side::Allowed);
    let x0 = pt(&[0.2, 0.1]);
    let u0 = unit_velocity(&metric, &x0, &pt(&[1.0, 1.0])).unwrap();
    let geo = geodesic_integrate(&metric, &x0, &u0, 0.8, 1e-11).unwrap();
    for s in &geo.samples {
        let o2 = metric.omega_squared(&s.position).unwrap();
        assert!((o2 * s.velocity.norm_squared() - 1.0).abs() < 1e-8);
    }
    // the eikonal of a unit-speed curve is its length
    assert!((eikonal(&geo, &metric).unwrap() - 0.8).abs() < 1e-8);
}

#[test]
fn boundary_value_reproduces_great_circle_distance() {
    let p_e = 1.0;
    let m = HydrogenMomentumMetric::new(3, p_e).unwrap();
    let r = 1.0 / (p_e * 2f64.sqrt());
    let a = pt(&[0.3, -0.2, 0.1]);
    let b = pt(&[0.35, -0.1, 0.05]);
    let chord = 2.0 * r * p_e * (&a - &b).norm() / ((p_e * p_e + a.norm_squared()) * (p_e * p_e + b.norm_squared())).sqrt();
    let dist = 2.0 * r * (chord / (2.0 * r)).asin();
    let bridge = geodesic_boundary_value(&m, &a, &b, 1e-12).unwrap();
    assert!((bridge.sigma - 0.5 * dist * dist).abs() < 1e-10 * dist * dist, "{} vs {}", bridge.sigma, 0.5 * dist * dist);
}
