use std::f64::consts::PI;

use maupertuis::density::{
    allowed_intervals_1d, density_sweep, hydrogen_momentum_case, integrated_dos, semiclassical_density,
    smeared_semiclassical_density, write_density_csv, DosQuadrature, Regime,
};
use maupertuis::special::gamma;
use maupertuis::{Error, Family, Potential};
use nalgebra::DVector;
use proptest::prelude::*;

fn free_gas(dim: usize, m: f64, hbar: f64, e: f64) -> f64 {
    let h = dim as f64 / 2.0;
    (2.0 * m).powf(h) * e.powf(h - 1.0) / (gamma(h).unwrap() * (4.0 * PI).powf(h) * hbar.powi(dim as i32))
}

proptest! {
    #[test]
    fn free_gas_in_any_dimension(dim in 1usize..=6, m in 0.2f64..3.0, hbar in 0.3f64..2.0, e in 0.1f64..10.0) {
        let pot = Potential::with_constants(dim, m, hbar, Family::Free).unwrap();
        let rho = semiclassical_density(&pot, e, &DVector::zeros(dim), 2, None).unwrap();
        let want = free_gas(dim, m, hbar, e);
        prop_assert!((rho.total - want).abs() <= 1e-12 * want);
        prop_assert_eq!(rho.term(1), 0.0);
        prop_assert_eq!(rho.term(2), 0.0);
    }

    #[test]
    fn leading_term_is_the_local_free_gas(dim in 1usize..=4, x in -1.0f64..1.0, e in 1.0f64..5.0) {
        let pot = Potential::gaussian_well(dim, 1.0, 1.0).unwrap();
        let p = DVector::from_element(dim, x / dim as f64);
        let v = pot.value(&p).unwrap();
        let rho = semiclassical_density(&pot, e, &p, 0, None).unwrap();
        let want = free_gas(dim, 1.0, 1.0, e - v);
        prop_assert!((rho.total - want).abs() <= 1e-12 * want);
    }
}

#[test]
fn sweep_marks_forbidden_and_near_turning_points() {
    let pot = Potential::harmonic(1, 1.0).unwrap();
    let pts: Vec<DVector<f64>> = [0.0, 0.99, 1.5].iter().map(|x| DVector::from_element(1, *x)).collect();
    let rows = density_sweep(&pot, 0.5, &pts, 2, Some(0.01)).unwrap();
    assert_eq!(rows[0].regime, Regime::Allowed);
    assert_eq!(rows[1].regime, Regime::NearTurning);
    assert_eq!(rows[2].regime, Regime::Forbidden);
    assert_eq!(rows[2].total, 0.0);

    let mut buf = Vec::new();
    write_density_csv(&rows, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "x0,E,term0,term1,term2,total,regime");
    assert!(lines.next().unwrap().starts_with("0.0000000000000000e0,5.0000000000000000e-1,"));
    assert!(text.trim_end().ends_with("forbidden"));
}

#[test]
fn order_above_two_is_rejected() {
    let pot = Potential::free(3);
    assert!(matches!(semiclassical_density(&pot, 1.0, &DVector::zeros(3), 3, None), Err(Error::InvalidParameter(_))));
}

#[test]
fn smearing_tends_to_the_bare_density() {
    let pot = Potential::harmonic(1, 1.0).unwrap();
    let x = DVector::from_element(1, 0.5);
    let bare = semiclassical_density(&pot, 10.0, &x, 2, None).unwrap();
    let smeared = smeared_semiclassical_density(&pot, 10.0, &x, 2, 0.05).unwrap();
    for i in 0..3 {
        assert!((smeared.term(i) - bare.term(i)).abs() < 1e-3 * bare.term(0), "term {i}");
    }
}

#[test]
fn two_dimensional_oscillator_density_of_states() {
    // N'(E) = E / omega^2 at leading order in two dimensions
    let pot = Potential::harmonic(2, 1.0).unwrap();
    let quad = DosQuadrature { domain: Some((vec![-4.0, -4.0], vec![4.0, 4.0])), panels: 8, ..DosQuadrature::default() };
    let n = integrated_dos(&pot, 5.0, 0, &quad).unwrap();
    assert!((n.total - 5.0).abs() < 1e-2, "{}", n.total);
    assert!(integrated_dos(&pot, 5.0, 0, &DosQuadrature::default()).is_err());
}

#[test]
fn turning_points_of_a_double_well() {
    let pot = Potential::quartic(1, 1.0).unwrap();
    let iv = allowed_intervals_1d(&pot, 1.0, (-3.0, 3.0), 600).unwrap();
    assert_eq!(iv.len(), 1);
    assert!((iv[0].0 + 1.0).abs() < 1e-10 && (iv[0].1 - 1.0).abs() < 1e-10);
}

#[test]
fn hydrogen_statement_in_three_dimensions() {
    let rep = hydrogen_momentum_case(3, 1.0, 5, 3, 1e-4).unwrap();
    assert_eq!(rep.weyl_statement, "(D-2)R/8(D-1) = R/16");
    assert_eq!(rep.ricci_scalar, 12.0);
    assert!((rep.subtraction_actual - 1.0).abs() < 1e-15);
    assert!((rep.subtraction_weyl - 0.75).abs() < 1e-15);
    assert!(rep.max_relative_fd_error < 1e-5);
}
