use maupertuis::potentials::TabulatedGrid;
use maupertuis::{Family, Potential};
use nalgebra::DVector;
use proptest::prelude::*;

fn families(dim: usize) -> Vec<Potential> {
    vec![
        Potential::harmonic(dim, 1.3).unwrap(),
        Potential::quartic(dim, 0.7).unwrap(),
        Potential::gaussian_well(dim, 2.0, 0.8).unwrap(),
        Potential::coulomb(dim, 1.0, 0.3).unwrap(),
    ]
}

fn fd_gradient(pot: &Potential, x: &DVector<f64>, h: f64) -> DVector<f64> {
    DVector::from_fn(x.len(), |i, _| {
        let mut xp = x.clone();
        let mut xm = x.clone();
        xp[i] += h;
        xm[i] -= h;
        (pot.value(&xp).unwrap() - pot.value(&xm).unwrap()) / (2.0 * h)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn gradient_matches_central_differences(dim in 1usize..=4, coords in prop::collection::vec(-2.0f64..2.0, 4)) {
        let x = DVector::from_column_slice(&coords[..dim]);
        for pot in families(dim) {
            let e = pot.evaluate(&x).unwrap();
            let fd = fd_gradient(&pot, &x, 1e-5);
            prop_assert!((&e.grad - &fd).norm() <= 1e-6 * (1.0 + e.grad.norm()), "{:?}", pot.family());
        }
    }

    #[test]
    fn hessian_is_symmetric_and_matches_gradient_differences(dim in 1usize..=4, coords in prop::collection::vec(-2.0f64..2.0, 4)) {
        let x = DVector::from_column_slice(&coords[..dim]);
        for pot in families(dim) {
            let e = pot.evaluate(&x).unwrap();
            prop_assert!((&e.hess - e.hess.transpose()).norm() <= 1e-12 * (1.0 + e.hess.norm()));
            let h = 1e-5;
            for j in 0..dim {
                let mut xp = x.clone();
                let mut xm = x.clone();
                xp[j] += h;
                xm[j] -= h;
                let col = (pot.evaluate(&xp).unwrap().grad - pot.evaluate(&xm).unwrap().grad) / (2.0 * h);
                prop_assert!((e.hess.column(j) - col).norm() <= 1e-5 * (1.0 + e.hess.norm()));
            }
        }
    }

    #[test]
    fn tabulated_grid_reproduces_cubics_exactly_at_nodes(a in -1.0f64..1.0, b in -1.0f64..1.0) {
        let axis: Vec<f64> = (0..9).map(|i| -2.0 + 0.5 * i as f64).collect();
        let values: Vec<f64> = axis.iter().map(|x| a * x * x + b * x).collect();
        let grid = TabulatedGrid::new(vec![axis.clone()], values.clone()).unwrap();
        let pot = Potential::new(1, Family::UserTabulated(grid)).unwrap();
        for (x, v) in axis.iter().zip(&values) {
            prop_assert!((pot.value(&DVector::from_element(1, *x)).unwrap() - v).abs() < 1e-12);
        }
    }
}

#[test]
fn harmonic_closed_form() {
    let pot = Potential::with_constants(2, 2.0, 1.0, Family::Harmonic { omega: 3.0 }).unwrap();
    let x = DVector::from_column_slice(&[0.5, -1.0]);
    let e = pot.evaluate(&x).unwrap();
    assert!((e.value - 0.5 * 2.0 * 9.0 * 1.25).abs() < 1e-14);
    assert!((e.laplacian() - 2.0 * 2.0 * 9.0).abs() < 1e-12);
}

#[test]
fn invalid_parameters_are_rejected() {
    assert!(Potential::harmonic(2, -1.0).is_err());
    assert!(Potential::harmonic(0, 1.0).is_err());
    assert!(Potential::with_constants(1, 0.0, 1.0, Family::Free).is_err());
    assert!(Potential::free(2).value(&DVector::zeros(3)).is_err());
}

#[test]
fn minimum_values() {
    assert_eq!(Potential::gaussian_well(2, 2.0, 1.0).unwrap().minimum(), -2.0);
    assert!((Potential::coulomb(3, 1.0, 0.5).unwrap().minimum() + 2.0).abs() < 1e-15);
    assert_eq!(Potential::constant(2, 0.7).unwrap().minimum(), 0.7);
}
