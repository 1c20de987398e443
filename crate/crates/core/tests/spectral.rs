use maupertuis::spectral::{solve_1d, solve_1d_hard_walls, Grid1d};
use maupertuis::{Error, Potential};

#[test]
fn oscillator_levels_and_nodes() {
    let spec = solve_1d(&Potential::harmonic(1, 1.0).unwrap(), &Grid1d::new(-10.0, 10.0, 2000).unwrap(), 20).unwrap();
    for (n, e) in spec.eigenvalues.iter().enumerate() {
        assert!((e - (n as f64 + 0.5)).abs() < 1e-6, "n={n}: {e}");
    }
    for n in 0..5 {
        assert_eq!(spec.sign_changes(n), n);
    }
    let dx = spec.grid.spacing();
    let norm: f64 = spec.eigenfunctions[3].iter().map(|p| p * p * dx).sum();
    assert!((norm - 1.0).abs() < 1e-12);
}

#[test]
fn box_levels() {
    let spec = solve_1d_hard_walls(&Potential::free(1), &Grid1d::new(0.0, 1.0, 1000).unwrap(), 5).unwrap();
    for (k, e) in spec.eigenvalues.iter().enumerate() {
        let want = 0.5 * (std::f64::consts::PI * (k + 1) as f64).powi(2);
        assert!((e - want).abs() < 1e-6 * want, "{e} vs {want}");
    }
}

#[test]
fn smeared_dos_counts_levels() {
    let spec = solve_1d(&Potential::harmonic(1, 1.0).unwrap(), &Grid1d::new(-12.0, 12.0, 2000).unwrap(), 30).unwrap();
    // unit spacing: smeared density of states is one per unit energy
    assert!((spec.dos_smeared(10.0, 2.0).unwrap() - 1.0).abs() < 1e-6);
    assert!(spec.is_resolved(10.0, 2.0));
    assert!(!spec.is_resolved(10.0, 0.5));
    assert!(matches!(spec.dos_smeared(29.0, 2.0), Err(Error::OutOfRange { .. })));
}

#[test]
fn small_box_is_refused() {
    let r = solve_1d(&Potential::harmonic(1, 1.0).unwrap(), &Grid1d::new(-2.0, 2.0, 400).unwrap(), 10);
    assert!(matches!(r, Err(Error::WallLeakage { .. })));
    assert!(solve_1d(&Potential::harmonic(1, 1.0).unwrap(), &Grid1d::new(-8.0, 8.0, 20).unwrap(), 11).is_err());
}
