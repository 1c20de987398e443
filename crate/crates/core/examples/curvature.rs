//! Ricci scalar of the Maupertuis metric, from the closed form and from a
//! finite-difference Riemann tensor.
//!
//! cargo run --example curvature

use maupertuis::geometry::{
    conformal_factor, ricci_scalar_analytic, ricci_scalar_fd, weyl_curvature_term, MaupertuisMetric,
};
use maupertuis::Potential;
use nalgebra::DVector;

fn main() -> maupertuis::Result<()> {
    let energy = -1.0;
    for pot in [Potential::harmonic(3, 1.0)?, Potential::quartic(3, 1.0)?, Potential::gaussian_well(3, 1.0, 1.0)?] {
        let e = pot.minimum() + energy;
        let metric = MaupertuisMetric::new(pot.clone(), e);
        println!("{:?}  E = {e}", pot.family());
        println!("{:>24} {:>22} {:>22} {:>14}", "x", "R closed form", "R finite diff", "weyl term");
        for x in [[1.0, 0.0, 0.0], [0.3, -0.7, 0.5], [0.0, 0.0, 0.0]] {
            let x = DVector::from_column_slice(&x);
            let an = ricci_scalar_analytic(&pot, e, &x, 0.0)?.value;
            let fd = ricci_scalar_fd(&metric, &x, 1e-4)?;
            let weyl = weyl_curvature_term(&conformal_factor(&pot, e, &x)?.jet);
            println!("{:>24} {an:>22.15e} {fd:>22.15e} {weyl:>14.6e}", format!("{:?}", x.as_slice()));
        }
        println!();
    }

    // a conformally flat line has no intrinsic curvature
    let line = Potential::quartic(1, 0.7)?;
    let r = ricci_scalar_analytic(&line, -1.0, &DVector::from_element(1, 0.8), 0.0)?;
    println!("D = 1 quartic: R = {}", r.value);
    Ok(())
}
