//! Conformal covariance of the Weyl-invariant Laplacian, and a Schrödinger
//! solution carried over to the curved problem.
//!
//! cargo run --release --example yamabe

use maupertuis::geometry::{
    schrodinger_solution_transfer, weyl_coupling, yamabe_covariance_residual, MaupertuisMetric, RectGrid,
};
use maupertuis::Potential;
use nalgebra::DVector;

fn main() -> maupertuis::Result<()> {
    let metric = MaupertuisMetric::new(Potential::harmonic(3, 1.0)?, -1.0);
    let x = DVector::from_column_slice(&[0.4, -0.3, 0.6]);
    println!("xi_c(D=3) = {:?}", weyl_coupling(3));
    println!("{:>8} {:>14}", "h", "residual");
    for h in [4e-3, 2e-3, 1e-3] {
        let r = yamabe_covariance_residual(&metric, |y: &DVector<f64>| (-y.norm_squared()).exp(), &x, h)?;
        println!("{h:>8.0e} {r:>14.6e}");
    }

    // oscillator ground state in the forbidden zone |x| > sqrt(2)
    let pot = Potential::harmonic(2, 1.0)?;
    println!("\n{:>6} {:>14} {:>14} {:>8}", "n", "flat", "curved", "masked");
    for n in [21, 41, 81] {
        let grid = RectGrid::cube(2, 1.6, 2.4, n)?;
        let psi = grid.sample(|y| (-0.5 * y.norm_squared()).exp());
        let rep = schrodinger_solution_transfer(&pot, 1.0, &grid, &psi, 1e-2)?;
        println!("{n:>6} {:>14.6e} {:>14.6e} {:>8}", rep.max_flat, rep.max_curved, rep.masked_turning);
    }
    Ok(())
}
