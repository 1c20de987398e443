//! Exact 1D spectrum on a grid and the smeared local density it implies,
//! next to the semiclassical expansion.
//!
//! cargo run --release --example spectral_oracle

use maupertuis::density::smeared_semiclassical_density;
use maupertuis::spectral::{solve_1d, Grid1d};
use maupertuis::Potential;
use nalgebra::DVector;

fn main() -> maupertuis::Result<()> {
    let pot = Potential::harmonic(1, 1.0)?;
    let spec = solve_1d(&pot, &Grid1d::new(-12.0, 12.0, 4000)?, 36)?;
    println!("{:>4} {:>22} {:>12}", "n", "E_n", "refinement");
    for n in [0, 1, 2, 5, 10, 20, 35] {
        println!("{n:>4} {:>22.15} {:>12.3e}", spec.eigenvalues[n], spec.convergence[n]);
    }

    let (e, eta) = (20.5, 2.0);
    println!("\nE = {e}, eta = {eta}, usable up to {:.3}", spec.max_usable_energy(eta));
    println!("{:>6} {:>14} {:>14} {:>14}", "x", "exact", "order 0", "order 2");
    for i in 0..=8 {
        let x = -4.0 + i as f64;
        let exact = spec.local_density_smeared(x, e, eta)?;
        let sc = smeared_semiclassical_density(&pot, e, &DVector::from_element(1, x), 2, eta)?;
        println!("{x:>6.1} {exact:>14.6e} {:>14.6e} {:>14.6e}", sc.term(0), sc.total);
    }
    Ok(())
}
