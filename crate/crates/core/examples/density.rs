//! Semiclassical local density, term by term, along a ray through a
//! three-dimensional oscillator, plus the integrated density of states of the
//! one-dimensional oscillator.
//!
//! cargo run --example density

use maupertuis::density::{density_from_resolvent, density_sweep, integrated_dos, DosQuadrature};
use maupertuis::Potential;
use nalgebra::DVector;

fn main() -> maupertuis::Result<()> {
    let pot = Potential::harmonic(3, 1.0)?;
    let e = 4.5;
    let ray: Vec<DVector<f64>> = (0..13).map(|i| DVector::from_column_slice(&[0.25 * i as f64, 0.0, 0.0])).collect();
    println!("E = {e}");
    println!("{:>6} {:>14} {:>14} {:>14} {:>14}  regime", "x", "rho0", "rho1", "rho2", "total");
    for r in density_sweep(&pot, e, &ray, 2, None)? {
        println!(
            "{:>6.2} {:>14.6e} {:>14.6e} {:>14.6e} {:>14.6e}  {}",
            r.x[0],
            r.term(0),
            r.term(1),
            r.term(2),
            r.total,
            r.regime.as_str()
        );
    }

    let x = DVector::from_column_slice(&[0.5, 0.2, 0.0]);
    let via_resolvent = density_from_resolvent(&pot, e, &x, 2, None)?;
    println!("\nthrough the continued resolvent at {:?}: {:.15e}", x.as_slice(), via_resolvent.total);

    let line = Potential::harmonic(1, 1.0)?;
    println!("\n{:>6} {:>20} {:>20}", "E", "dN/dE order 0", "order 0..2");
    for e in [2.5, 5.5, 10.5, 20.5] {
        let n0 = integrated_dos(&line, e, 0, &DosQuadrature::default())?;
        let n2 = integrated_dos(&line, e, 2, &DosQuadrature::default())?;
        println!("{e:>6} {:>20.15} {:>20.15}", n0.total, n2.total);
    }
    Ok(())
}
