//! Newtonian orbits are geodesics of the Maupertuis metric once time is
//! traded for arc length, and the eikonal is stationary along them.
//!
//! cargo run --example geodesics

use std::sync::Arc;

use maupertuis::dynamics::{compare_geodesic_newton, eikonal, geodesic_integrate, perturb_normal, unit_velocity};
use maupertuis::geometry::{MaupertuisMetric, Side};
use maupertuis::Potential;
use nalgebra::DVector;

fn main() -> maupertuis::Result<()> {
    let pot = Potential::harmonic(2, 1.0)?;
    let x0 = DVector::from_column_slice(&[1.0, 0.3]);
    let v0 = DVector::from_column_slice(&[0.2, 0.9]);
    let e = 0.5 * v0.norm_squared() + pot.value(&x0)?;

    let rep = compare_geodesic_newton(&pot, e, &x0, &v0, std::f64::consts::FRAC_PI_2, 1e-9)?;
    println!("E = {e}");
    println!("quarter period t = {:.6}, arc length l = {:.6}", rep.t_end, rep.l_end);
    println!("max |x_newton - x_geodesic| = {:e} over {} samples", rep.max_deviation, rep.compared_samples);
    println!("energy drift {:e}, unit-norm drift {:e}", rep.newton_energy_drift, rep.geodesic_norm_drift);

    let metric = MaupertuisMetric::with_side(Arc::new(pot), e, Side::Allowed);
    let u0 = unit_velocity(&metric, &x0, &v0)?;
    let geo = geodesic_integrate(&metric, &x0, &u0, 0.5, 1e-12)?;
    let w = DVector::from_column_slice(&[0.4, -0.2]);
    let s0 = eikonal(&perturb_normal(&geo, &metric, &w, 1, 0.0, 801)?, &metric)?;
    println!("\neikonal along the geodesic: {s0:.12}");
    println!("{:>10} {:>16}", "amplitude", "S(a) - S(0)");
    for a in [4e-3, 2e-3, 1e-3, 5e-4] {
        let s = eikonal(&perturb_normal(&geo, &metric, &w, 1, a, 801)?, &metric)?;
        println!("{a:>10.1e} {:>16.6e}", s - s0);
    }
    Ok(())
}
