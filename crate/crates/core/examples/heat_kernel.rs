//! Heat-kernel coefficients and the van Vleck determinant on the curved
//! momentum space of hydrogen.
//!
//! cargo run --example heat_kernel

use maupertuis::dewitt::{
    coefficient_a1, coefficient_a2, heat_kernel_diagonal_sum, mv_sqrt_terms, van_vleck_numeric, DeWittCoefficients,
    EndpointCurvature,
};
use maupertuis::geometry::{curvature_invariants, HydrogenMomentumMetric};
use nalgebra::DVector;

fn main() -> maupertuis::Result<()> {
    let metric = HydrogenMomentumMetric::new(3, 1.0)?;
    let p = DVector::from_column_slice(&[0.2, -0.1, 0.3]);
    let pack = curvature_invariants(&metric, &p, 1e-4)?;
    println!("R = {}  box R = {:e}  Ric^2 = {}  Riem^2 = {}", pack.r, pack.box_r, pack.ricci_sq, pack.riemann_sq);
    println!("{:>8} {:>22} {:>22}", "xi", "a1", "a2");
    for xi in [0.0, 0.125, 1.0 / 6.0, 0.25] {
        println!("{xi:>8.4} {:>22.15e} {:>22.15e}", coefficient_a1(pack.r, xi), coefficient_a2(&pack, xi));
    }
    let c = DeWittCoefficients::new(pack, 0.0);
    println!("heat-kernel diagonal sum at m^2 = 4: {}", heat_kernel_diagonal_sum(&c.as_array(), 3, 4.0)?);

    // sqrt(Delta) - 1 against its endpoint expansion
    let curv = EndpointCurvature::from_metric(&metric, &p, 1e-4)?;
    let dir = DVector::from_column_slice(&[0.6, 0.48, -0.64]);
    println!("\n{:>8} {:>16} {:>16} {:>16}", "sep", "sqrt(D) - 1", "past quadratic", "past quartic");
    for sep in [0.04, 0.02, 0.01, 0.005] {
        let num = van_vleck_numeric(&metric, &p, &(&p + &dir * sep), 1e-3, 1e-12)?;
        let t = mv_sqrt_terms(&num.sigma_vector, &curv);
        println!(
            "{sep:>8} {:>16.6e} {:>16.6e} {:>16.6e}",
            num.sqrt_delta - 1.0,
            num.sqrt_delta - 1.0 - t.quadratic,
            num.sqrt_delta - t.total()
        );
    }
    Ok(())
}
