//! Momentum-space hydrogen: a round sphere with constant curvature, and the
//! curvature subtraction its wave equation carries.
//!
//! cargo run --example hydrogen

use maupertuis::density::hydrogen_momentum_case;

fn main() -> maupertuis::Result<()> {
    for dim in [2, 3, 4, 5] {
        let rep = hydrogen_momentum_case(dim, 1.0, 10, 7, 1e-4)?;
        println!(
            "D = {dim}: R = {:<4} subtraction R/(2D(D-1)) = {:<4} conformal (D-2)R/(8(D-1)) = {:<8.5}  {}   fd error {:.1e}",
            rep.ricci_scalar, rep.subtraction_actual, rep.subtraction_weyl, rep.weyl_statement, rep.max_relative_fd_error
        );
    }
    let rep = hydrogen_momentum_case(3, 0.5, 5, 1, 1e-4)?;
    println!("\n{}", serde_json::to_string_pretty(&rep).expect("report serializes"));
    Ok(())
}
