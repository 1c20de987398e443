//! Drive a subcommand from a scenario held in memory, as the binary does
//! from a file.
//!
//! cargo run --release --example scenario

use maupertuis::cli::{run, Command};
use maupertuis::report::OutputDir;
use maupertuis::scenario::Scenario;

const SCENARIO: &str = r#"{
  "schema_version": 1,
  "name": "quartic-line",
  "seed": 1,
  "potential": {"dim": 1, "family": {"quartic": {"lambda": 0.5}}},
  "density": {"energies": [2.0], "line": {"from": [-2.0], "to": [2.0], "n": 9}},
  "oracle": {"x_min": -6.0, "x_max": 6.0, "n": 2000, "n_states": 40, "eta": 8.0,
             "energies": [30.0], "fraction": 0.6}
}"#;

fn main() -> maupertuis::Result<()> {
    let scenario = Scenario::from_json(SCENARIO)?;
    let out = OutputDir::create(std::env::temp_dir().join("maupertuis-example"))?;
    for cmd in [Command::Density, Command::Oracle, Command::Compare] {
        for c in run(cmd, &scenario, &out)?.criteria {
            println!("{}", c.status_line());
            for k in &c.checks {
                println!("    {}: {:e} (limit {:e})", k.name, k.value, k.tolerance);
            }
            for n in &c.notes {
                println!("    {n}");
            }
        }
    }
    println!("outputs in {}", out.path("").display());

    let bad = SCENARIO.replace("\"n\": 9", "\"n\": \"nine\"");
    if let Err(e) = Scenario::from_json(&bad) {
        println!("\nrejected: {e}");
    }
    Ok(())
}
