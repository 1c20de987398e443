//! Scenario files: JSON with a `schema_version` key, one optional block per
//! subcommand. Every block is checked against its module's preconditions
//! before any computation starts.

use std::path::Path;

use nalgebra::DVector;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::geometry::DEFAULT_DELTA_MIN;
use crate::potentials::{Family, Potential};

pub const SCHEMA_VERSION: u32 = 1;

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct PotentialSpec {
    pub dim: usize,
    #[serde(default = "one")]
    pub mass: f64,
    #[serde(default = "one")]
    pub hbar: f64,
    pub family: Family,
}

impl PotentialSpec {
    pub fn build(&self, path: &str) -> Result<Potential> {
        Potential::with_constants(self.dim, self.mass, self.hbar, self.family.clone())
            .map_err(|e| config(path, e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryBlock {
    #[serde(default)]
    pub points: Vec<Vec<f64>>,
    /// Extra seeded points drawn uniformly from `[-sample_box, sample_box]^D`.
    #[serde(default)]
    pub random_points: usize,
    #[serde(default = "default_sample_box")]
    pub sample_box: f64,
    #[serde(default = "default_curvature_step")]
    pub step: f64,
    #[serde(default = "default_two_path_tolerance")]
    pub tolerance: f64,
}

fn default_sample_box() -> f64 {
    1.0
}
fn default_curvature_step() -> f64 {
    1e-4
}
fn default_two_path_tolerance() -> f64 {
    1e-4
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeodesicBlock {
    pub x0: Vec<f64>,
    /// Initial Newtonian velocity; also fixes `E` unless `energy` is given,
    /// in which case only its direction is used.
    pub v0: Vec<f64>,
    #[serde(default)]
    pub energy: Option<f64>,
    pub span: f64,
    #[serde(default = "default_integrator_tol")]
    pub tol: f64,
    #[serde(default = "default_deviation_tolerance")]
    pub tolerance: f64,
}

fn default_integrator_tol() -> f64 {
    1e-9
}
fn default_deviation_tolerance() -> f64 {
    1e-6
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DewittBlock {
    pub points: Vec<Vec<f64>>,
    pub xi: Vec<f64>,
    #[serde(default = "default_curvature_step")]
    pub step: f64,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LineSpec {
    pub from: Vec<f64>,
    pub to: Vec<f64>,
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DensityBlock {
    pub energies: Vec<f64>,
    #[serde(default)]
    pub points: Vec<Vec<f64>>,
    #[serde(default)]
    pub line: Option<LineSpec>,
    #[serde(default = "default_order")]
    pub order: usize,
    #[serde(default)]
    pub threshold: Option<f64>,
    #[serde(default = "default_pipeline_tolerance")]
    pub tolerance: f64,
}

fn default_order() -> usize {
    2
}
fn default_pipeline_tolerance() -> f64 {
    1e-12
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleBlock {
    /// 1D potential for the oracle; defaults to the scenario potential.
    #[serde(default)]
    pub potential: Option<PotentialSpec>,
    pub x_min: f64,
    pub x_max: f64,
    pub n: usize,
    pub n_states: usize,
    pub eta: f64,
    pub energies: Vec<f64>,
    #[serde(default = "default_oracle_points")]
    pub x_points: usize,
    /// Fraction of the turning point covered by `compare`.
    #[serde(default = "default_fraction")]
    pub fraction: f64,
    #[serde(default = "default_oracle_tolerance")]
    pub tolerance: f64,
}

fn default_oracle_points() -> usize {
    141
}
fn default_fraction() -> f64 {
    0.7
}
fn default_oracle_tolerance() -> f64 {
    0.05
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HydrogenBlock {
    pub dim: usize,
    pub p_e: Vec<f64>,
    #[serde(default = "default_hydrogen_samples")]
    pub samples: usize,
    #[serde(default = "default_curvature_step")]
    pub step: f64,
    #[serde(default = "default_hydrogen_tolerance")]
    pub tolerance: f64,
}

fn default_hydrogen_samples() -> usize {
    20
}
fn default_hydrogen_tolerance() -> f64 {
    1e-5
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub schema_version: u32,
    pub name: String,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub output_dir: Option<String>,
    pub potential: PotentialSpec,
    /// Energies for the positive-metric side (`V > E`) used by `geometry`
    /// and `dewitt`.
    #[serde(default)]
    pub energies: Vec<f64>,
    #[serde(default)]
    pub geometry: Option<GeometryBlock>,
    #[serde(default)]
    pub geodesic: Option<GeodesicBlock>,
    #[serde(default)]
    pub dewitt: Option<DewittBlock>,
    #[serde(default)]
    pub density: Option<DensityBlock>,
    #[serde(default)]
    pub oracle: Option<OracleBlock>,
    #[serde(default)]
    pub hydrogen: Option<HydrogenBlock>,
}

fn config(path: impl Into<String>, reason: impl Into<String>) -> Error {
    Error::Config { path: path.into(), reason: reason.into() }
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let scenario: Scenario = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            config(if path == "." { "<root>".to_string() } else { path }, e.into_inner().to_string())
        })?;
        scenario.check()?;
        Ok(scenario)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| config("<file>", format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn potential(&self) -> Result<Potential> {
        self.potential.build("potential")
    }

    /// Returns the block or a config error naming it.
    pub fn require<'a, T>(&self, block: &'a Option<T>, name: &str) -> Result<&'a T> {
        block.as_ref().ok_or_else(|| config(name, format!("block `{name}` is required by this subcommand")))
    }

    fn check(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(config(
                "schema_version",
                format!("unsupported schema version {} (expected {SCHEMA_VERSION})", self.schema_version),
            ));
        }
        let pot = self.potential()?;
        let d = pot.dim();
        let dims = |path: &str, pts: &[Vec<f64>]| -> Result<()> {
            for (i, p) in pts.iter().enumerate() {
                if p.len() != d {
                    return Err(config(format!("{path}[{i}]"), format!("expected {d} coordinates, got {}", p.len())));
                }
            }
            Ok(())
        };
        for (i, e) in self.energies.iter().enumerate() {
            if !e.is_finite() {
                return Err(config(format!("energies[{i}]"), "energy must be finite"));
            }
        }
        let positive_side = |path: &str, pts: &[Vec<f64>]| -> Result<()> {
            for (i, p) in pts.iter().enumerate() {
                let v = pot.value(&DVector::from_column_slice(p)).map_err(|e| config(format!("{path}[{i}]"), e.to_string()))?;
                for e in &self.energies {
                    if !(2.0 * pot.mass() * (v - e) > DEFAULT_DELTA_MIN) {
                        return Err(config(
                            format!("{path}[{i}]"),
                            format!("point lies outside the positive-metric region for E = {e} (V = {v})"),
                        ));
                    }
                }
            }
            Ok(())
        };
        if let Some(g) = &self.geometry {
            dims("geometry.points", &g.points)?;
            positive_side("geometry.points", &g.points)?;
            if !(g.step > 0.0) {
                return Err(config("geometry.step", "step must be positive"));
            }
            if g.random_points > 0 && !(g.sample_box > 0.0) {
                return Err(config("geometry.sample_box", "sample box must be positive"));
            }
            if self.energies.is_empty() {
                return Err(config("energies", "geometry needs at least one energy"));
            }
        }
        if let Some(g) = &self.geodesic {
            dims("geodesic.x0", std::slice::from_ref(&g.x0))?;
            dims("geodesic.v0", std::slice::from_ref(&g.v0))?;
            if g.v0.iter().all(|v| *v == 0.0) {
                return Err(config("geodesic.v0", "initial velocity must be non-zero"));
            }
            if !(g.span > 0.0) {
                return Err(config("geodesic.span", "span must be positive"));
            }
            if !(g.tol > 0.0) {
                return Err(config("geodesic.tol", "integrator tolerance must be positive"));
            }
            if let Some(e) = g.energy {
                let v = pot.value(&DVector::from_column_slice(&g.x0))?;
                if !(e > v) {
                    return Err(config("geodesic.energy", format!("x0 must be classically allowed (E = {e}, V = {v})")));
                }
            }
        }
        if let Some(dw) = &self.dewitt {
            dims("dewitt.points", &dw.points)?;
            positive_side("dewitt.points", &dw.points)?;
            if self.energies.is_empty() {
                return Err(config("energies", "dewitt needs at least one energy"));
            }
        }
        if let Some(den) = &self.density {
            dims("density.points", &den.points)?;
            if let Some(l) = &den.line {
                dims("density.line.from", std::slice::from_ref(&l.from))?;
                dims("density.line.to", std::slice::from_ref(&l.to))?;
                if l.n < 2 {
                    return Err(config("density.line.n", "need at least two points"));
                }
            }
            if den.order > 2 {
                return Err(config("density.order", "order must be 0, 1 or 2"));
            }
            if den.energies.is_empty() {
                return Err(config("density.energies", "at least one energy is required"));
            }
        }
        if let Some(o) = &self.oracle {
            let op = match &o.potential {
                Some(spec) => spec.build("oracle.potential")?,
                None => pot.clone(),
            };
            if op.dim() != 1 {
                return Err(config("oracle.potential", "the spectral oracle is one-dimensional"));
            }
            if !(o.x_max > o.x_min) {
                return Err(config("oracle.x_max", "x_max must exceed x_min"));
            }
            if o.n_states == 0 || o.n_states > o.n / 2 {
                return Err(config("oracle.n_states", format!("must lie in 1..={}", o.n / 2)));
            }
            if !(o.eta > 0.0) {
                return Err(config("oracle.eta", "smearing width must be positive"));
            }
            if !(o.fraction > 0.0 && o.fraction < 1.0) {
                return Err(config("oracle.fraction", "fraction must lie in (0, 1)"));
            }
        }
        if let Some(h) = &self.hydrogen {
            if h.dim < 2 {
                return Err(config("hydrogen.dim", "D must be at least 2"));
            }
            for (i, p) in h.p_e.iter().enumerate() {
                if !(*p > 0.0) {
                    return Err(config(format!("hydrogen.p_e[{i}]"), "p_E must be positive"));
                }
            }
        }
        Ok(())
    }

    /// The 1D potential used by `oracle` and `compare`.
    pub fn oracle_potential(&self) -> Result<Potential> {
        let o = self.require(&self.oracle, "oracle")?;
        match &o.potential {
            Some(spec) => spec.build("oracle.potential"),
            None => self.potential(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{"schema_version": 1, "name": "t", "potential": {"dim": 2, "family": {"harmonic": {"omega": 1.0}}}}"#;

    #[test]
    fn minimal_parses() {
        let s = Scenario::from_json(MINIMAL).unwrap();
        assert_eq!(s.potential().unwrap().dim(), 2);
        assert!(s.geometry.is_none());
    }

    #[test]
    fn error_names_offending_key() {
        let bad = r#"{"schema_version": 1, "name": "t", "potential": {"dim": 2, "family": {"harmonic": {"omega": 1.0}}},
            "geometry": {"points": [[0.0, "x"]]}}"#;
        match Scenario::from_json(bad) {
            Err(Error::Config { path, .. }) => assert_eq!(path, "geometry.points[0][1]"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn forbidden_point_rejected_before_running() {
        let bad = r#"{"schema_version": 1, "name": "t", "energies": [1.0],
            "potential": {"dim": 1, "family": {"harmonic": {"omega": 1.0}}},
            "geometry": {"points": [[0.1]]}}"#;
        match Scenario::from_json(bad) {
            Err(Error::Config { path, .. }) => assert_eq!(path, "geometry.points[0]"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn wrong_schema_version() {
        let bad = MINIMAL.replace("\"schema_version\": 1", "\"schema_version\": 7");
        assert!(matches!(Scenario::from_json(&bad), Err(Error::Config { path, .. }) if path == "schema_version"));
    }
}
