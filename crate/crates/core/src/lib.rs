//! Maupertuis metric toolkit.
//!
//! A particle of energy `E` in a potential `V(x)` moves along geodesics of the
//! conformally flat metric `g = 2M[V(x) − E] δ`. This crate builds that metric
//! from any potential, computes its curvature, checks the classical and
//! quantum equivalences numerically, and evaluates the semiclassical particle
//! density obtained from the heat-kernel expansion on the metric.

// `!(x > 0.0)` rejects NaN along with non-positive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod density;
pub mod dewitt;
pub mod dynamics;
pub mod error;
pub mod geometry;
pub mod ode;
pub mod potentials;
pub mod quadrature;
pub mod report;
pub mod scenario;
pub mod special;
pub mod spectral;
pub mod validate;

pub use error::{Error, Result};
pub use potentials::{Family, Potential, PotentialEval};
