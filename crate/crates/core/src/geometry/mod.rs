//! Differential geometry of conformally flat metrics `g = Ω²(x) δ`.
//!
//! The Maupertuis metric `g = 2M[V(x) - E] δ` and the hydrogen momentum-space
//! metric `g = 2 δ / (p² + p_E²)²` both implement [`ConformalFactor`]; every
//! curvature routine in this module works on that trait.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::potentials::Potential;

mod curvature;
mod yamabe;

pub use curvature::{
    christoffels, curvature_invariants, curvature_tensors, ricci_scalar_analytic,
    ricci_scalar_conformal, ricci_scalar_fd, ricci_tensor_conformal, weyl_curvature_term,
    Christoffel, CurvaturePack, CurvatureTensors, ScalarCurvature,
};
pub use yamabe::{
    conformal_weight, laplace_beltrami_fd, schrodinger_solution_transfer, weyl_coupling,
    yamabe_covariance_residual, RectGrid, TransferReport,
};

/// Smallest admissible value of Ω² before geometry routines refuse to evaluate.
pub const DEFAULT_DELTA_MIN: f64 = 1e-6;
/// Default finite-difference step for curvature stencils.
pub const DEFAULT_CURVATURE_STEP: f64 = 1e-4;

/// `Ω` together with its first and second partial derivatives at a point.
#[derive(Debug, Clone, PartialEq)]
pub struct OmegaJet {
    pub omega2: f64,
    pub omega: f64,
    pub grad: DVector<f64>,
    pub hess: DMatrix<f64>,
}

impl OmegaJet {
    pub fn dim(&self) -> usize {
        self.grad.len()
    }
}

/// A conformal factor `Ω²(x)` on `R^D`.
pub trait ConformalFactor: Send + Sync {
    fn dim(&self) -> usize;

    /// The raw conformal factor. Always defined inside the source's domain,
    /// even where it is not positive.
    fn omega_squared(&self, x: &DVector<f64>) -> Result<f64>;

    /// Ω, ∂Ω and ∂∂Ω. Fails with [`Error::ForbiddenRegion`] where Ω² is
    /// below the admissibility threshold.
    fn jet(&self, x: &DVector<f64>) -> Result<OmegaJet>;

    fn geometry_at(&self, x: &DVector<f64>) -> Result<ConformalGeometry> {
        Ok(ConformalGeometry { point: x.clone(), jet: self.jet(x)? })
    }
}

/// The conformal geometry at a single point.
#[derive(Debug, Clone, PartialEq)]
pub struct ConformalGeometry {
    pub point: DVector<f64>,
    pub jet: OmegaJet,
}

impl ConformalGeometry {
    pub fn omega2(&self) -> f64 {
        self.jet.omega2
    }

    pub fn christoffels(&self) -> Christoffel {
        christoffels(&self.jet)
    }
}

/// Which side of the turning surface the metric is positive on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// `Ω² = 2M(V - E)`, positive where `V > E`.
    Forbidden,
    /// `Ω² = 2M(E - V)`, the sign-flipped metric used for classical orbits.
    /// Christoffel symbols are unchanged by `g → -g`.
    Allowed,
}

/// The Maupertuis metric `g = 2M[V(x) - E] δ` of a potential at energy `E`.
#[derive(Debug, Clone)]
pub struct MaupertuisMetric {
    potential: Arc<Potential>,
    energy: f64,
    side: Side,
    delta_min: f64,
}

impl MaupertuisMetric {
    pub fn new(potential: Potential, energy: f64) -> Self {
        Self::with_side(Arc::new(potential), energy, Side::Forbidden)
    }

    /// The sign-flipped metric `2M(E - V) δ` whose geodesics are the
    /// classically allowed orbits.
    pub fn allowed(potential: Potential, energy: f64) -> Self {
        Self::with_side(Arc::new(potential), energy, Side::Allowed)
    }

    pub fn with_side(potential: Arc<Potential>, energy: f64, side: Side) -> Self {
        Self { potential, energy, side, delta_min: DEFAULT_DELTA_MIN }
    }

    pub fn with_delta_min(mut self, delta_min: f64) -> Self {
        self.delta_min = delta_min;
        self
    }

    pub fn potential(&self) -> &Potential {
        &self.potential
    }

    pub fn energy(&self) -> f64 {
        self.energy
    }

    pub fn side(&self) -> Side {
        self.side
    }

    fn sign(&self) -> f64 {
        match self.side {
            Side::Forbidden => 1.0,
            Side::Allowed => -1.0,
        }
    }
}

impl ConformalFactor for MaupertuisMetric {
    fn dim(&self) -> usize {
        self.potential.dim()
    }

    fn omega_squared(&self, x: &DVector<f64>) -> Result<f64> {
        let v = self.potential.value(x)?;
        Ok(self.sign() * 2.0 * self.potential.mass() * (v - self.energy))
    }

    fn jet(&self, x: &DVector<f64>) -> Result<OmegaJet> {
        let eval = self.potential.evaluate(x)?;
        let m = self.potential.mass();
        let s = self.sign();
        let omega2 = s * 2.0 * m * (eval.value - self.energy);
        if !(omega2 > self.delta_min) {
            return Err(Error::ForbiddenRegion {
                coordinate: x.iter().copied().collect(),
                energy_minus_potential: self.energy - eval.value,
            });
        }
        let omega = omega2.sqrt();
        let grad = &eval.grad * (s * m / omega);
        let hess = &eval.hess * (s * m / omega) - &grad * grad.transpose() / omega;
        Ok(OmegaJet { omega2, omega, grad, hess })
    }
}

/// Momentum-space metric of the hydrogen atom, `g = 2 δ / (p² + p_E²)²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HydrogenMomentumMetric {
    dim: usize,
    p_e: f64,
}

impl HydrogenMomentumMetric {
    pub fn new(dim: usize, p_e: f64) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidParameter("hydrogen metric needs D >= 2".into()));
        }
        if !(p_e > 0.0) {
            return Err(Error::InvalidParameter("p_E must be positive".into()));
        }
        Ok(Self { dim, p_e })
    }

    pub fn p_e(&self) -> f64 {
        self.p_e
    }

    /// Scalar curvature `2 D (D - 1) p_E²` of the metric (a round sphere).
    pub fn analytic_ricci_scalar(&self) -> f64 {
        let d = self.dim as f64;
        2.0 * d * (d - 1.0) * self.p_e * self.p_e
    }

    /// Sectional curvature `K = R / (D (D - 1)) = 2 p_E²`.
    pub fn sectional_curvature(&self) -> f64 {
        2.0 * self.p_e * self.p_e
    }
}

impl ConformalFactor for HydrogenMomentumMetric {
    fn dim(&self) -> usize {
        self.dim
    }

    fn omega_squared(&self, p: &DVector<f64>) -> Result<f64> {
        if p.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: p.len() });
        }
        let s = p.norm_squared() + self.p_e * self.p_e;
        Ok(2.0 / (s * s))
    }

    fn jet(&self, p: &DVector<f64>) -> Result<OmegaJet> {
        let omega2 = self.omega_squared(p)?;
        let s = p.norm_squared() + self.p_e * self.p_e;
        let c = std::f64::consts::SQRT_2;
        let omega = c / s;
        let grad = p * (-2.0 * c / (s * s));
        let hess = (DMatrix::identity(self.dim, self.dim) / (s * s)
            - p * p.transpose() * (4.0 / (s * s * s)))
            * (-2.0 * c);
        Ok(OmegaJet { omega2, omega, grad, hess })
    }
}

/// Ω² with derivatives for the Maupertuis metric at one point.
pub fn conformal_factor(potential: &Potential, energy: f64, x: &DVector<f64>) -> Result<ConformalGeometry> {
    MaupertuisMetric::new(potential.clone(), energy).geometry_at(x)
}
