//! Scalar potentials `V(x)` with analytic gradients and Hessians.
//!
//! A [`Potential`] bundles the family, the spatial dimension, and the system
//! constants `M` and `ħ`. Units default to `M = ħ = 1`.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

mod tabulated;

pub use tabulated::TabulatedGrid;

/// Value, gradient and Hessian of a potential at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialEval {
    pub value: f64,
    pub grad: DVector<f64>,
    pub hess: DMatrix<f64>,
}

impl PotentialEval {
    pub fn laplacian(&self) -> f64 {
        self.hess.trace()
    }

    pub fn grad_squared(&self) -> f64 {
        self.grad.norm_squared()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Free,
    /// `V = M ω² |x|² / 2`
    Harmonic { omega: f64 },
    /// `V = λ |x|⁴`
    Quartic { lambda: f64 },
    /// `V = -depth · exp(-|x|² / 2 width²)`
    GaussianWell { depth: f64, width: f64 },
    /// `V = -charge / sqrt(|x|² + ε²)`
    CoulombRegularized {
        charge: f64,
        #[serde(default = "default_coulomb_epsilon")]
        epsilon: f64,
    },
    UserTabulated(TabulatedGrid),
}

fn default_coulomb_epsilon() -> f64 {
    1e-3
}

#[derive(Debug, Clone, PartialEq)]
pub struct Potential {
    dim: usize,
    mass: f64,
    hbar: f64,
    family: Family,
}

impl Potential {
    pub fn new(dim: usize, family: Family) -> Result<Self> {
        Self::with_constants(dim, 1.0, 1.0, family)
    }

    pub fn with_constants(dim: usize, mass: f64, hbar: f64, family: Family) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter("dimension must be at least 1".into()));
        }
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(Error::InvalidParameter(format!("mass must be positive, got {mass}")));
        }
        if !(hbar > 0.0 && hbar.is_finite()) {
            return Err(Error::InvalidParameter(format!("hbar must be positive, got {hbar}")));
        }
        match &family {
            Family::Harmonic { omega } if !(*omega > 0.0) => {
                return Err(Error::InvalidParameter("harmonic omega must be positive".into()))
            }
            Family::Quartic { lambda } if !lambda.is_finite() => {
                return Err(Error::InvalidParameter("quartic lambda must be finite".into()))
            }
            Family::GaussianWell { width, .. } if !(*width > 0.0) => {
                return Err(Error::InvalidParameter("gaussian width must be positive".into()))
            }
            Family::CoulombRegularized { epsilon, .. } if !(*epsilon > 0.0) => {
                return Err(Error::InvalidParameter(
                    "coulomb regularization epsilon must be positive".into(),
                ))
            }
            Family::UserTabulated(grid) => grid.validate(dim)?,
            _ => {}
        }
        Ok(Self { dim, mass, hbar, family })
    }

    pub fn free(dim: usize) -> Self {
        Self::new(dim, Family::Free).expect("valid free potential")
    }

    pub fn harmonic(dim: usize, omega: f64) -> Result<Self> {
        Self::new(dim, Family::Harmonic { omega })
    }

    pub fn quartic(dim: usize, lambda: f64) -> Result<Self> {
        Self::new(dim, Family::Quartic { lambda })
    }

    pub fn gaussian_well(dim: usize, depth: f64, width: f64) -> Result<Self> {
        Self::new(dim, Family::GaussianWell { depth, width })
    }

    pub fn coulomb(dim: usize, charge: f64, epsilon: f64) -> Result<Self> {
        Self::new(dim, Family::CoulombRegularized { charge, epsilon })
    }

    /// Constant potential `V = value`, realised as a flat tabulated grid.
    pub fn constant(dim: usize, value: f64) -> Result<Self> {
        let axes = vec![vec![-1e6, 0.0, 1e6]; dim];
        let n = 3usize.pow(dim as u32);
        Self::new(dim, Family::UserTabulated(TabulatedGrid::new(axes, vec![value; n])?))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    /// Lowest value of the potential over its domain.
    pub fn minimum(&self) -> f64 {
        match &self.family {
            Family::Free | Family::Harmonic { .. } => 0.0,
            Family::Quartic { lambda } => {
                if *lambda >= 0.0 {
                    0.0
                } else {
                    f64::NEG_INFINITY
                }
            }
            Family::GaussianWell { depth, .. } => (-depth).min(0.0),
            Family::CoulombRegularized { charge, epsilon } => (-charge / epsilon).min(0.0),
            Family::UserTabulated(grid) => grid.min_value(),
        }
    }

    pub fn value(&self, x: &DVector<f64>) -> Result<f64> {
        Ok(self.evaluate(x)?.value)
    }

    pub fn evaluate(&self, x: &DVector<f64>) -> Result<PotentialEval> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: x.len() });
        }
        let d = self.dim;
        let r2 = x.norm_squared();
        let eval = match &self.family {
            Family::Free => PotentialEval {
                value: 0.0,
                grad: DVector::zeros(d),
                hess: DMatrix::zeros(d, d),
            },
            Family::Harmonic { omega } => {
                let k = self.mass * omega * omega;
                PotentialEval {
                    value: 0.5 * k * r2,
                    grad: x * k,
                    hess: DMatrix::identity(d, d) * k,
                }
            }
            Family::Quartic { lambda } => {
                let xxt = x * x.transpose();
                PotentialEval {
                    value: lambda * r2 * r2,
                    grad: x * (4.0 * lambda * r2),
                    hess: (DMatrix::identity(d, d) * r2 + xxt * 2.0) * (4.0 * lambda),
                }
            }
            Family::GaussianWell { depth, width } => {
                let s2 = width * width;
                let e = (-0.5 * r2 / s2).exp();
                let xxt = x * x.transpose();
                PotentialEval {
                    value: -depth * e,
                    grad: x * (depth * e / s2),
                    hess: (DMatrix::identity(d, d) / s2 - xxt / (s2 * s2)) * (depth * e),
                }
            }
            Family::CoulombRegularized { charge, epsilon } => {
                let q = r2 + epsilon * epsilon;
                let inv = q.sqrt().recip();
                let inv3 = inv * inv * inv;
                let inv5 = inv3 * inv * inv;
                let xxt = x * x.transpose();
                PotentialEval {
                    value: -charge * inv,
                    grad: x * (charge * inv3),
                    hess: (DMatrix::identity(d, d) * inv3 - xxt * (3.0 * inv5)) * *charge,
                }
            }
            Family::UserTabulated(grid) => grid.evaluate(x)?,
        };
        if !eval.value.is_finite()
            || eval.grad.iter().any(|g| !g.is_finite())
            || eval.hess.iter().any(|h| !h.is_finite())
        {
            return Err(Error::Evaluation {
                coordinate: x.iter().copied().collect(),
                reason: "non-finite potential, gradient or Hessian".into(),
            });
        }
        Ok(eval)
    }

    /// Central-difference gradient of `V` with step `h`.
    pub fn fd_gradient(&self, x: &DVector<f64>, h: f64) -> Result<DVector<f64>> {
        let mut g = DVector::zeros(self.dim);
        for mu in 0..self.dim {
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[mu] += h;
            xm[mu] -= h;
            g[mu] = (self.value(&xp)? - self.value(&xm)?) / (2.0 * h);
        }
        Ok(g)
    }

    /// Central-difference Laplacian of `V` with step `h`.
    pub fn fd_laplacian(&self, x: &DVector<f64>, h: f64) -> Result<f64> {
        let v0 = self.value(x)?;
        let mut acc = 0.0;
        for mu in 0..self.dim {
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[mu] += h;
            xm[mu] -= h;
            acc += self.value(&xp)? - 2.0 * v0 + self.value(&xm)?;
        }
        Ok(acc / (h * h))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(v: &[f64]) -> DVector<f64> {
        DVector::from_column_slice(v)
    }

    #[test]
    fn harmonic_direct_substitution() {
        let pot = Potential::harmonic(1, 1.0).unwrap();
        let e = pot.evaluate(&pt(&[2.0])).unwrap();
        assert_eq!(e.value, 2.0);
        assert_eq!(e.grad[0], 2.0);
        assert_eq!(e.hess[(0, 0)], 1.0);
    }

    #[test]
    fn free_is_identically_zero() {
        for d in 1..5 {
            let pot = Potential::free(d);
            let x = DVector::from_fn(d, |i, _| 0.3 * i as f64 - 1.1);
            let e = pot.evaluate(&x).unwrap();
            assert_eq!(e.value, 0.0);
            assert!(e.grad.iter().all(|&g| g == 0.0));
            assert!(e.hess.iter().all(|&h| h == 0.0));
        }
    }

    #[test]
    fn quartic_matches_finite_differences() {
        let pot = Potential::quartic(1, 1.0).unwrap();
        let x = pt(&[1.3]);
        let e = pot.evaluate(&x).unwrap();
        assert!((e.grad[0] - 8.788).abs() < 1e-12);
        assert!((e.hess[(0, 0)] - 20.28).abs() < 1e-12);
        let fd = pot.fd_gradient(&x, 1e-5).unwrap();
        assert!((fd[0] - e.grad[0]).abs() < 1e-8);
    }

    #[test]
    fn rejects_bad_constants() {
        assert!(Potential::with_constants(0, 1.0, 1.0, Family::Free).is_err());
        assert!(Potential::with_constants(2, -1.0, 1.0, Family::Free).is_err());
        assert!(Potential::with_constants(2, 1.0, 0.0, Family::Free).is_err());
        assert!(Potential::coulomb(3, 1.0, 0.0).is_err());
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let pot = Potential::harmonic(3, 1.0).unwrap();
        assert!(matches!(
            pot.evaluate(&pt(&[1.0, 2.0])),
            Err(Error::DimensionMismatch { expected: 3, got: 2 })
        ));
    }

    #[test]
    fn non_finite_input_is_an_evaluation_error() {
        let pot = Potential::harmonic(2, 1.0).unwrap();
        let err = pot.evaluate(&pt(&[f64::INFINITY, 0.0])).unwrap_err();
        assert!(matches!(err, Error::Evaluation { .. }));
    }

    #[test]
    fn constant_potential_has_no_derivatives() {
        let pot = Potential::constant(3, 1.5).unwrap();
        let e = pot.evaluate(&pt(&[0.2, -4.0, 7.0])).unwrap();
        assert!((e.value - 1.5).abs() < 1e-12);
        assert!(e.grad.norm() < 1e-12);
        assert!(e.hess.norm() < 1e-12);
    }

    #[test]
    fn family_serde_round_trip() {
        let fam = Family::GaussianWell { depth: 2.0, width: 0.7 };
        let json = serde_json::to_string(&fam).unwrap();
        assert_eq!(json, r#"{"gaussian-well":{"depth":2.0,"width":0.7}}"#);
        let back: Family = serde_json::from_str(&json).unwrap();
        assert_eq!(back, fam);
        let coul: Family = serde_json::from_str(r#"{"coulomb-regularized":{"charge":1.0}}"#).unwrap();
        assert_eq!(coul, Family::CoulombRegularized { charge: 1.0, epsilon: 1e-3 });
    }
}
