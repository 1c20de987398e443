use nalgebra::{DMatrix, DVector};

use super::{ConformalFactor, OmegaJet};
use crate::error::{Error, Result};
use crate::potentials::Potential;

/// Christoffel symbols `Γ_{μν}^λ`, stored with `λ` fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct Christoffel {
    dim: usize,
    data: Vec<f64>,
}

impl Christoffel {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![0.0; dim * dim * dim] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `Γ_{μν}^λ`
    #[inline]
    pub fn get(&self, mu: usize, nu: usize, lambda: usize) -> f64 {
        self.data[(mu * self.dim + nu) * self.dim + lambda]
    }

    #[inline]
    fn set(&mut self, mu: usize, nu: usize, lambda: usize, v: f64) {
        self.data[(mu * self.dim + nu) * self.dim + lambda] = v;
    }

    /// `Γ_{αβ}^δ u^α u^β` for each δ.
    pub fn contract(&self, u: &DVector<f64>) -> DVector<f64> {
        let d = self.dim;
        DVector::from_fn(d, |delta, _| {
            let mut acc = 0.0;
            for a in 0..d {
                for b in 0..d {
                    acc += self.get(a, b, delta) * u[a] * u[b];
                }
            }
            acc
        })
    }
}

/// `Γ_{μν}^λ = Ω⁻¹(δ^λ_ν ∂_μΩ + δ^λ_μ ∂_νΩ − δ_{μν} ∂_λΩ)` on a flat background.
pub fn christoffels(jet: &OmegaJet) -> Christoffel {
    let d = jet.dim();
    let mut gamma = Christoffel::zeros(d);
    let inv = 1.0 / jet.omega;
    for mu in 0..d {
        for nu in 0..d {
            for lambda in 0..d {
                let mut v = 0.0;
                if lambda == nu {
                    v += jet.grad[mu];
                }
                if lambda == mu {
                    v += jet.grad[nu];
                }
                if mu == nu {
                    v -= jet.grad[lambda];
                }
                gamma.set(mu, nu, lambda, v * inv);
            }
        }
    }
    gamma
}

/// Scalar curvature with a flag for proximity to the turning surface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarCurvature {
    pub value: f64,
    pub near_turning: bool,
}

/// Ricci scalar of the Maupertuis metric straight from `V` and its derivatives:
///
/// `R = (1 - D)/4 · [ 2 ∂²V / (M (V-E)²) + (D - 6) (∂V)² / (2 M (V-E)³) ]`
///
/// `near_turning_threshold` flags points with `|E - V|` below it.
pub fn ricci_scalar_analytic(
    potential: &Potential,
    energy: f64,
    x: &DVector<f64>,
    near_turning_threshold: f64,
) -> Result<ScalarCurvature> {
    let eval = potential.evaluate(x)?;
    let m = potential.mass();
    let w = eval.value - energy;
    if !(2.0 * m * w > super::DEFAULT_DELTA_MIN) {
        return Err(Error::ForbiddenRegion {
            coordinate: x.iter().copied().collect(),
            energy_minus_potential: -w,
        });
    }
    let d = potential.dim() as f64;
    let value = (1.0 - d) / 4.0
        * (2.0 * eval.laplacian() / (m * w * w) + (d - 6.0) * eval.grad_squared() / (2.0 * m * w * w * w));
    Ok(ScalarCurvature { value, near_turning: w.abs() < near_turning_threshold })
}

/// Ricci scalar of `g = Ω² δ` from the Ω jet:
/// `R = -2(D-1) ΔΩ/Ω³ - (D-1)(D-4) |∂Ω|²/Ω⁴`.
pub fn ricci_scalar_conformal(jet: &OmegaJet) -> f64 {
    let d = jet.dim() as f64;
    let o = jet.omega;
    let lap = jet.hess.trace();
    let g2 = jet.grad.norm_squared();
    -2.0 * (d - 1.0) * lap / (o * o * o) - (d - 1.0) * (d - 4.0) * g2 / (o * o * o * o)
}

/// The product `ξ_c R` with `ξ_c = (D-2)/(4(D-1))`, written so the `(D - 1)`
/// cancels analytically: `-(D-2)/4 · [2ΔΩ/Ω³ + (D-4)|∂Ω|²/Ω⁴]`.
///
/// This stays finite at `D = 1`, where `ξ_c` alone is undefined.
pub fn weyl_curvature_term(jet: &OmegaJet) -> f64 {
    let d = jet.dim() as f64;
    let o = jet.omega;
    let lap = jet.hess.trace();
    let g2 = jet.grad.norm_squared();
    -(d - 2.0) / 4.0 * (2.0 * lap / (o * o * o) + (d - 4.0) * g2 / (o * o * o * o))
}

/// Ricci tensor `R_{μν}` of `g = e^{2φ} δ`, `φ = ln Ω`:
/// `-(D-2)(∂_μ∂_νφ - ∂_μφ ∂_νφ) - δ_{μν}(Δφ + (D-2)|∂φ|²)`.
pub fn ricci_tensor_conformal(jet: &OmegaJet) -> DMatrix<f64> {
    let d = jet.dim();
    let df = &jet.grad / jet.omega;
    let ddf = &jet.hess / jet.omega - &df * df.transpose();
    let dm2 = d as f64 - 2.0;
    let trace_part = ddf.trace() + dm2 * df.norm_squared();
    (&ddf - &df * df.transpose()) * (-dm2) - DMatrix::identity(d, d) * trace_part
}

/// Riemann, Ricci and scalar curvature at a point, assembled from
/// finite differences of the Christoffel symbols.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureTensors {
    pub dim: usize,
    /// Ω² at the point; the metric is `omega2 · δ`.
    pub omega2: f64,
    /// `R_{abcd}` with all indices lowered, `R_{bd} = g^{ac} R_{abcd}`.
    pub riemann: Vec<f64>,
    pub ricci: DMatrix<f64>,
    pub scalar: f64,
}

impl CurvatureTensors {
    #[inline]
    pub fn riemann(&self, a: usize, b: usize, c: usize, d: usize) -> f64 {
        let n = self.dim;
        self.riemann[((a * n + b) * n + c) * n + d]
    }

    /// `R_{μν}R^{μν}`
    pub fn ricci_squared(&self) -> f64 {
        self.ricci.iter().map(|r| r * r).sum::<f64>() / (self.omega2 * self.omega2)
    }

    /// `R_{μνρσ}R^{μνρσ}`
    pub fn riemann_squared(&self) -> f64 {
        let g4 = self.omega2.powi(4);
        self.riemann.iter().map(|r| r * r).sum::<f64>() / g4
    }
}

fn shifted(x: &DVector<f64>, axis: usize, h: f64) -> DVector<f64> {
    let mut y = x.clone();
    y[axis] += h;
    y
}

/// Riemann tensor from the covariant curl
/// `R_{μνλ}^σ = ∂_μΓ_{νλ}^σ − ∂_νΓ_{μλ}^σ − Γ_{μλ}^τ Γ_{ντ}^σ + Γ_{νλ}^τ Γ_{μτ}^σ`
/// with centred differences of step `h`.
pub fn curvature_tensors<M: ConformalFactor + ?Sized>(
    metric: &M,
    x: &DVector<f64>,
    h: f64,
) -> Result<CurvatureTensors> {
    let d = metric.dim();
    let jet = metric.jet(x)?;
    let gamma = christoffels(&jet);

    // dgamma[rho] = ∂_ρ Γ
    let mut dgamma = Vec::with_capacity(d);
    for rho in 0..d {
        let gp = christoffels(&metric.jet(&shifted(x, rho, h))?);
        let gm = christoffels(&metric.jet(&shifted(x, rho, -h))?);
        let mut dg = Christoffel::zeros(d);
        for (k, v) in dg.data.iter_mut().enumerate() {
            *v = (gp.data[k] - gm.data[k]) / (2.0 * h);
        }
        dgamma.push(dg);
    }

    // R_{μνλ}^σ first, then lower into R_{σλμν}
    let omega2 = jet.omega2;
    let mut riemann = vec![0.0; d * d * d * d];
    for mu in 0..d {
        for nu in 0..d {
            for lambda in 0..d {
                for sigma in 0..d {
                    let mut v = dgamma[mu].get(nu, lambda, sigma) - dgamma[nu].get(mu, lambda, sigma);
                    for tau in 0..d {
                        v -= gamma.get(mu, lambda, tau) * gamma.get(nu, tau, sigma);
                        v += gamma.get(nu, lambda, tau) * gamma.get(mu, tau, sigma);
                    }
                    riemann[((sigma * d + lambda) * d + mu) * d + nu] = omega2 * v;
                }
            }
        }
    }

    let mut ricci = DMatrix::zeros(d, d);
    for b in 0..d {
        for dd in 0..d {
            let mut acc = 0.0;
            for a in 0..d {
                acc += riemann[((a * d + b) * d + a) * d + dd];
            }
            ricci[(b, dd)] = acc / omega2;
        }
    }
    let scalar = ricci.trace() / omega2;
    Ok(CurvatureTensors { dim: d, omega2, riemann, ricci, scalar })
}

/// Ricci scalar by finite differences of Christoffels (independent of the
/// closed-form expressions).
pub fn ricci_scalar_fd<M: ConformalFactor + ?Sized>(metric: &M, x: &DVector<f64>, h: f64) -> Result<f64> {
    Ok(curvature_tensors(metric, x, h)?.scalar)
}

/// The curvature invariants entering the second heat-kernel coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CurvaturePack {
    pub r: f64,
    /// `□R = R_{;μ}^{μ}`
    pub box_r: f64,
    pub ricci_sq: f64,
    pub riemann_sq: f64,
}

impl CurvaturePack {
    pub const FLAT: Self = Self { r: 0.0, box_r: 0.0, ricci_sq: 0.0, riemann_sq: 0.0 };

    /// Pack of a maximally symmetric space with scalar curvature `r`.
    pub fn maximally_symmetric(dim: usize, r: f64) -> Self {
        let d = dim as f64;
        Self {
            r,
            box_r: 0.0,
            ricci_sq: r * r / d,
            riemann_sq: 2.0 * r * r / (d * (d - 1.0)),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.r.is_finite() && self.box_r.is_finite() && self.ricci_sq.is_finite() && self.riemann_sq.is_finite()
    }
}

/// `R`, `□R`, `R_{μν}R^{μν}` and `R_{μνρσ}R^{μνρσ}` at `x`.
///
/// The quadratic invariants come from the finite-difference Riemann tensor
/// with step `h`. `□R` applies the Laplace–Beltrami stencil, with step
/// `10 h`, to the conformal-formula Ricci scalar at neighbouring points.
pub fn curvature_invariants<M: ConformalFactor + ?Sized>(
    metric: &M,
    x: &DVector<f64>,
    h: f64,
) -> Result<CurvaturePack> {
    let tensors = curvature_tensors(metric, x, h)?;
    let box_r = super::laplace_beltrami_fd(metric, x, 10.0 * h, |y| {
        Ok(ricci_scalar_conformal(&metric.jet(y)?))
    })?;
    Ok(CurvaturePack {
        r: tensors.scalar,
        box_r,
        ricci_sq: tensors.ricci_squared(),
        riemann_sq: tensors.riemann_squared(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{HydrogenMomentumMetric, MaupertuisMetric};

    fn pt(v: &[f64]) -> DVector<f64> {
        DVector::from_column_slice(v)
    }

    #[test]
    fn flat_metric_has_no_connection() {
        let metric = MaupertuisMetric::new(Potential::constant(3, 2.0).unwrap(), 0.5);
        let g = metric.geometry_at(&pt(&[0.1, 0.2, 0.3])).unwrap();
        assert!(g.christoffels().data.iter().all(|v| v.abs() < 1e-12));
        let r = ricci_scalar_fd(&metric, &pt(&[0.1, 0.2, 0.3]), 1e-4).unwrap();
        assert!(r.abs() < 1e-10);
    }

    #[test]
    fn one_dimensional_christoffel() {
        let metric = MaupertuisMetric::new(Potential::quartic(1, 1.0).unwrap(), -0.5);
        let jet = metric.jet(&pt(&[0.8])).unwrap();
        let gamma = christoffels(&jet);
        assert!((gamma.get(0, 0, 0) - jet.grad[0] / jet.omega).abs() < 1e-15);
    }

    #[test]
    fn christoffels_symmetric_in_lower_indices() {
        let metric = MaupertuisMetric::new(Potential::gaussian_well(3, 1.0, 0.8).unwrap(), -2.0);
        let gamma = christoffels(&metric.jet(&pt(&[0.3, -0.4, 0.9])).unwrap());
        for a in 0..3 {
            for b in 0..3 {
                for c in 0..3 {
                    assert_eq!(gamma.get(a, b, c), gamma.get(b, a, c));
                }
            }
        }
    }

    #[test]
    fn one_dimension_is_flat() {
        let pot = Potential::gaussian_well(1, 2.0, 0.5).unwrap();
        let r = ricci_scalar_analytic(&pot, -3.0, &pt(&[0.37]), 0.0).unwrap();
        assert_eq!(r.value, 0.0);
    }

    #[test]
    fn analytic_matches_conformal_formula() {
        let pot = Potential::harmonic(3, 1.0).unwrap();
        let x = pt(&[1.0, 0.0, 0.0]);
        let r = ricci_scalar_analytic(&pot, -1.0, &x, 0.0).unwrap().value;
        let jet = MaupertuisMetric::new(pot.clone(), -1.0).jet(&x).unwrap();
        assert!((r - ricci_scalar_conformal(&jet)).abs() < 1e-12);
        // hand value: -(1/2)[2·3/1.5² - 3/(2·1.5³)] = -10/9
        assert!((r + 10.0 / 9.0).abs() < 1e-12);
    }

    #[test]
    fn forbidden_side_refused() {
        let pot = Potential::harmonic(2, 1.0).unwrap();
        let err = ricci_scalar_analytic(&pot, 1.0, &pt(&[0.1, 0.1]), 0.0).unwrap_err();
        assert!(matches!(err, Error::ForbiddenRegion { .. }));
    }

    #[test]
    fn ricci_tensor_trace_is_scalar() {
        let metric = MaupertuisMetric::new(Potential::quartic(3, 0.7).unwrap(), -0.4);
        let jet = metric.jet(&pt(&[0.5, 0.2, -0.6])).unwrap();
        let ric = ricci_tensor_conformal(&jet);
        let r = ric.trace() / jet.omega2;
        assert!((r - ricci_scalar_conformal(&jet)).abs() < 1e-12 * (1.0 + r.abs()));
        let fd = curvature_tensors(&metric, &pt(&[0.5, 0.2, -0.6]), 1e-4).unwrap();
        assert!((&fd.ricci - &ric).amax() < 1e-6);
    }

    #[test]
    fn weyl_term_matches_coupling_times_scalar() {
        let metric = MaupertuisMetric::new(Potential::harmonic(4, 1.0).unwrap(), -1.0);
        let jet = metric.jet(&pt(&[0.3, 0.1, -0.2, 0.7])).unwrap();
        let xi = 2.0 / 12.0;
        assert!((weyl_curvature_term(&jet) - xi * ricci_scalar_conformal(&jet)).abs() < 1e-13);
    }

    #[test]
    fn sphere_riemann_identity() {
        let metric = HydrogenMomentumMetric::new(3, 1.0).unwrap();
        let p = pt(&[0.2, -0.1, 0.4]);
        let t = curvature_tensors(&metric, &p, 1e-4).unwrap();
        let k = metric.sectional_curvature();
        let g = t.omega2;
        for a in 0..3 {
            for b in 0..3 {
                for c in 0..3 {
                    for d in 0..3 {
                        let delta = |i: usize, j: usize| if i == j { g } else { 0.0 };
                        let want = k * (delta(a, c) * delta(b, d) - delta(a, d) * delta(b, c));
                        assert!((t.riemann(a, b, c, d) - want).abs() < 1e-6 * g * g);
                    }
                }
            }
        }
    }
}
