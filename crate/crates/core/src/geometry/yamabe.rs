//! Conformal covariance of the Weyl-invariant Laplacian.
//!
//! For `g = Ω² δ` and a function `f`,
//! `(Δ_g − ξ_c R)[Ω^{(2-D)/2} f] = Ω^{-(D+2)/2} Σ_μ ∂²_μ f`
//! with `ξ_c = (D-2)/(4(D-1))`. Applied to a flat-space Schrödinger solution
//! this turns `(p²/2M + V − E)ψ = 0` into `[ħ²(Δ_g − ξ_c R) − 1]φ = 0` for
//! `φ = Ω^{(2-D)/2} ψ`.

use nalgebra::DVector;

use super::{weyl_curvature_term, ConformalFactor, MaupertuisMetric};
use crate::error::{Error, Result};
use crate::potentials::Potential;

/// Weight `(2 - D)/2` carried by solutions of the conformal Laplacian.
pub fn conformal_weight(dim: usize) -> f64 {
    (2.0 - dim as f64) / 2.0
}

/// `ξ_c = (D-2)/(4(D-1))`; undefined for `D = 1`.
pub fn weyl_coupling(dim: usize) -> Option<f64> {
    if dim < 2 {
        None
    } else {
        let d = dim as f64;
        Some((d - 2.0) / (4.0 * (d - 1.0)))
    }
}

/// Laplace–Beltrami operator `Ω^{-D} ∂_μ(Ω^{D-2} ∂_μ u)` by a flux-form
/// centred stencil of step `h`.
pub fn laplace_beltrami_fd<M, F>(metric: &M, x: &DVector<f64>, h: f64, mut u: F) -> Result<f64>
where
    M: ConformalFactor + ?Sized,
    F: FnMut(&DVector<f64>) -> Result<f64>,
{
    let d = metric.dim();
    let expo = (d as f64 - 2.0) / 2.0;
    let omega2 = admissible_omega2(metric, x)?;
    let u0 = u(x)?;
    let mut acc = 0.0;
    for mu in 0..d {
        let mut xp = x.clone();
        let mut xm = x.clone();
        let mut hp = x.clone();
        let mut hm = x.clone();
        xp[mu] += h;
        xm[mu] -= h;
        hp[mu] += 0.5 * h;
        hm[mu] -= 0.5 * h;
        let ap = admissible_omega2(metric, &hp)?.powf(expo);
        let am = admissible_omega2(metric, &hm)?.powf(expo);
        admissible_omega2(metric, &xp)?;
        admissible_omega2(metric, &xm)?;
        acc += ap * (u(&xp)? - u0) - am * (u0 - u(&xm)?);
    }
    Ok(acc / (h * h) / omega2.powf(d as f64 / 2.0))
}

fn admissible_omega2<M: ConformalFactor + ?Sized>(metric: &M, x: &DVector<f64>) -> Result<f64> {
    // jet() carries the admissibility check and the error payload
    Ok(metric.jet(x)?.omega2)
}

fn flat_laplacian_fd<F>(x: &DVector<f64>, h: f64, mut f: F) -> f64
where
    F: FnMut(&DVector<f64>) -> f64,
{
    let f0 = f(x);
    let mut acc = 0.0;
    for mu in 0..x.len() {
        let mut xp = x.clone();
        let mut xm = x.clone();
        xp[mu] += h;
        xm[mu] -= h;
        acc += f(&xp) - 2.0 * f0 + f(&xm);
    }
    acc / (h * h)
}

/// `(Δ_g − ξ_c R)[Ω^{(2-D)/2} f](x) − Ω^{-(D+2)/2}(Σ ∂²f)(x)` with stencils of
/// step `h`. Vanishes up to `O(h²)` truncation.
pub fn yamabe_covariance_residual<M, F>(metric: &M, f: F, x: &DVector<f64>, h: f64) -> Result<f64>
where
    M: ConformalFactor + ?Sized,
    F: Fn(&DVector<f64>) -> f64,
{
    let d = metric.dim();
    let w = conformal_weight(d);
    let jet = metric.jet(x)?;
    let weighted = |y: &DVector<f64>| -> Result<f64> { Ok(metric.jet(y)?.omega2.powf(w / 2.0) * f(y)) };
    let lb = laplace_beltrami_fd(metric, x, h, weighted)?;
    let curvature = weyl_curvature_term(&jet) * jet.omega.powf(w) * f(x);
    let flat = flat_laplacian_fd(x, h, &f);
    Ok(lb - curvature - jet.omega.powf(-(d as f64 + 2.0) / 2.0) * flat)
}

/// Uniform rectilinear grid; samples are stored row-major with the last axis
/// varying fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct RectGrid {
    pub origin: Vec<f64>,
    pub spacing: Vec<f64>,
    pub shape: Vec<usize>,
}

impl RectGrid {
    pub fn new(origin: Vec<f64>, spacing: Vec<f64>, shape: Vec<usize>) -> Result<Self> {
        if origin.len() != spacing.len() || origin.len() != shape.len() || origin.is_empty() {
            return Err(Error::InvalidParameter("grid origin, spacing and shape must agree".into()));
        }
        if spacing.iter().any(|h| !(*h > 0.0)) || shape.iter().any(|&n| n < 3) {
            return Err(Error::InvalidParameter("grid needs positive spacing and at least 3 nodes per axis".into()));
        }
        Ok(Self { origin, spacing, shape })
    }

    /// Cube `[lo, hi]^D` with `n` nodes per axis.
    pub fn cube(dim: usize, lo: f64, hi: f64, n: usize) -> Result<Self> {
        let h = (hi - lo) / (n as f64 - 1.0);
        Self::new(vec![lo; dim], vec![h; dim], vec![n; dim])
    }

    pub fn dim(&self) -> usize {
        self.shape.len()
    }

    pub fn len(&self) -> usize {
        self.shape.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn strides(&self) -> Vec<usize> {
        (0..self.dim()).map(|a| self.shape[a + 1..].iter().product()).collect()
    }

    pub fn multi_index(&self, mut flat: usize) -> Vec<usize> {
        let mut idx = vec![0; self.dim()];
        for a in (0..self.dim()).rev() {
            idx[a] = flat % self.shape[a];
            flat /= self.shape[a];
        }
        idx
    }

    pub fn point(&self, flat: usize) -> DVector<f64> {
        let idx = self.multi_index(flat);
        DVector::from_fn(self.dim(), |a, _| self.origin[a] + self.spacing[a] * idx[a] as f64)
    }

    pub fn is_interior(&self, flat: usize) -> bool {
        self.multi_index(flat)
            .iter()
            .zip(&self.shape)
            .all(|(&i, &n)| i > 0 && i + 1 < n)
    }

    /// Samples a function at every node.
    pub fn sample<F: FnMut(&DVector<f64>) -> f64>(&self, mut f: F) -> Vec<f64> {
        (0..self.len()).map(|k| f(&self.point(k))).collect()
    }
}

/// Residual fields of a flat Schrödinger solution and its conformal image.
#[derive(Debug, Clone, PartialEq)]
pub struct TransferReport {
    /// `−ħ²/(2M) Δψ + (V − E)ψ` at interior nodes (NaN elsewhere).
    pub flat_residual: Vec<f64>,
    /// `[ħ²(Δ_g − ξ_c R) − 1]φ` with `φ = Ω^{(2-D)/2} ψ` (NaN where masked).
    pub curved_residual: Vec<f64>,
    /// `φ` at every admissible node (NaN elsewhere).
    pub phi: Vec<f64>,
    /// Nodes where the curved residual was evaluated.
    pub mask: Vec<bool>,
    /// Interior nodes excluded because the stencil touches `Ω² ≤ δ_min`.
    pub masked_turning: usize,
    pub max_flat: f64,
    pub max_curved: f64,
}

/// Carries a flat-space solution `ψ` of `(p̂²/2M + V − E)ψ = 0`, sampled on
/// `grid`, over to the Maupertuis metric and evaluates the curved-space
/// residual there.
///
/// Fails if the flat residual exceeds `flat_tolerance`.
pub fn schrodinger_solution_transfer(
    potential: &Potential,
    energy: f64,
    grid: &RectGrid,
    psi: &[f64],
    flat_tolerance: f64,
) -> Result<TransferReport> {
    let d = potential.dim();
    if grid.dim() != d {
        return Err(Error::DimensionMismatch { expected: d, got: grid.dim() });
    }
    if psi.len() != grid.len() {
        return Err(Error::InvalidParameter(format!(
            "psi has {} samples, grid has {} nodes",
            psi.len(),
            grid.len()
        )));
    }
    let m = potential.mass();
    let hbar = potential.hbar();
    let metric = MaupertuisMetric::new(potential.clone(), energy);
    let strides = grid.strides();
    let n = grid.len();

    let mut flat_residual = vec![f64::NAN; n];
    let mut max_flat = 0.0f64;
    for k in 0..n {
        if !grid.is_interior(k) {
            continue;
        }
        let mut lap = 0.0;
        for a in 0..d {
            let h = grid.spacing[a];
            lap += (psi[k + strides[a]] - 2.0 * psi[k] + psi[k - strides[a]]) / (h * h);
        }
        let v = potential.value(&grid.point(k))?;
        let r = -hbar * hbar / (2.0 * m) * lap + (v - energy) * psi[k];
        flat_residual[k] = r;
        max_flat = max_flat.max(r.abs());
    }
    if !(max_flat <= flat_tolerance) {
        return Err(Error::InvalidParameter(format!(
            "psi does not solve the flat Schrödinger equation: max residual {max_flat:e} > {flat_tolerance:e}"
        )));
    }

    let w = conformal_weight(d);
    let jets: Vec<Option<super::OmegaJet>> = (0..n).map(|k| metric.jet(&grid.point(k)).ok()).collect();
    let phi: Vec<f64> = jets
        .iter()
        .zip(psi)
        .map(|(j, p)| j.as_ref().map_or(f64::NAN, |j| j.omega.powf(w) * p))
        .collect();

    let expo = (d as f64 - 2.0) / 2.0;
    let mut curved_residual = vec![f64::NAN; n];
    let mut mask = vec![false; n];
    let mut masked_turning = 0;
    let mut max_curved = 0.0f64;
    'nodes: for k in 0..n {
        if !grid.is_interior(k) {
            continue;
        }
        let Some(jet) = jets[k].as_ref() else {
            masked_turning += 1;
            continue;
        };
        let x = grid.point(k);
        let mut flux = 0.0;
        for a in 0..d {
            let (kp, km) = (k + strides[a], k - strides[a]);
            if jets[kp].is_none() || jets[km].is_none() {
                masked_turning += 1;
                continue 'nodes;
            }
            let h = grid.spacing[a];
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[a] += 0.5 * h;
            xm[a] -= 0.5 * h;
            let ap = metric.omega_squared(&xp)?;
            let am = metric.omega_squared(&xm)?;
            if !(ap > 0.0 && am > 0.0) {
                masked_turning += 1;
                continue 'nodes;
            }
            flux += (ap.powf(expo) * (phi[kp] - phi[k]) - am.powf(expo) * (phi[k] - phi[km])) / (h * h);
        }
        let lb = flux / jet.omega2.powf(d as f64 / 2.0);
        let r = hbar * hbar * (lb - weyl_curvature_term(jet) * phi[k]) - phi[k];
        curved_residual[k] = r;
        mask[k] = true;
        max_curved = max_curved.max(r.abs());
    }

    Ok(TransferReport {
        flat_residual,
        curved_residual,
        phi,
        mask,
        masked_turning,
        max_flat,
        max_curved,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coupling_values() {
        assert_eq!(weyl_coupling(1), None);
        assert_eq!(weyl_coupling(2), Some(0.0));
        assert_eq!(weyl_coupling(3), Some(1.0 / 8.0));
        assert_eq!(weyl_coupling(4), Some(1.0 / 6.0));
        assert_eq!(conformal_weight(2), 0.0);
    }

    #[test]
    fn two_dimensions_weight_zero() {
        // in D = 2 the residual is Ω⁻²Δf − Δ_g f, and the stencils coincide
        let metric = MaupertuisMetric::new(Potential::quartic(2, 1.0).unwrap(), -1.0);
        let f = |y: &DVector<f64>| (y[0] * 1.3).sin() * (0.4 * y[1]).exp();
        let x = DVector::from_column_slice(&[0.4, -0.3]);
        let r = yamabe_covariance_residual(&metric, f, &x, 1e-3).unwrap();
        assert!(r.abs() < 1e-7, "{r}");
    }

    #[test]
    fn flat_space_polynomial() {
        let metric = MaupertuisMetric::new(Potential::constant(3, 1.0).unwrap(), 0.0);
        let f = |y: &DVector<f64>| y[0] * y[0] - 2.0 * y[1] * y[2] + y[2];
        let x = DVector::from_column_slice(&[0.2, 0.5, -0.1]);
        let r = yamabe_covariance_residual(&metric, f, &x, 1e-3).unwrap();
        assert!(r.abs() < 1e-10, "{r}");
    }

    #[test]
    fn grid_indexing() {
        let g = RectGrid::new(vec![0.0, 1.0], vec![0.5, 0.25], vec![3, 4]).unwrap();
        assert_eq!(g.len(), 12);
        assert_eq!(g.multi_index(7), vec![1, 3]);
        let p = g.point(7);
        assert_eq!((p[0], p[1]), (0.5, 1.75));
        assert!(!g.is_interior(7));
        assert!(g.is_interior(5));
    }
}
