//! Heat-kernel layer on the Maupertuis metric: DeWitt coefficients, the
//! Morette–van Vleck endpoint expansion, and the diagonal of the curved-space
//! resolvent.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};

use crate::dynamics::geodesic_boundary_value;
use crate::error::{Error, Result};
use crate::geometry::{christoffels, curvature_tensors, ricci_tensor_conformal, Christoffel, ConformalFactor, CurvaturePack};
use crate::potentials::Potential;
use crate::special::{gamma, is_gamma_pole};

/// `a₁ = (1/6 − ξ) R`
pub fn coefficient_a1(r: f64, xi: f64) -> f64 {
    (1.0 / 6.0 - xi) * r
}

/// `a₂ = (1/6)(1/5 − ξ) □R + ½(1/6 − ξ)² R² − R_{μν}R^{μν}/180 + R_{μνρσ}R^{μνρσ}/180`
pub fn coefficient_a2(pack: &CurvaturePack, xi: f64) -> f64 {
    let c = 1.0 / 6.0 - xi;
    (1.0 / 6.0) * (1.0 / 5.0 - xi) * pack.box_r + 0.5 * c * c * pack.r * pack.r - pack.ricci_sq / 180.0
        + pack.riemann_sq / 180.0
}

/// Coincidence limits of the first three heat-kernel coefficients for the
/// operator `½(−Δ + ξR + m²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeWittCoefficients {
    pub xi: f64,
    pub a0: f64,
    pub a1: f64,
    pub a2: f64,
    pub pack: CurvaturePack,
}

impl DeWittCoefficients {
    pub fn new(pack: CurvaturePack, xi: f64) -> Self {
        Self { xi, a0: 1.0, a1: coefficient_a1(pack.r, xi), a2: coefficient_a2(&pack, xi), pack }
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.a0, self.a1, self.a2]
    }
}

/// Proper-time integral `∫₀^∞ ds s^{n − D/2} e^{−m² s}`-type factor
/// `Γ(n + 1 − D/2) (m²)^{D/2 − n − 1}` multiplying `aₙ` on the diagonal.
pub fn proper_time_factor(n: usize, dim: usize, mass_squared: f64) -> Result<f64> {
    let arg = n as f64 + 1.0 - dim as f64 / 2.0;
    Ok(gamma(arg)? * mass_squared.powf(dim as f64 / 2.0 - n as f64 - 1.0))
}

/// `Σ aₙ Γ(n + 1 − D/2)(m²)^{D/2 − n − 1}` for the given coefficients.
pub fn heat_kernel_diagonal_sum(coeffs: &[f64], dim: usize, mass_squared: f64) -> Result<f64> {
    coeffs
        .iter()
        .enumerate()
        .map(|(n, a)| Ok(a * proper_time_factor(n, dim, mass_squared)?))
        .sum()
}

/// Curvature data at the endpoint of the van Vleck expansion, for a metric
/// `omega2 · δ` at that point.
#[derive(Debug, Clone, PartialEq)]
pub struct EndpointCurvature {
    pub dim: usize,
    pub omega2: f64,
    /// `R_{μν}`
    pub ricci: DMatrix<f64>,
    /// `R_{μν;ρ}`, index `(μ·D + ν)·D + ρ`
    pub ricci_grad: Vec<f64>,
    /// `R_{μν;ρτ}`, index `((μ·D + ν)·D + ρ)·D + τ`
    pub ricci_hess: Vec<f64>,
    /// `R_{αβγδ}` all lowered
    pub riemann: Vec<f64>,
}

impl EndpointCurvature {
    pub fn flat(dim: usize) -> Self {
        Self {
            dim,
            omega2: 1.0,
            ricci: DMatrix::zeros(dim, dim),
            ricci_grad: vec![0.0; dim.pow(3)],
            ricci_hess: vec![0.0; dim.pow(4)],
            riemann: vec![0.0; dim.pow(4)],
        }
    }

    /// Constant sectional curvature `k`: `R_{abcd} = k(g_ac g_bd − g_ad g_bc)`.
    pub fn maximally_symmetric(dim: usize, k: f64, omega2: f64) -> Self {
        let mut riemann = vec![0.0; dim.pow(4)];
        let g = |i: usize, j: usize| if i == j { omega2 } else { 0.0 };
        for a in 0..dim {
            for b in 0..dim {
                for c in 0..dim {
                    for d in 0..dim {
                        riemann[((a * dim + b) * dim + c) * dim + d] = k * (g(a, c) * g(b, d) - g(a, d) * g(b, c));
                    }
                }
            }
        }
        Self {
            dim,
            omega2,
            ricci: DMatrix::identity(dim, dim) * ((dim as f64 - 1.0) * k * omega2),
            ricci_grad: vec![0.0; dim.pow(3)],
            ricci_hess: vec![0.0; dim.pow(4)],
            riemann,
        }
    }

    /// Ricci from the closed conformal form, its covariant derivatives by
    /// nested centred differences (inner step `h`, outer `10 h`), Riemann from
    /// the finite-difference curl of the Christoffels.
    pub fn from_metric<M: ConformalFactor + ?Sized>(metric: &M, x: &DVector<f64>, h: f64) -> Result<Self> {
        let d = metric.dim();
        let tensors = curvature_tensors(metric, x, h)?;
        let jet = metric.jet(x)?;
        let gamma = christoffels(&jet);
        let ricci = ricci_tensor_conformal(&jet);
        let ricci_grad = ricci_gradient(metric, x, h)?;

        let outer = 10.0 * h;
        let mut ricci_hess = vec![0.0; d.pow(4)];
        for tau in 0..d {
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[tau] += outer;
            xm[tau] -= outer;
            let gp = ricci_gradient(metric, &xp, h)?;
            let gm = ricci_gradient(metric, &xm, h)?;
            for mu in 0..d {
                for nu in 0..d {
                    for rho in 0..d {
                        let idx3 = |a: usize, b: usize, c: usize| (a * d + b) * d + c;
                        let mut v = (gp[idx3(mu, nu, rho)] - gm[idx3(mu, nu, rho)]) / (2.0 * outer);
                        for k in 0..d {
                            v -= gamma.get(tau, mu, k) * ricci_grad[idx3(k, nu, rho)];
                            v -= gamma.get(tau, nu, k) * ricci_grad[idx3(mu, k, rho)];
                            v -= gamma.get(tau, rho, k) * ricci_grad[idx3(mu, nu, k)];
                        }
                        ricci_hess[idx3(mu, nu, rho) * d + tau] = v;
                    }
                }
            }
        }
        Ok(Self { dim: d, omega2: jet.omega2, ricci, ricci_grad, ricci_hess, riemann: tensors.riemann })
    }
}

/// `R_{μν;ρ} = ∂_ρ R_{μν} − Γ_{ρμ}^κ R_{κν} − Γ_{ρν}^κ R_{μκ}`.
fn ricci_gradient<M: ConformalFactor + ?Sized>(metric: &M, x: &DVector<f64>, h: f64) -> Result<Vec<f64>> {
    let d = metric.dim();
    let jet = metric.jet(x)?;
    let gamma: Christoffel = christoffels(&jet);
    let ricci = ricci_tensor_conformal(&jet);
    let mut out = vec![0.0; d.pow(3)];
    for rho in 0..d {
        let mut xp = x.clone();
        let mut xm = x.clone();
        xp[rho] += h;
        xm[rho] -= h;
        let rp = ricci_tensor_conformal(&metric.jet(&xp)?);
        let rm = ricci_tensor_conformal(&metric.jet(&xm)?);
        for mu in 0..d {
            for nu in 0..d {
                let mut v = (rp[(mu, nu)] - rm[(mu, nu)]) / (2.0 * h);
                for k in 0..d {
                    v -= gamma.get(rho, mu, k) * ricci[(k, nu)];
                    v -= gamma.get(rho, nu, k) * ricci[(mu, k)];
                }
                out[(mu * d + nu) * d + rho] = v;
            }
        }
    }
    Ok(out)
}

/// The three orders of the truncated van Vleck series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VanVleckTerms {
    /// `(1/12) R_{μν} σ^μ σ^ν`
    pub quadratic: f64,
    /// `−(1/24) R_{μν;ρ} σ^μ σ^ν σ^ρ`
    pub cubic: f64,
    /// `(R_{μν}R_{ρτ}/288 + R^α_μ^β_ν R_{αρβτ}/360 + R_{μν;ρτ}/80) σ^μ σ^ν σ^ρ σ^τ`
    pub quartic: f64,
}

impl VanVleckTerms {
    pub fn total(&self) -> f64 {
        1.0 + self.quadratic + self.cubic + self.quartic
    }
}

/// Terms of `Δ_MV^{1/2} = 1 + (1/12)R_{μν}σ^μσ^ν − (1/24)R_{μν;ρ}σ^μσ^νσ^ρ + …`
/// for the endpoint vector `σ^μ`.
pub fn mv_sqrt_terms(sigma: &DVector<f64>, curv: &EndpointCurvature) -> VanVleckTerms {
    let d = curv.dim;
    let s = sigma;
    let ric_ss = (s.transpose() * &curv.ricci * s)[(0, 0)];

    let mut cubic = 0.0;
    let mut hess4 = 0.0;
    for mu in 0..d {
        for nu in 0..d {
            for rho in 0..d {
                let w3 = s[mu] * s[nu] * s[rho];
                cubic += curv.ricci_grad[(mu * d + nu) * d + rho] * w3;
                for tau in 0..d {
                    hess4 += curv.ricci_hess[((mu * d + nu) * d + rho) * d + tau] * w3 * s[tau];
                }
            }
        }
    }

    // R^α_μ^β_ν σ^μ σ^ν R_{αρβτ} σ^ρ σ^τ = g^{αα'} g^{ββ'} M_{αβ} M_{α'β'}
    // with M_{αβ} = R_{αμβν} σ^μ σ^ν
    let mut m = DMatrix::zeros(d, d);
    for a in 0..d {
        for b in 0..d {
            let mut acc = 0.0;
            for mu in 0..d {
                for nu in 0..d {
                    acc += curv.riemann[((a * d + mu) * d + b) * d + nu] * s[mu] * s[nu];
                }
            }
            m[(a, b)] = acc;
        }
    }
    let riem4 = m.iter().map(|v| v * v).sum::<f64>() / (curv.omega2 * curv.omega2);

    VanVleckTerms {
        quadratic: ric_ss / 12.0,
        cubic: -cubic / 24.0,
        quartic: ric_ss * ric_ss / 288.0 + riem4 / 360.0 + hess4 / 80.0,
    }
}

/// Endpoint expansion of `Δ_MV^{1/2}` through quartic order.
pub fn mv_sqrt_expansion(sigma: &DVector<f64>, curv: &EndpointCurvature) -> f64 {
    mv_sqrt_terms(sigma, curv).total()
}

/// Direct numerical evaluation of the van Vleck determinant.
#[derive(Debug, Clone, PartialEq)]
pub struct VanVleckNumeric {
    /// `Δ_MV^{1/2}(x, x')`
    pub sqrt_delta: f64,
    /// `σ^μ = g^{μν} ∂σ/∂x^ν` at the endpoint `x`.
    pub sigma_vector: DVector<f64>,
    /// Geodetic interval `σ(x, x')`.
    pub sigma: f64,
}

/// `Δ_MV = det(−∂_μ ∂'_ν σ) / (√g(x) √g(x'))` with `σ` from two-point geodesic
/// solves and the mixed derivatives from a four-point stencil of step `h`,
/// Richardson-extrapolated against step `h/2`.
pub fn van_vleck_numeric<M: ConformalFactor + ?Sized>(
    metric: &M,
    x: &DVector<f64>,
    x_prime: &DVector<f64>,
    h: f64,
    tol: f64,
) -> Result<VanVleckNumeric> {
    let d = metric.dim();
    let bridge = geodesic_boundary_value(metric, x, x_prime, tol)?;
    let sigma_at = |a: &DVector<f64>, b: &DVector<f64>| -> Result<f64> {
        Ok(geodesic_boundary_value(metric, a, b, tol)?.sigma)
    };
    let mixed = |step: f64| -> Result<DMatrix<f64>> {
        let mut out = DMatrix::zeros(d, d);
        for mu in 0..d {
            for nu in 0..d {
                let shift = |v: &DVector<f64>, i: usize, s: f64| {
                    let mut w = v.clone();
                    w[i] += s;
                    w
                };
                let pp = sigma_at(&shift(x, mu, step), &shift(x_prime, nu, step))?;
                let pm = sigma_at(&shift(x, mu, step), &shift(x_prime, nu, -step))?;
                let mp = sigma_at(&shift(x, mu, -step), &shift(x_prime, nu, step))?;
                let mm = sigma_at(&shift(x, mu, -step), &shift(x_prime, nu, -step))?;
                out[(mu, nu)] = (pp - pm - mp + mm) / (4.0 * step * step);
            }
        }
        Ok(out)
    };
    let coarse = mixed(h)?;
    let fine = mixed(0.5 * h)?;
    let dd = (fine * 4.0 - coarse) / 3.0;
    let det = (-dd).determinant();
    let g = metric.omega_squared(x)?.powf(d as f64 / 2.0);
    let gp = metric.omega_squared(x_prime)?.powf(d as f64 / 2.0);
    let delta = det / (g * gp);
    if !(delta > 0.0) {
        return Err(Error::BoundaryValue(format!("non-positive van Vleck determinant {delta:e}")));
    }
    Ok(VanVleckNumeric { sqrt_delta: delta.sqrt(), sigma_vector: -bridge.initial_velocity, sigma: bridge.sigma })
}

/// One term `coefficient · Γ(gamma_arg) · (V − E)^power` of the diagonal
/// resolvent, kept unevaluated so the Gamma factor can be continued.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResolventTerm {
    pub index: usize,
    pub coefficient: f64,
    pub gamma_arg: f64,
    pub power: f64,
}

impl ResolventTerm {
    pub fn evaluate(&self, v_minus_e: f64) -> Result<f64> {
        if self.coefficient == 0.0 {
            return Ok(0.0);
        }
        Ok(self.coefficient * gamma(self.gamma_arg)? * v_minus_e.powf(self.power))
    }
}

/// The printed terms of `⟨x|R̂|x⟩` on the Maupertuis metric, with the
/// Weyl coupling `ξ = (D−2)/(4(D−1))` and `m² = 1`:
///
/// `(M/2πħ²)^{D/2} [ Γ(1−D/2)(V−E)^{D/2} − (ħ²/12M) Γ(3−D/2) ∂²V (V−E)^{D/2−2}
///   + (ħ²/24M) Γ(4−D/2) (∂V)² (V−E)^{D/2−3} ]`, truncated after term `order`.
pub fn resolvent_terms(potential: &Potential, energy: f64, x: &DVector<f64>, order: usize) -> Result<(Vec<ResolventTerm>, f64)> {
    if order > 2 {
        return Err(Error::InvalidParameter(format!("resolvent order {order} > 2 is not available")));
    }
    let eval = potential.evaluate(x)?;
    let w = eval.value - energy;
    let half_d = potential.dim() as f64 / 2.0;
    let m = potential.mass();
    let hbar2 = potential.hbar().powi(2);
    let pref = (m / (2.0 * PI * hbar2)).powf(half_d);
    let all = [
        ResolventTerm { index: 0, coefficient: pref, gamma_arg: 1.0 - half_d, power: half_d },
        ResolventTerm {
            index: 1,
            coefficient: -pref * hbar2 / (12.0 * m) * eval.laplacian(),
            gamma_arg: 3.0 - half_d,
            power: half_d - 2.0,
        },
        ResolventTerm {
            index: 2,
            coefficient: pref * hbar2 / (24.0 * m) * eval.grad_squared(),
            gamma_arg: 4.0 - half_d,
            power: half_d - 3.0,
        },
    ];
    Ok((all[..=order].to_vec(), w))
}

/// Per-term values of the diagonal resolvent.
#[derive(Debug, Clone, PartialEq)]
pub struct ResolventBreakdown {
    pub terms: Vec<f64>,
    pub total: f64,
    pub v_minus_e: f64,
}

/// Diagonal resolvent `⟨x|R̂|x⟩` on the positive-metric side `V(x) > E`.
pub fn resolvent_diagonal(potential: &Potential, energy: f64, x: &DVector<f64>, order: usize) -> Result<ResolventBreakdown> {
    let (terms, w) = resolvent_terms(potential, energy, x, order)?;
    if !(w > 0.0) {
        return Err(Error::WrongSide(format!(
            "resolvent expansion needs V(x) > E (got V - E = {w:e}); \
             use density::density_from_resolvent for the classically allowed side"
        )));
    }
    for t in &terms {
        if is_gamma_pole(t.gamma_arg) {
            return Err(Error::GammaPole { argument: t.gamma_arg });
        }
    }
    let values = terms.iter().map(|t| t.evaluate(w)).collect::<Result<Vec<_>>>()?;
    Ok(ResolventBreakdown { total: values.iter().sum(), terms: values, v_minus_e: w })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a1_vanishes_at_conformal_coupling() {
        for r in [-3.0, 0.0, 12.0, 1e5] {
            assert_eq!(coefficient_a1(r, 1.0 / 6.0), 0.0);
        }
        assert_eq!(coefficient_a1(12.0, 0.0), 2.0);
    }

    #[test]
    fn a2_on_sphere_pack() {
        let pack = CurvaturePack::maximally_symmetric(3, 12.0);
        assert_eq!((pack.ricci_sq, pack.riemann_sq), (48.0, 48.0));
        assert!(coefficient_a2(&pack, 1.0 / 6.0).abs() < 1e-14);
        assert!((coefficient_a2(&pack, 0.0) - 2.0).abs() < 1e-13);
        assert_eq!(coefficient_a2(&CurvaturePack::FLAT, 0.3), 0.0);
    }

    #[test]
    fn flat_expansion_is_one() {
        let s = DVector::from_column_slice(&[0.3, -1.2, 0.7]);
        assert_eq!(mv_sqrt_expansion(&s, &EndpointCurvature::flat(3)), 1.0);
        let sphere = EndpointCurvature::maximally_symmetric(3, 2.0, 2.0);
        assert_eq!(mv_sqrt_expansion(&DVector::zeros(3), &sphere), 1.0);
    }

    #[test]
    fn resolvent_free_term_only() {
        let pot = Potential::free(3);
        let x = DVector::from_column_slice(&[0.1, 0.2, 0.3]);
        let r = resolvent_diagonal(&pot, -1.0, &x, 2).unwrap();
        assert_eq!(r.terms[1], 0.0);
        assert_eq!(r.terms[2], 0.0);
        let want = (1.0 / (2.0 * PI)).powf(1.5) * gamma(-0.5).unwrap();
        assert!((r.terms[0] - want).abs() < 1e-15);
    }

    #[test]
    fn resolvent_even_dimension_pole() {
        let pot = Potential::free(2);
        let x = DVector::from_column_slice(&[0.0, 0.0]);
        assert!(matches!(resolvent_diagonal(&pot, -1.0, &x, 0), Err(Error::GammaPole { argument }) if argument == 0.0));
    }

    #[test]
    fn resolvent_wrong_side() {
        let pot = Potential::harmonic(3, 1.0).unwrap();
        let x = DVector::from_column_slice(&[0.1, 0.0, 0.0]);
        assert!(matches!(resolvent_diagonal(&pot, 1.0, &x, 0), Err(Error::WrongSide(_))));
    }

    #[test]
    fn proper_time_factor_at_unit_mass() {
        // Γ(1 − 3/2) = −2√π
        let f = proper_time_factor(0, 3, 1.0).unwrap();
        assert!((f + 2.0 * PI.sqrt()).abs() < 1e-14);
        assert!(proper_time_factor(1, 4, 1.0).is_err());
    }
}
