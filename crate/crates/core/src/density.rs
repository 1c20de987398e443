//! Semiclassical local density of states on the classically allowed side,
//! obtained from the positive-metric resolvent by continuation across the
//! turning surface.

use std::f64::consts::PI;
use std::io::Write;

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::dewitt::resolvent_terms;
use crate::report::fmt17;
use crate::error::{Error, Result};
use crate::geometry::{ricci_scalar_fd, HydrogenMomentumMetric};
use crate::potentials::{Potential, PotentialEval};
use crate::quadrature::{integrate_sine_substitution, GaussLegendre};
use crate::special::{gamma, is_gamma_pole, rgamma, sin_pi};

/// Fraction of `E − V_min` below which `|E − V|` counts as near-turning.
pub const DEFAULT_TURNING_FRACTION: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    Allowed,
    Forbidden,
    NearTurning,
}

impl Regime {
    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::Allowed => "allowed",
            Regime::Forbidden => "forbidden",
            Regime::NearTurning => "near-turning",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityBreakdown {
    pub x: DVector<f64>,
    pub energy: f64,
    /// `(order index, value)` for each included term.
    pub terms: Vec<(usize, f64)>,
    pub total: f64,
    pub regime: Regime,
    /// Magnitude of the last included term.
    pub truncation_estimate: f64,
}

impl DensityBreakdown {
    pub fn term(&self, index: usize) -> f64 {
        self.terms.iter().find(|(i, _)| *i == index).map_or(0.0, |(_, v)| *v)
    }

    fn from_terms(x: &DVector<f64>, energy: f64, terms: Vec<(usize, f64)>, regime: Regime) -> Self {
        let total = terms.iter().map(|(_, v)| v).sum();
        let truncation_estimate = terms.last().map_or(0.0, |(_, v)| v.abs());
        Self { x: x.clone(), energy, terms, total, regime, truncation_estimate }
    }
}

/// Default turning threshold `0.05 (E − V_min)` for a potential.
pub fn default_turning_threshold(potential: &Potential, energy: f64) -> f64 {
    let vmin = potential.minimum();
    if vmin.is_finite() {
        DEFAULT_TURNING_FRACTION * (energy - vmin).abs()
    } else {
        0.0
    }
}

fn check_order(order: usize) -> Result<()> {
    if order > 2 {
        return Err(Error::InvalidParameter(format!("density order {order} > 2 is not available")));
    }
    Ok(())
}

fn allowed_side(potential: &Potential, energy: f64, x: &DVector<f64>, threshold: f64) -> Result<(PotentialEval, f64, Regime)> {
    let eval = potential.evaluate(x)?;
    let u = energy - eval.value;
    if !(u > 0.0) {
        return Err(Error::WrongSide(format!(
            "density expansion needs E > V(x) (got E - V = {u:e}); \
             use dewitt::resolvent_diagonal on the positive-metric side"
        )));
    }
    let regime = if u < threshold { Regime::NearTurning } else { Regime::Allowed };
    Ok((eval, u, regime))
}

/// `(M/2πħ²)^{D/2} [ u^{D/2−1}/Γ(D/2) − (ħ²/12M) u^{D/2−3} ∂²V / Γ(D/2−2)
///   + (ħ²/24M) u^{D/2−4} (∂V)² / Γ(D/2−3) ]` with `u = E − V(x)`.
pub fn semiclassical_density(
    potential: &Potential,
    energy: f64,
    x: &DVector<f64>,
    order: usize,
    threshold: Option<f64>,
) -> Result<DensityBreakdown> {
    check_order(order)?;
    let threshold = threshold.unwrap_or_else(|| default_turning_threshold(potential, energy));
    let (eval, u, regime) = allowed_side(potential, energy, x, threshold)?;
    let half_d = potential.dim() as f64 / 2.0;
    let m = potential.mass();
    let hbar2 = potential.hbar().powi(2);
    let pref = (m / (2.0 * PI * hbar2)).powf(half_d);
    let coeffs = [
        (1.0, rgamma(half_d), half_d - 1.0),
        (-hbar2 / (12.0 * m) * eval.laplacian(), rgamma(half_d - 2.0), half_d - 3.0),
        (hbar2 / (24.0 * m) * eval.grad_squared(), rgamma(half_d - 3.0), half_d - 4.0),
    ];
    let terms = coeffs[..=order]
        .iter()
        .enumerate()
        .map(|(i, &(c, rg, p))| (i, if c == 0.0 || rg == 0.0 { 0.0 } else { pref * c * rg * u.powf(p) }))
        .collect();
    Ok(DensityBreakdown::from_terms(x, energy, terms, regime))
}

/// The same density reached from the resolvent diagonal: each term
/// `c Γ(a) (V−E)^b` is divided by `2(V − E)`, continued to `V − E = e^{∓iπ}(E − V)`
/// on the two sides of the cut, and the discontinuity is taken. Where `Γ(a)`
/// has a pole the product `Γ(a) sin(πβ)` is replaced by its reflection limit.
pub fn density_from_resolvent(
    potential: &Potential,
    energy: f64,
    x: &DVector<f64>,
    order: usize,
    threshold: Option<f64>,
) -> Result<DensityBreakdown> {
    check_order(order)?;
    let threshold = threshold.unwrap_or_else(|| default_turning_threshold(potential, energy));
    let (_, u, regime) = allowed_side(potential, energy, x, threshold)?;
    let (resolvent, _) = resolvent_terms(potential, energy, x, order)?;

    let mut terms = Vec::with_capacity(resolvent.len());
    for t in resolvent {
        // divide by 2(V − E)
        let c = 0.5 * t.coefficient;
        let beta = t.power - 1.0;
        if c == 0.0 {
            terms.push((t.index, 0.0));
            continue;
        }
        // (V−E)^β on the two lips: u^β e^{∓iπβ}; only the imaginary parts differ
        let im_upper = -sin_pi(beta);
        let im_lower = sin_pi(beta);
        let disc_im = (im_upper - im_lower) * u.powf(beta);
        // Γ(a) · disc, with Γ(a) sin(πβ) continued through the poles
        let gamma_times_disc = if is_gamma_pole(t.gamma_arg) {
            // Γ(a) sin(πβ) → −π / Γ(1 − a) for β = −a
            let limit = -PI * rgamma(1.0 - t.gamma_arg);
            -2.0 * limit * u.powf(beta)
        } else {
            gamma(t.gamma_arg)? * disc_im
        };
        terms.push((t.index, c * gamma_times_disc / PI));
    }
    Ok(DensityBreakdown::from_terms(x, energy, terms, regime))
}

/// Evaluates the density over a list of points. Forbidden points are kept
/// with all terms zero (the power series carries no weight there).
pub fn density_sweep(
    potential: &Potential,
    energy: f64,
    points: &[DVector<f64>],
    order: usize,
    threshold: Option<f64>,
) -> Result<Vec<DensityBreakdown>> {
    points
        .iter()
        .map(|x| match semiclassical_density(potential, energy, x, order, threshold) {
            Err(Error::WrongSide(_)) => {
                let terms = (0..=order).map(|i| (i, 0.0)).collect();
                Ok(DensityBreakdown::from_terms(x, energy, terms, Regime::Forbidden))
            }
            other => other,
        })
        .collect()
}

/// CSV with columns `x0.., E, term0, term1, term2, total, regime`.
pub fn write_density_csv<W: Write>(rows: &[DensityBreakdown], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let dim = rows.first().map_or(0, |r| r.x.len());
    let mut header: Vec<String> = (0..dim).map(|i| format!("x{i}")).collect();
    header.extend(["E", "term0", "term1", "term2", "total", "regime"].map(String::from));
    w.write_record(&header)?;
    for r in rows {
        let mut rec: Vec<String> = r.x.iter().map(|v| fmt17(*v)).collect();
        rec.push(fmt17(r.energy));
        for i in 0..3 {
            rec.push(fmt17(r.term(i)));
        }
        rec.push(fmt17(r.total));
        rec.push(r.regime.as_str().to_string());
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

/// Quadrature controls for [`integrated_dos`].
#[derive(Debug, Clone, PartialEq)]
pub struct DosQuadrature {
    /// Gauss–Legendre nodes per panel.
    pub nodes: usize,
    /// Panels in the angular variable (1D) or per box axis (D > 1).
    pub panels: usize,
    /// Energy step for finite-part derivatives, as a fraction of `E − V_min`.
    pub energy_step: f64,
    /// 1D search interval for turning points.
    pub search: (f64, f64),
    /// Integration box `(lower, upper)`; required when D > 1.
    pub domain: Option<(Vec<f64>, Vec<f64>)>,
}

impl Default for DosQuadrature {
    fn default() -> Self {
        Self { nodes: 24, panels: 16, energy_step: 1e-2, search: (-1e3, 1e3), domain: None }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntegratedDos {
    pub energy: f64,
    pub terms: Vec<(usize, f64)>,
    pub total: f64,
    pub truncation_estimate: f64,
}

impl IntegratedDos {
    pub fn term(&self, index: usize) -> f64 {
        self.terms.iter().find(|(i, _)| *i == index).map_or(0.0, |(_, v)| *v)
    }
}

/// Spatial integral of the semiclassical density at energy `E`.
///
/// Terms with non-integrable powers of `E − V` at the turning points are
/// taken as Hadamard finite parts through
/// `u^p = ∂_E^k u^{p+k} / ((p+1)(p+2)…(p+k))` with the energy derivatives
/// taken by fourth-order differences.
pub fn integrated_dos(potential: &Potential, energy: f64, order: usize, quad: &DosQuadrature) -> Result<IntegratedDos> {
    check_order(order)?;
    let d = potential.dim();
    let half_d = d as f64 / 2.0;
    let m = potential.mass();
    let hbar2 = potential.hbar().powi(2);
    let pref = (m / (2.0 * PI * hbar2)).powf(half_d);
    let rule = GaussLegendre::new(quad.nodes);

    // (coefficient, power of u, spatial weight)
    type Weight = fn(&PotentialEval) -> f64;
    let specs: [(f64, f64, Weight); 3] = [
        (rgamma(half_d), half_d - 1.0, |_| 1.0),
        (-hbar2 / (12.0 * m) * rgamma(half_d - 2.0), half_d - 3.0, |e| e.laplacian()),
        (hbar2 / (24.0 * m) * rgamma(half_d - 3.0), half_d - 4.0, |e| e.grad_squared()),
    ];
    let min_power = if d == 1 { -0.5 } else { 0.0 };

    let vmin = potential.minimum();
    let scale = if vmin.is_finite() { (energy - vmin).abs() } else { energy.abs().max(1.0) };
    let de = quad.energy_step * scale;

    let mut terms = Vec::new();
    for (i, &(c, p, weight)) in specs[..=order].iter().enumerate() {
        if c == 0.0 {
            terms.push((i, 0.0));
            continue;
        }
        let mut k = 0usize;
        while p + (k as f64) < min_power - 1e-12 {
            k += 1;
        }
        let q = p + k as f64;
        let norm: f64 = (1..=k).map(|j| p + j as f64).product();
        let base = |e: f64| -> Result<f64> {
            if d == 1 {
                integrate_1d(potential, e, q, weight, &rule, quad)
            } else {
                integrate_box(potential, e, q, weight, &rule, quad)
            }
        };
        let value = match k {
            0 => base(energy)?,
            1 => (base(energy - 2.0 * de)? - 8.0 * base(energy - de)? + 8.0 * base(energy + de)? - base(energy + 2.0 * de)?) / (12.0 * de),
            2 => {
                (-base(energy - 2.0 * de)? + 16.0 * base(energy - de)? - 30.0 * base(energy)? + 16.0 * base(energy + de)?
                    - base(energy + 2.0 * de)?)
                    / (12.0 * de * de)
            }
            3 => {
                (base(energy - 3.0 * de)? - 8.0 * base(energy - 2.0 * de)? + 13.0 * base(energy - de)?
                    - 13.0 * base(energy + de)?
                    + 8.0 * base(energy + 2.0 * de)?
                    - base(energy + 3.0 * de)?)
                    / (8.0 * de * de * de)
            }
            _ => return Err(Error::Quadrature(format!("finite part of order {k} not supported"))),
        };
        terms.push((i, pref * c * value / norm));
    }
    let total = terms.iter().map(|(_, v)| v).sum();
    let truncation_estimate = terms.last().map_or(0.0, |(_, v): &(usize, f64)| v.abs());
    Ok(IntegratedDos { energy, terms, total, truncation_estimate })
}

/// Allowed intervals `{x : V(x) < E}` inside the search window, with their
/// ends refined by bisection.
pub fn allowed_intervals_1d(potential: &Potential, energy: f64, search: (f64, f64), samples: usize) -> Result<Vec<(f64, f64)>> {
    let (a, b) = search;
    let f = |x: f64| -> Result<f64> { Ok(energy - potential.value(&DVector::from_element(1, x))?) };
    let refine = |mut lo: f64, mut hi: f64| -> Result<f64> {
        // f(lo) and f(hi) have opposite signs
        let flo = f(lo)? > 0.0;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if (f(mid)? > 0.0) == flo {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(if flo { lo } else { hi })
    };
    let n = samples.max(2);
    let step = (b - a) / n as f64;
    let mut out = Vec::new();
    let mut prev_x = a;
    let mut prev_in = f(a)? > 0.0;
    let mut start = if prev_in { Some(a) } else { None };
    for i in 1..=n {
        let x = if i == n { b } else { a + step * i as f64 };
        let inside = f(x)? > 0.0;
        if inside != prev_in {
            let t = refine(prev_x, x)?;
            if inside {
                start = Some(t);
            } else if let Some(s) = start.take() {
                out.push((s, t));
            }
        }
        prev_x = x;
        prev_in = inside;
    }
    if let Some(s) = start {
        out.push((s, b));
    }
    Ok(out)
}

fn integrate_1d(
    potential: &Potential,
    energy: f64,
    power: f64,
    weight: fn(&PotentialEval) -> f64,
    rule: &GaussLegendre,
    quad: &DosQuadrature,
) -> Result<f64> {
    let (window, bounded) = match &quad.domain {
        Some((lo, hi)) => ((lo[0], hi[0]), true),
        None => (quad.search, false),
    };
    let intervals = allowed_intervals_1d(potential, energy, window, 20_000)?;
    let mut total = 0.0;
    let mut failure = None;
    for (a, b) in intervals {
        if !bounded && (a <= window.0 || b >= window.1) {
            return Err(Error::InvalidParameter(
                "classically allowed region is unbounded in the search window; supply an integration box".into(),
            ));
        }
        total += integrate_sine_substitution(rule, a, b, quad.panels, |x| {
            match potential.evaluate(&DVector::from_element(1, x)) {
                Ok(e) => {
                    let u = energy - e.value;
                    if u > 0.0 {
                        weight(&e) * u.powf(power)
                    } else {
                        0.0
                    }
                }
                Err(err) => {
                    failure.get_or_insert(err);
                    0.0
                }
            }
        });
    }
    match failure {
        Some(err) => Err(err),
        None => Ok(total),
    }
}

fn integrate_box(
    potential: &Potential,
    energy: f64,
    power: f64,
    weight: fn(&PotentialEval) -> f64,
    rule: &GaussLegendre,
    quad: &DosQuadrature,
) -> Result<f64> {
    let d = potential.dim();
    let (lo, hi) = quad.domain.as_ref().ok_or_else(|| {
        Error::InvalidParameter(format!("integrated density in D = {d} needs an explicit integration box"))
    })?;
    if lo.len() != d || hi.len() != d {
        return Err(Error::DimensionMismatch { expected: d, got: lo.len().min(hi.len()) });
    }
    // one-axis composite nodes
    let per_axis: Vec<Vec<(f64, f64)>> = (0..d)
        .map(|ax| {
            let step = (hi[ax] - lo[ax]) / quad.panels as f64;
            let mut pts = Vec::with_capacity(quad.panels * rule.nodes.len());
            for p in 0..quad.panels {
                let a = lo[ax] + step * p as f64;
                for (x, w) in rule.nodes.iter().zip(&rule.weights) {
                    pts.push((a + 0.5 * step * (x + 1.0), 0.5 * step * w));
                }
            }
            pts
        })
        .collect();
    let count: usize = per_axis.iter().map(Vec::len).product();
    let mut total = 0.0;
    let mut x = DVector::zeros(d);
    for flat in 0..count {
        let mut rem = flat;
        let mut w = 1.0;
        for ax in (0..d).rev() {
            let n = per_axis[ax].len();
            let (xi, wi) = per_axis[ax][rem % n];
            rem /= n;
            x[ax] = xi;
            w *= wi;
        }
        let e = potential.evaluate(&x)?;
        let u = energy - e.value;
        if u > 0.0 {
            total += w * weight(&e) * u.powf(power);
        }
    }
    Ok(total)
}

/// Gaussian `exp(−s²/2η²)/(√(2π)η)` and its first three derivatives in `s`.
fn gaussian_derivative(k: usize, s: f64, eta: f64) -> f64 {
    let z = s / eta;
    let g = (-0.5 * z * z).exp() / ((2.0 * PI).sqrt() * eta);
    // probabilists' Hermite polynomials
    let he = match k {
        0 => 1.0,
        1 => z,
        2 => z * z - 1.0,
        3 => z * z * z - 3.0 * z,
        _ => unreachable!("derivative order checked by caller"),
    };
    let sign = if k % 2 == 1 { -1.0 } else { 1.0 };
    sign * he * g / eta.powi(k as i32)
}

/// The semiclassical density at `x` smeared in energy with a Gaussian of
/// width `eta`. Non-integrable powers of `E' − V` are handled as finite
/// parts by moving `k` energy derivatives onto the Gaussian.
pub fn smeared_semiclassical_density(potential: &Potential, energy: f64, x: &DVector<f64>, order: usize, eta: f64) -> Result<DensityBreakdown> {
    check_order(order)?;
    if !(eta > 0.0) {
        return Err(Error::InvalidParameter("smearing width must be positive".into()));
    }
    let eval = potential.evaluate(x)?;
    let v = eval.value;
    let half_d = potential.dim() as f64 / 2.0;
    let m = potential.mass();
    let hbar2 = potential.hbar().powi(2);
    let pref = (m / (2.0 * PI * hbar2)).powf(half_d);
    let specs = [
        (rgamma(half_d), half_d - 1.0),
        (-hbar2 / (12.0 * m) * eval.laplacian() * rgamma(half_d - 2.0), half_d - 3.0),
        (hbar2 / (24.0 * m) * eval.grad_squared() * rgamma(half_d - 3.0), half_d - 4.0),
    ];
    let rule = GaussLegendre::new(24);
    let upper = (energy + 12.0 * eta - v).max(0.0);
    let mut terms = Vec::new();
    for (i, &(c, p)) in specs[..=order].iter().enumerate() {
        if c == 0.0 || upper == 0.0 {
            terms.push((i, 0.0));
            continue;
        }
        let mut k = 0usize;
        while p + (k as f64) < -0.5 - 1e-12 {
            k += 1;
        }
        let q = p + k as f64;
        let norm: f64 = (1..=k).map(|j| p + j as f64).product();
        // E' = V + t², dE' = 2t dt
        let t_max = upper.sqrt();
        let integral = rule.integrate_composite(0.0, t_max, 64, |t| {
            let ep = v + t * t;
            let jac = 2.0 * t;
            let u_pow = if t == 0.0 { 0.0 } else { (t * t).powf(q) * jac };
            u_pow * gaussian_derivative(k, energy - ep, eta)
        });
        terms.push((i, pref * c * integral / norm));
    }
    let regime = if energy > v { Regime::Allowed } else { Regime::Forbidden };
    Ok(DensityBreakdown::from_terms(x, energy, terms, regime))
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Momentum-space hydrogen problem at `p_E`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HydrogenReport {
    pub dim: usize,
    pub p_e: f64,
    /// `R = 2D(D−1)p_E²`
    pub ricci_scalar: f64,
    /// Coefficient of `R` appearing in the momentum-space equation, `1/(2D(D−1))`.
    pub xi_operator: f64,
    /// Conformal coupling `(D−2)/(4(D−1))`.
    pub xi_weyl: f64,
    /// `R/(2D(D−1))`, the term actually subtracted (equal to `p_E²`).
    pub subtraction_actual: f64,
    /// `(D−2)R/(8(D−1))`, the Weyl-invariant subtraction with the ½ of `½Δ`.
    pub subtraction_weyl: f64,
    /// Human-readable comparison, e.g. `(D-2)R/8(D-1) = R/16`.
    pub weyl_statement: String,
    /// Sample points and the finite-difference curvature found there.
    pub fd_points: Vec<(Vec<f64>, f64)>,
    pub max_relative_fd_error: f64,
}

/// Builds the report and checks the curvature by finite differences at
/// `samples` seeded random momenta.
pub fn hydrogen_momentum_case(dim: usize, p_e: f64, samples: usize, seed: u64, h: f64) -> Result<HydrogenReport> {
    let metric = HydrogenMomentumMetric::new(dim, p_e)?;
    let d = dim as f64;
    let r = metric.analytic_ricci_scalar();
    let xi_weyl = (d - 2.0) / (4.0 * (d - 1.0));
    let weyl_statement = {
        let (num, den) = (dim - 2, 8 * (dim - 1));
        let g = gcd(num, den);
        match (num / g, den / g) {
            (0, _) => "(D-2)R/8(D-1) = 0".to_string(),
            (1, q) => format!("(D-2)R/8(D-1) = R/{q}"),
            (p, q) => format!("(D-2)R/8(D-1) = {p}R/{q}"),
        }
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut fd_points = Vec::with_capacity(samples);
    let mut max_err: f64 = 0.0;
    for _ in 0..samples {
        let p: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0) * p_e).collect();
        let fd = ricci_scalar_fd(&metric, &DVector::from_column_slice(&p), h * p_e)?;
        max_err = max_err.max((fd - r).abs() / r.abs());
        fd_points.push((p, fd));
    }
    Ok(HydrogenReport {
        dim,
        p_e,
        ricci_scalar: r,
        xi_operator: 1.0 / (2.0 * d * (d - 1.0)),
        xi_weyl,
        subtraction_actual: r / (2.0 * d * (d - 1.0)),
        subtraction_weyl: xi_weyl * r / 2.0,
        weyl_statement,
        fd_points,
        max_relative_fd_error: max_err,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[f64]) -> DVector<f64> {
        DVector::from_column_slice(v)
    }

    #[test]
    fn free_gas_value() {
        let pot = Potential::free(3);
        let rho = semiclassical_density(&pot, 1.0, &p(&[0.0, 0.0, 0.0]), 2, None).unwrap();
        let want = 2f64.powf(1.5) / (4.0 * PI * PI);
        assert!((rho.total - want).abs() < 1e-15);
        assert_eq!((rho.term(1), rho.term(2)), (0.0, 0.0));
        assert_eq!(rho.regime, Regime::Allowed);
    }

    #[test]
    fn pipeline_matches_even_and_odd_dimensions() {
        for d in 1..=5 {
            let pot = Potential::quartic(d, 0.7).unwrap();
            let x = DVector::from_fn(d, |i, _| 0.3 - 0.1 * i as f64);
            let a = semiclassical_density(&pot, 2.0, &x, 2, None).unwrap();
            let b = density_from_resolvent(&pot, 2.0, &x, 2, None).unwrap();
            for i in 0..3 {
                let (va, vb) = (a.term(i), b.term(i));
                assert!((va - vb).abs() <= 1e-12 * va.abs().max(1e-300), "D={d} term {i}: {va} vs {vb}");
            }
        }
    }

    #[test]
    fn pole_terms_vanish() {
        let x = p(&[0.2, 0.1]);
        let pot = Potential::quartic(2, 1.0).unwrap();
        let r = semiclassical_density(&pot, 1.0, &x, 2, None).unwrap();
        assert_eq!((r.term(1), r.term(2)), (0.0, 0.0));
        let pot4 = Potential::quartic(4, 1.0).unwrap();
        let r4 = density_from_resolvent(&pot4, 1.0, &p(&[0.2, 0.1, 0.0, 0.3]), 2, None).unwrap();
        assert_eq!((r4.term(1), r4.term(2)), (0.0, 0.0));
        assert!(r4.term(0) > 0.0);
    }

    #[test]
    fn wrong_side_and_turning_flag() {
        let pot = Potential::harmonic(1, 1.0).unwrap();
        assert!(matches!(semiclassical_density(&pot, 0.5, &p(&[2.0]), 0, None), Err(Error::WrongSide(_))));
        let near = semiclassical_density(&pot, 0.5, &p(&[0.99]), 0, None).unwrap();
        assert_eq!(near.regime, Regime::NearTurning);
    }

    #[test]
    fn harmonic_counting() {
        let pot = Potential::harmonic(1, 1.0).unwrap();
        for e in [0.7, 5.5] {
            let dos = integrated_dos(&pot, e, 2, &DosQuadrature::default()).unwrap();
            assert!((dos.term(0) - 1.0).abs() < 1e-12, "{dos:?}");
            assert!(dos.term(1).abs() < 1e-6 && dos.term(2).abs() < 1e-6, "{dos:?}");
        }
    }

    #[test]
    fn unbounded_region_needs_box() {
        let pot = Potential::free(1);
        assert!(integrated_dos(&pot, 1.0, 0, &DosQuadrature::default()).is_err());
    }

    #[test]
    fn hydrogen_statement() {
        let rep = hydrogen_momentum_case(3, 1.0, 3, 7, 1e-4).unwrap();
        assert_eq!(rep.ricci_scalar, 12.0);
        assert_eq!(rep.weyl_statement, "(D-2)R/8(D-1) = R/16");
        assert!((rep.subtraction_weyl - 12.0 / 16.0).abs() < 1e-15);
        assert!((rep.xi_operator - 1.0 / 12.0).abs() < 1e-15);
        assert!(rep.max_relative_fd_error < 1e-5);
    }
}

