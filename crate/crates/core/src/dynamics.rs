//! Classical orbits two ways: Newton's equation in time, and geodesics of the
//! Maupertuis metric in invariant length.
//!
//! The two are related by `dl = 2|E − V| dt`. Geodesics are unchanged by
//! `g → −g`, so orbits in the classically allowed region are integrated on
//! the sign-flipped metric `2M(E − V) δ` (see [`Side::Allowed`]).

use std::io::Write;
use std::sync::Arc;

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::geometry::{ConformalFactor, MaupertuisMetric, Side, DEFAULT_DELTA_MIN};
use crate::ode::{DenseSolution, Dopri5, Termination};
use crate::potentials::Potential;
use crate::quadrature::GaussLegendre;
use crate::report::fmt17;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parameterization {
    NewtonianTime,
    InvariantLength,
    /// A path that is not a solution, e.g. a perturbed geodesic.
    Arbitrary,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectorySample {
    pub param: f64,
    pub position: DVector<f64>,
    pub velocity: DVector<f64>,
    /// Drift of the conserved quantity: `|E(t) − E(0)|` for Newtonian
    /// trajectories, `|g(ẋ, ẋ) − 1|` for geodesics.
    pub drift: f64,
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub samples: Vec<TrajectorySample>,
    pub parameterization: Parameterization,
    pub energy: f64,
    /// Set when the integration stopped before the requested end.
    pub stopped_early: Option<String>,
    dense: Option<DenseSolution>,
}

impl Trajectory {
    /// Builds a trajectory from explicit samples, without dense output.
    pub fn from_samples(samples: Vec<TrajectorySample>, parameterization: Parameterization, energy: f64) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::InvalidParameter("a trajectory needs at least two samples".into()));
        }
        if !samples.windows(2).all(|w| w[0].param < w[1].param) {
            return Err(Error::InvalidParameter("trajectory parameters must be strictly increasing".into()));
        }
        Ok(Self { samples, parameterization, energy, stopped_early: None, dense: None })
    }

    pub fn dim(&self) -> usize {
        self.samples[0].position.len()
    }

    pub fn start(&self) -> &TrajectorySample {
        &self.samples[0]
    }

    pub fn end(&self) -> &TrajectorySample {
        self.samples.last().expect("non-empty trajectory")
    }

    pub fn max_drift(&self) -> f64 {
        self.samples.iter().map(|s| s.drift).fold(0.0, f64::max)
    }

    /// Position and velocity at an intermediate parameter value, from the
    /// integrator's continuous output (or cubic Hermite interpolation of the
    /// samples when there is none).
    pub fn state_at(&self, param: f64) -> (DVector<f64>, DVector<f64>) {
        let d = self.dim();
        if let Some(dense) = &self.dense {
            let y = dense.eval(param);
            return (DVector::from_column_slice(&y[..d]), DVector::from_column_slice(&y[d..2 * d]));
        }
        let k = self
            .samples
            .partition_point(|s| s.param < param)
            .clamp(1, self.samples.len() - 1);
        hermite(&self.samples[k - 1], &self.samples[k], param)
    }

    /// Uniformly spaced samples over the trajectory's parameter range.
    pub fn resample(&self, n: usize) -> Vec<(f64, DVector<f64>, DVector<f64>)> {
        let (a, b) = (self.start().param, self.end().param);
        (0..n)
            .map(|i| {
                let s = a + (b - a) * i as f64 / (n as f64 - 1.0);
                let (x, v) = self.state_at(s);
                (s, x, v)
            })
            .collect()
    }

    /// CSV with columns `param, x0.., v0.., drift`.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let d = self.dim();
        let mut w = csv::Writer::from_writer(writer);
        let mut header = vec!["param".to_string()];
        header.extend((0..d).map(|i| format!("x{i}")));
        header.extend((0..d).map(|i| format!("v{i}")));
        header.push("drift".into());
        w.write_record(&header)?;
        for s in &self.samples {
            let mut row = vec![fmt17(s.param)];
            row.extend(s.position.iter().map(|&v| fmt17(v)));
            row.extend(s.velocity.iter().map(|&v| fmt17(v)));
            row.push(fmt17(s.drift));
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }
}


fn hermite(a: &TrajectorySample, b: &TrajectorySample, s: f64) -> (DVector<f64>, DVector<f64>) {
    let h = b.param - a.param;
    let t = (s - a.param) / h;
    let (t2, t3) = (t * t, t * t * t);
    let x = &a.position * (2.0 * t3 - 3.0 * t2 + 1.0)
        + &a.velocity * ((t3 - 2.0 * t2 + t) * h)
        + &b.position * (-2.0 * t3 + 3.0 * t2)
        + &b.velocity * ((t3 - t2) * h);
    let v = &a.position * ((6.0 * t2 - 6.0 * t) / h)
        + &a.velocity * (3.0 * t2 - 4.0 * t + 1.0)
        + &b.position * ((-6.0 * t2 + 6.0 * t) / h)
        + &b.velocity * (3.0 * t2 - 2.0 * t);
    (x, v)
}

fn split_state(y: &[f64], d: usize) -> (DVector<f64>, DVector<f64>) {
    (DVector::from_column_slice(&y[..d]), DVector::from_column_slice(&y[d..2 * d]))
}

/// Newton trajectory with the Maupertuis arc length `l(t) = ∫ 2(E − V) dt`
/// carried as an extra state component.
fn newton_dense(potential: &Potential, x0: &DVector<f64>, v0: &DVector<f64>, t_end: f64, tol: f64, stop_at_turning: bool) -> Result<(DenseSolution, f64)> {
    let d = potential.dim();
    if x0.len() != d || v0.len() != d {
        return Err(Error::DimensionMismatch { expected: d, got: x0.len().min(v0.len()) });
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter("tolerance must be positive".into()));
    }
    let m = potential.mass();
    let energy = 0.5 * m * v0.norm_squared() + potential.value(x0)?;
    let mut y0 = Vec::with_capacity(2 * d + 1);
    y0.extend(x0.iter());
    y0.extend(v0.iter());
    y0.push(0.0);

    let rhs = |_t: f64, y: &[f64], dy: &mut [f64]| -> bool {
        let x = DVector::from_column_slice(&y[..d]);
        let Ok(eval) = potential.evaluate(&x) else { return false };
        for i in 0..d {
            dy[i] = y[d + i];
            dy[d + i] = -eval.grad[i] / m;
        }
        dy[2 * d] = 2.0 * (energy - eval.value);
        true
    };
    let keep_going = |_t: f64, y: &[f64]| -> bool {
        if !stop_at_turning {
            return true;
        }
        let x = DVector::from_column_slice(&y[..d]);
        potential.value(&x).map(|v| 2.0 * m * (energy - v) > DEFAULT_DELTA_MIN).unwrap_or(false)
    };
    let sol = Dopri5::new(tol).integrate(rhs, 0.0, &y0, t_end, keep_going)?;
    if let Termination::Stopped { reason } = &sol.termination {
        if reason.starts_with("step size underflow") {
            let state = sol.y.last().cloned().unwrap_or_default();
            return Err(Error::Integration { parameter: sol.t_end(), state, reason: reason.clone() });
        }
    }
    Ok((sol, energy))
}

/// Integrates `M ẍ = −∇V` from `(x0, v0)` over `[0, t_end]` with local
/// tolerance `tol`.
pub fn newton_integrate(potential: &Potential, x0: &DVector<f64>, v0: &DVector<f64>, t_end: f64, tol: f64) -> Result<Trajectory> {
    let d = potential.dim();
    let m = potential.mass();
    let (sol, energy) = newton_dense(potential, x0, v0, t_end, tol, false)?;
    let samples = sol
        .t
        .iter()
        .zip(&sol.y)
        .map(|(&t, y)| {
            let (x, v) = split_state(y, d);
            let e = 0.5 * m * v.norm_squared() + potential.value(&x).unwrap_or(f64::NAN);
            TrajectorySample { param: t, position: x, velocity: v, drift: (e - energy).abs() }
        })
        .collect();
    let stopped_early = match &sol.termination {
        Termination::Completed => None,
        Termination::Stopped { reason } => Some(reason.clone()),
    };
    Ok(Trajectory { samples, parameterization: Parameterization::NewtonianTime, energy, stopped_early, dense: Some(sol) })
}

/// Rescales `direction` so that `g(u, u) = 1` at `x`.
pub fn unit_velocity<M: ConformalFactor + ?Sized>(metric: &M, x: &DVector<f64>, direction: &DVector<f64>) -> Result<DVector<f64>> {
    let jet = metric.jet(x)?;
    let n = direction.norm();
    if n == 0.0 {
        return Err(Error::InvalidParameter("direction must be non-zero".into()));
    }
    Ok(direction / (n * jet.omega))
}

/// `d²x/dl² = −Γ_{αβ}^δ ẋ^α ẋ^β` for `g = Ω² δ`, written out as
/// `−Ω⁻¹(2 ẋ (ẋ·∂Ω) − |ẋ|² ∂Ω)`.
fn geodesic_rhs<M: ConformalFactor + ?Sized>(metric: &M, d: usize, y: &[f64], dy: &mut [f64]) -> bool {
    let x = DVector::from_column_slice(&y[..d]);
    let Ok(jet) = metric.jet(&x) else { return false };
    let u = &y[d..2 * d];
    let udot: f64 = (0..d).map(|i| u[i] * jet.grad[i]).sum();
    let u2: f64 = u.iter().map(|v| v * v).sum();
    for i in 0..d {
        dy[i] = u[i];
        dy[d + i] = -(2.0 * u[i] * udot - u2 * jet.grad[i]) / jet.omega;
    }
    true
}

/// Geodesic acceleration `−Γ(u, u)` at `x`.
pub fn geodesic_acceleration<M: ConformalFactor + ?Sized>(metric: &M, x: &DVector<f64>, u: &DVector<f64>) -> Result<DVector<f64>> {
    let d = metric.dim();
    let mut y = Vec::with_capacity(2 * d);
    y.extend(x.iter());
    y.extend(u.iter());
    let mut dy = vec![0.0; 2 * d];
    if !geodesic_rhs(metric, d, &y, &mut dy) {
        // reproduce the underlying error
        metric.jet(x)?;
    }
    Ok(DVector::from_column_slice(&dy[d..]))
}

/// Integrates the geodesic equation in invariant length from `x0` with unit
/// velocity `u0` up to `l_end`. Stops early, with a flag, if the path
/// approaches the turning surface.
pub fn geodesic_integrate<M: ConformalFactor + ?Sized>(metric: &M, x0: &DVector<f64>, u0: &DVector<f64>, l_end: f64, tol: f64) -> Result<Trajectory> {
    let d = metric.dim();
    if x0.len() != d || u0.len() != d {
        return Err(Error::DimensionMismatch { expected: d, got: x0.len().min(u0.len()) });
    }
    let jet = metric.jet(x0)?;
    let norm = jet.omega2 * u0.norm_squared();
    if (norm - 1.0).abs() > 1e-8 {
        return Err(Error::InvalidParameter(format!("initial velocity must satisfy g(u, u) = 1, got {norm}")));
    }
    let mut y0 = Vec::with_capacity(2 * d);
    y0.extend(x0.iter());
    y0.extend(u0.iter());
    let sol = Dopri5::new(tol).integrate(|_, y, dy| geodesic_rhs(metric, d, y, dy), 0.0, &y0, l_end, |_, _| true)?;
    let samples = sol
        .t
        .iter()
        .zip(&sol.y)
        .map(|(&l, y)| {
            let (x, u) = split_state(y, d);
            let g = metric.omega_squared(&x).unwrap_or(f64::NAN);
            TrajectorySample { param: l, position: x, velocity: u.clone(), drift: (g * u.norm_squared() - 1.0).abs() }
        })
        .collect();
    let stopped_early = match &sol.termination {
        Termination::Completed => None,
        Termination::Stopped { reason } => Some(format!("approached the turning surface: {reason}")),
    };
    Ok(Trajectory {
        samples,
        parameterization: Parameterization::InvariantLength,
        energy: f64::NAN,
        stopped_early,
        dense: Some(sol),
    })
}

/// Eikonal `S = ∫ sqrt(g_{μν} dx^μ dx^ν)` along a trajectory.
///
/// Each step between samples is integrated with an 8-point Gauss–Legendre
/// rule on the integrator's continuous output (Hermite interpolation for
/// trajectories built from samples).
pub fn eikonal<M: ConformalFactor + ?Sized>(trajectory: &Trajectory, metric: &M) -> Result<f64> {
    for (index, s) in trajectory.samples.iter().enumerate() {
        if !(metric.omega_squared(&s.position)? > 0.0) {
            return Err(Error::ForbiddenSample { index, coordinate: s.position.iter().copied().collect() });
        }
    }
    let rule = GaussLegendre::new(8);
    let mut total = 0.0;
    for w in trajectory.samples.windows(2) {
        let (a, b) = (w[0].param, w[1].param);
        let mut err = None;
        total += rule.integrate(a, b, |s| {
            let (x, v) = match &trajectory.dense {
                Some(_) => trajectory.state_at(s),
                None => hermite(&w[0], &w[1], s),
            };
            match metric.omega_squared(&x) {
                Ok(g) if g > 0.0 => g.sqrt() * v.norm(),
                Ok(_) => {
                    err.get_or_insert(Error::ForbiddenRegion {
                        coordinate: x.iter().copied().collect(),
                        energy_minus_potential: f64::NAN,
                    });
                    0.0
                }
                Err(e) => {
                    err.get_or_insert(e);
                    0.0
                }
            }
        });
        if let Some(e) = err {
            return Err(e);
        }
    }
    Ok(total)
}

/// Displaces a geodesic along its normal bundle:
/// `x(l) + a · sin(kπ l/L) · P⊥(l) w` with `P⊥ = I − û ûᵀ`, sampled at `n`
/// uniform parameter values. Velocities are differentiated analytically.
pub fn perturb_normal<M: ConformalFactor + ?Sized>(
    geodesic: &Trajectory,
    metric: &M,
    w: &DVector<f64>,
    mode: usize,
    amplitude: f64,
    n: usize,
) -> Result<Trajectory> {
    let (a, b) = (geodesic.start().param, geodesic.end().param);
    let len = b - a;
    let k = mode.max(1) as f64 * std::f64::consts::PI / len;
    let mut samples = Vec::with_capacity(n);
    for (s, x, u) in geodesic.resample(n) {
        let acc = geodesic_acceleration(metric, &x, &u)?;
        let un = u.norm();
        let uh = &u / un;
        let uh_dot = (&acc - &uh * uh.dot(&acc)) / un;
        let pw = w - &uh * uh.dot(w);
        let pw_dot = -(&uh_dot * uh.dot(w) + &uh * uh_dot.dot(w));
        let phase = k * (s - a);
        let (eta, eta_dot) = (phase.sin(), k * phase.cos());
        samples.push(TrajectorySample {
            param: s,
            position: &x + &pw * (amplitude * eta),
            velocity: &u + (&pw * eta_dot + &pw_dot * eta) * amplitude,
            drift: 0.0,
        });
    }
    Trajectory::from_samples(samples, Parameterization::Arbitrary, geodesic.energy)
}

/// Outcome of comparing a Newtonian orbit with the corresponding geodesic.
#[derive(Debug, Clone, PartialEq)]
pub struct DeviationReport {
    /// Largest `|x_newton(t(l)) − x_geodesic(l)|` over the compared samples.
    pub max_deviation: f64,
    pub t_end: f64,
    pub l_end: f64,
    pub compared_samples: usize,
    /// Relative mismatch between `∫ 2(E − V) dt` and the metric arc length
    /// `∫ sqrt(2M(E − V)) |v| dt` along the Newtonian orbit.
    pub rate_mismatch: f64,
    pub newton_energy_drift: f64,
    pub geodesic_norm_drift: f64,
    /// The comparison was cut short by a turning point or an early stop.
    pub truncated: bool,
}

/// Reparameterises the Newtonian orbit by `dl = 2|E − V| dt` and measures its
/// pointwise distance from the geodesic with the same initial direction.
///
/// `v0` only fixes the initial direction; its magnitude is set by `energy`.
pub fn compare_geodesic_newton(
    potential: &Potential,
    energy: f64,
    x0: &DVector<f64>,
    v0: &DVector<f64>,
    t_span: f64,
    tol: f64,
) -> Result<DeviationReport> {
    let d = potential.dim();
    let m = potential.mass();
    let v_at = potential.value(x0)?;
    if !(energy > v_at) {
        return Err(Error::ForbiddenRegion { coordinate: x0.iter().copied().collect(), energy_minus_potential: energy - v_at });
    }
    let speed = (2.0 * (energy - v_at) / m).sqrt();
    let v0 = v0 / v0.norm() * speed;

    let (newton, _) = newton_dense(potential, x0, &v0, t_span, tol, true)?;
    let mut truncated = !matches!(newton.termination, Termination::Completed);
    let t_end = newton.t_end();
    let l_end = newton.y.last().expect("states")[2 * d];

    // arc length measured with the metric itself
    let rule = GaussLegendre::new(8);
    let mut metric_length = 0.0;
    for w in newton.t.windows(2) {
        metric_length += rule.integrate(w[0], w[1], |t| {
            let y = newton.eval(t);
            let (x, v) = split_state(&y, d);
            let gap = energy - potential.value(&x).unwrap_or(f64::NAN);
            (2.0 * m * gap.max(0.0)).sqrt() * v.norm()
        });
    }
    let rate_mismatch = if l_end > 0.0 { (metric_length - l_end).abs() / l_end } else { 0.0 };

    let metric = MaupertuisMetric::with_side(Arc::new(potential.clone()), energy, Side::Allowed);
    let u0 = unit_velocity(&metric, x0, &v0)?;
    let geo = geodesic_integrate(&metric, x0, &u0, l_end, tol)?;
    if geo.stopped_early.is_some() {
        truncated = true;
    }
    let l_max = geo.end().param.min(l_end);

    let n = 201;
    let mut max_dev = 0.0f64;
    for i in 0..n {
        let l = l_max * i as f64 / (n as f64 - 1.0);
        let t = invert_monotone(&newton, 2 * d, l, t_end);
        let y = newton.eval(t);
        let (xg, _) = geo.state_at(l);
        let dev = (DVector::from_column_slice(&y[..d]) - xg).norm();
        max_dev = max_dev.max(dev);
    }

    let newton_energy_drift = newton
        .y
        .iter()
        .map(|y| {
            let (x, v) = split_state(y, d);
            (0.5 * m * v.norm_squared() + potential.value(&x).unwrap_or(f64::NAN) - energy).abs()
        })
        .fold(0.0, f64::max);

    Ok(DeviationReport {
        max_deviation: max_dev,
        t_end,
        l_end,
        compared_samples: n,
        rate_mismatch,
        newton_energy_drift,
        geodesic_norm_drift: geo.max_drift(),
        truncated,
    })
}

/// Solves `y_k(t) = target` for a component that increases monotonically.
fn invert_monotone(sol: &DenseSolution, k: usize, target: f64, t_max: f64) -> f64 {
    let idx = sol.y.partition_point(|y| y[k] < target);
    let (mut lo, mut hi) = if idx == 0 {
        (0.0, 0.0)
    } else if idx >= sol.t.len() {
        (t_max, t_max)
    } else {
        (sol.t[idx - 1], sol.t[idx])
    };
    for _ in 0..200 {
        if hi - lo <= 1e-15 * hi.abs().max(1.0) {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if sol.eval(mid)[k] < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Result of the two-point geodesic problem.
#[derive(Debug, Clone, PartialEq)]
pub struct GeodesicBridge {
    /// Initial velocity of the affinely parameterised geodesic `x(0) = start`,
    /// `x(1) = end`.
    pub initial_velocity: DVector<f64>,
    /// Geodetic interval `σ = ½ g(u, u)` (half the squared geodesic distance).
    pub sigma: f64,
}

/// Small-separation boundary-value solve by Newton shooting.
pub fn geodesic_boundary_value<M: ConformalFactor + ?Sized>(
    metric: &M,
    start: &DVector<f64>,
    end: &DVector<f64>,
    tol: f64,
) -> Result<GeodesicBridge> {
    let d = metric.dim();
    let shoot = |u: &DVector<f64>| -> Result<DVector<f64>> {
        let mut y0 = Vec::with_capacity(2 * d);
        y0.extend(start.iter());
        y0.extend(u.iter());
        let sol = Dopri5::new(tol).integrate(|_, y, dy| geodesic_rhs(metric, d, y, dy), 0.0, &y0, 1.0, |_, _| true)?;
        if sol.termination != Termination::Completed {
            return Err(Error::BoundaryValue("shooting trajectory left the admissible region".into()));
        }
        Ok(DVector::from_column_slice(&sol.y.last().expect("states")[..d]))
    };

    let scale = (end - start).norm().max(1e-300);
    let mut u = end - start;
    for _ in 0..30 {
        let hit = shoot(&u)?;
        let miss = &hit - end;
        if miss.norm() <= 4.0 * f64::EPSILON * (start.norm() + scale) {
            break;
        }
        let mut jac = nalgebra::DMatrix::zeros(d, d);
        let du = 1e-6 * scale;
        for j in 0..d {
            let mut up = u.clone();
            let mut um = u.clone();
            up[j] += du;
            um[j] -= du;
            let col = (shoot(&up)? - shoot(&um)?) / (2.0 * du);
            jac.set_column(j, &col);
        }
        let step = jac
            .lu()
            .solve(&miss)
            .ok_or_else(|| Error::BoundaryValue("singular shooting Jacobian (conjugate point?)".into()))?;
        u -= &step;
        if step.norm() <= 1e-15 * u.norm() {
            break;
        }
    }
    let miss = (shoot(&u)? - end).norm();
    if miss > 1e-10 * scale {
        return Err(Error::BoundaryValue(format!("endpoint miss {miss:e}")));
    }
    let g = metric.omega_squared(start)?;
    Ok(GeodesicBridge { sigma: 0.5 * g * u.norm_squared(), initial_velocity: u })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &[f64]) -> DVector<f64> {
        DVector::from_column_slice(x)
    }

    #[test]
    fn free_particle_moves_linearly() {
        let pot = Potential::free(2);
        let traj = newton_integrate(&pot, &v(&[1.0, -1.0]), &v(&[0.5, 2.0]), 3.0, 1e-10).unwrap();
        let end = traj.end();
        assert!((end.position[0] - 2.5).abs() < 1e-12);
        assert!((end.position[1] - 5.0).abs() < 1e-12);
    }

    #[test]
    fn harmonic_cosine() {
        let pot = Potential::harmonic(1, 1.0).unwrap();
        let traj = newton_integrate(&pot, &v(&[1.0]), &v(&[0.0]), 10.0, 1e-9).unwrap();
        let err = traj
            .resample(500)
            .iter()
            .map(|(t, x, _)| (x[0] - t.cos()).abs())
            .fold(0.0, f64::max);
        assert!(err < 1e-8, "{err}");
    }

    #[test]
    fn constant_potential_geodesic_is_straight() {
        let metric = MaupertuisMetric::new(Potential::constant(2, 1.0).unwrap(), -1.0);
        let x0 = v(&[0.0, 0.0]);
        let u0 = unit_velocity(&metric, &x0, &v(&[3.0, 4.0])).unwrap();
        let traj = geodesic_integrate(&metric, &x0, &u0, 2.0, 1e-10).unwrap();
        let end = &traj.end().position;
        let expected = &u0 * 2.0;
        assert!((end - expected).norm() < 1e-12);
    }

    #[test]
    fn unnormalised_velocity_rejected() {
        let metric = MaupertuisMetric::new(Potential::constant(2, 1.0).unwrap(), -1.0);
        let err = geodesic_integrate(&metric, &v(&[0.0, 0.0]), &v(&[1.0, 0.0]), 1.0, 1e-8).unwrap_err();
        assert!(matches!(err, Error::InvalidParameter(_)));
    }

    #[test]
    fn eikonal_of_unit_factor_is_euclidean_length() {
        let pot = Potential::with_constants(2, 0.5, 1.0, crate::Family::Free).unwrap();
        // V = 0 here, so use E = -1 for Ω² = 2·0.5·(0 + 1) = 1
        let metric = MaupertuisMetric::new(pot, -1.0);
        let samples: Vec<_> = (0..50)
            .map(|i| {
                let s = i as f64 / 49.0;
                TrajectorySample { param: s, position: v(&[s, s * s]), velocity: v(&[1.0, 2.0 * s]), drift: 0.0 }
            })
            .collect();
        let traj = Trajectory::from_samples(samples, Parameterization::Arbitrary, -1.0).unwrap();
        let s = eikonal(&traj, &metric).unwrap();
        // arc length of y = x² on [0, 1]
        let want = 0.5 * 5f64.sqrt() + 0.25 * (2.0 + 5f64.sqrt()).ln();
        assert!((s - want).abs() < 1e-9, "{s} vs {want}");
    }

    #[test]
    fn eikonal_rejects_forbidden_samples() {
        let metric = MaupertuisMetric::new(Potential::harmonic(1, 1.0).unwrap(), 0.5);
        let samples = vec![
            TrajectorySample { param: 0.0, position: v(&[2.0]), velocity: v(&[-1.0]), drift: 0.0 },
            TrajectorySample { param: 1.5, position: v(&[0.5]), velocity: v(&[-1.0]), drift: 0.0 },
        ];
        let traj = Trajectory::from_samples(samples, Parameterization::Arbitrary, 0.5).unwrap();
        assert!(matches!(eikonal(&traj, &metric), Err(Error::ForbiddenSample { index: 1, .. })));
    }

    #[test]
    fn csv_export_has_header_and_rows() {
        let pot = Potential::harmonic(2, 1.0).unwrap();
        let traj = newton_integrate(&pot, &v(&[1.0, 0.0]), &v(&[0.0, 1.0]), 1.0, 1e-8).unwrap();
        let mut buf = Vec::new();
        traj.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "param,x0,x1,v0,v1,drift");
        assert_eq!(lines.count(), traj.samples.len());
    }
}
