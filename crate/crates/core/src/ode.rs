//! Dormand–Prince 5(4) integrator with continuous (dense) output.

use crate::error::{Error, Result};

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

/// Step-size control settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dopri5 {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
    pub h_min: f64,
    pub h_max: f64,
}

impl Dopri5 {
    pub fn new(tol: f64) -> Self {
        Self { rtol: tol, atol: tol, max_steps: 1_000_000, h_min: 1e-14, h_max: f64::INFINITY }
    }

    pub fn with_h_max(mut self, h_max: f64) -> Self {
        self.h_max = h_max;
        self
    }
}

/// Why an integration ended.
#[derive(Debug, Clone, PartialEq)]
pub enum Termination {
    Completed,
    /// The right-hand side left its domain or the stop predicate fired;
    /// the solution ends at the last good state.
    Stopped { reason: String },
}

#[derive(Debug, Clone)]
struct Segment {
    t0: f64,
    h: f64,
    coeffs: [Vec<f64>; 5],
}

/// Accepted steps plus the continuous extension between them.
#[derive(Debug, Clone)]
pub struct DenseSolution {
    pub t: Vec<f64>,
    pub y: Vec<Vec<f64>>,
    segments: Vec<Segment>,
    pub termination: Termination,
    pub rejected_steps: usize,
}

impl DenseSolution {
    pub fn t_start(&self) -> f64 {
        self.t[0]
    }

    pub fn t_end(&self) -> f64 {
        *self.t.last().expect("solution has at least one state")
    }

    /// State at `t`, clamped to the integrated span.
    pub fn eval(&self, t: f64) -> Vec<f64> {
        if self.segments.is_empty() {
            return self.y[0].clone();
        }
        let (a, b) = (self.t_start(), self.t_end());
        let t = t.clamp(a.min(b), a.max(b));
        let k = if b >= a {
            self.segments.partition_point(|s| s.t0 + s.h < t)
        } else {
            self.segments.partition_point(|s| s.t0 + s.h > t)
        }
        .min(self.segments.len() - 1);
        let seg = &self.segments[k];
        let th = (t - seg.t0) / seg.h;
        let th1 = 1.0 - th;
        let [r1, r2, r3, r4, r5] = &seg.coeffs;
        (0..r1.len())
            .map(|i| r1[i] + th * (r2[i] + th1 * (r3[i] + th * (r4[i] + th1 * r5[i]))))
            .collect()
    }
}

impl Dopri5 {
    /// Integrates `y' = f(t, y)` from `t0` to `t_end`.
    ///
    /// `f` returns `false` when `y` is outside its domain; the step is then
    /// shrunk, and if that fails the integration stops at the last accepted
    /// state. `keep_going` is checked after every accepted step.
    pub fn integrate<F, G>(&self, mut f: F, t0: f64, y0: &[f64], t_end: f64, mut keep_going: G) -> Result<DenseSolution>
    where
        F: FnMut(f64, &[f64], &mut [f64]) -> bool,
        G: FnMut(f64, &[f64]) -> bool,
    {
        let n = y0.len();
        let dir = if t_end >= t0 { 1.0 } else { -1.0 };
        let span = (t_end - t0).abs();
        let mut sol = DenseSolution {
            t: vec![t0],
            y: vec![y0.to_vec()],
            segments: Vec::new(),
            termination: Termination::Completed,
            rejected_steps: 0,
        };
        if span == 0.0 {
            return Ok(sol);
        }

        let mut t = t0;
        let mut y = y0.to_vec();
        let mut k1 = vec![0.0; n];
        if !f(t, &y, &mut k1) {
            return Err(Error::Integration {
                parameter: t,
                state: y,
                reason: "initial state outside the domain of the equations".into(),
            });
        }
        let (mut k2, mut k3, mut k4, mut k5, mut k6, mut k7) =
            (vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]);
        let mut ys = vec![0.0; n];
        let mut y1 = vec![0.0; n];

        let mut h = initial_step(self, &y, &k1, span).min(self.h_max);
        let mut steps = 0;
        let mut last_rejected = false;

        while (t_end - t) * dir > 0.0 {
            steps += 1;
            if steps > self.max_steps {
                return Err(Error::Integration { parameter: t, state: y, reason: "too many steps".into() });
            }
            if h < self.h_min * span.max(1.0) {
                sol.termination = Termination::Stopped {
                    reason: format!("step size underflow at t = {t}"),
                };
                return Ok(sol);
            }
            let hs = h.min((t_end - t).abs()) * dir;

            let ok = (|| {
                for i in 0..n {
                    ys[i] = y[i] + hs * A21 * k1[i];
                }
                if !f(t + C2 * hs, &ys, &mut k2) {
                    return false;
                }
                for i in 0..n {
                    ys[i] = y[i] + hs * (A31 * k1[i] + A32 * k2[i]);
                }
                if !f(t + C3 * hs, &ys, &mut k3) {
                    return false;
                }
                for i in 0..n {
                    ys[i] = y[i] + hs * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
                }
                if !f(t + C4 * hs, &ys, &mut k4) {
                    return false;
                }
                for i in 0..n {
                    ys[i] = y[i] + hs * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
                }
                if !f(t + C5 * hs, &ys, &mut k5) {
                    return false;
                }
                for i in 0..n {
                    ys[i] = y[i] + hs * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i]);
                }
                if !f(t + hs, &ys, &mut k6) {
                    return false;
                }
                for i in 0..n {
                    y1[i] = y[i] + hs * (A71 * k1[i] + A73 * k3[i] + A74 * k4[i] + A75 * k5[i] + A76 * k6[i]);
                }
                f(t + hs, &y1, &mut k7)
            })();

            if !ok {
                sol.rejected_steps += 1;
                h *= 0.25;
                last_rejected = true;
                continue;
            }

            let mut err = 0.0;
            for i in 0..n {
                let e = hs * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
                let sc = self.atol + self.rtol * y[i].abs().max(y1[i].abs());
                err += (e / sc).powi(2);
            }
            let err = (err / n as f64).sqrt();

            if err <= 1.0 {
                let ydiff: Vec<f64> = (0..n).map(|i| y1[i] - y[i]).collect();
                let bspl: Vec<f64> = (0..n).map(|i| hs * k1[i] - ydiff[i]).collect();
                let r4: Vec<f64> = (0..n).map(|i| ydiff[i] - hs * k7[i] - bspl[i]).collect();
                let r5: Vec<f64> = (0..n)
                    .map(|i| hs * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i]))
                    .collect();
                sol.segments.push(Segment { t0: t, h: hs, coeffs: [y.clone(), ydiff, bspl, r4, r5] });
                t += hs;
                y.copy_from_slice(&y1);
                k1.copy_from_slice(&k7);
                sol.t.push(t);
                sol.y.push(y.clone());

                if !keep_going(t, &y) {
                    sol.termination = Termination::Stopped { reason: format!("stop condition reached at t = {t}") };
                    return Ok(sol);
                }

                let mut fac = 0.9 * err.max(1e-10).powf(-0.2);
                fac = fac.clamp(0.2, 10.0);
                if last_rejected {
                    fac = fac.min(1.0);
                }
                h = (h * fac).min(self.h_max);
                last_rejected = false;
            } else {
                sol.rejected_steps += 1;
                h *= (0.9 * err.powf(-0.2)).max(0.2);
                last_rejected = true;
            }
        }
        Ok(sol)
    }
}

fn initial_step(cfg: &Dopri5, y: &[f64], dy: &[f64], span: f64) -> f64 {
    let mut d0 = 0.0;
    let mut d1 = 0.0;
    for i in 0..y.len() {
        let sc = cfg.atol + cfg.rtol * y[i].abs();
        d0 += (y[i] / sc).powi(2);
        d1 += (dy[i] / sc).powi(2);
    }
    let n = y.len() as f64;
    let (d0, d1) = ((d0 / n).sqrt(), (d1 / n).sqrt());
    let h = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    h.min(span)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_decay() {
        let sol = Dopri5::new(1e-10)
            .integrate(|_, y, dy| { dy[0] = -y[0]; true }, 0.0, &[1.0], 3.0, |_, _| true)
            .unwrap();
        assert_eq!(sol.termination, Termination::Completed);
        assert!((sol.y.last().unwrap()[0] - (-3f64).exp()).abs() < 1e-9);
        // dense output between steps
        for &t in &[0.123, 1.0, 2.71] {
            assert!((sol.eval(t)[0] - (-t).exp()).abs() < 1e-9, "t = {t}");
        }
    }

    #[test]
    fn backward_integration() {
        let sol = Dopri5::new(1e-10)
            .integrate(|_, y, dy| { dy[0] = y[1]; dy[1] = -y[0]; true }, 0.0, &[0.0, 1.0], -1.5, |_, _| true)
            .unwrap();
        let y = sol.y.last().unwrap();
        assert!((y[0] - (-1.5f64).sin()).abs() < 1e-9);
    }

    #[test]
    fn domain_exit_stops_early() {
        // y' = 1 from 0, domain y < 0.5
        let sol = Dopri5::new(1e-8)
            .integrate(|_, y, dy| { dy[0] = 1.0; y[0] < 0.5 }, 0.0, &[0.0], 1.0, |_, _| true)
            .unwrap();
        assert!(matches!(sol.termination, Termination::Stopped { .. }));
        assert!(sol.t_end() < 0.5 && sol.t_end() > 0.49);
    }
}
