//! Gauss–Legendre rules and the endpoint-singular substitutions used for
//! integrals over classically allowed intervals.

use std::f64::consts::PI;

/// Nodes and weights of an `n`-point Gauss–Legendre rule on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss–Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            // Tricomi initial guess, then Newton on P_n
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    /// Integrates `f` over [a, b].
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut acc = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(mid + half * x);
        }
        acc * half
    }

    /// Composite rule with `panels` equal sub-intervals.
    pub fn integrate_composite<F: FnMut(f64) -> f64>(
        &self,
        a: f64,
        b: f64,
        panels: usize,
        mut f: F,
    ) -> f64 {
        let panels = panels.max(1);
        let step = (b - a) / panels as f64;
        (0..panels)
            .map(|k| {
                let lo = a + step * k as f64;
                self.integrate(lo, lo + step, &mut f)
            })
            .sum()
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Integrates `f` over an interval [a, b] whose integrand behaves like
/// `((x - a)(b - x))^(-1/2)` at both ends, using `x = c + r sin θ`.
///
/// The Jacobian `r cos θ` cancels the inverse square-root endpoint behaviour,
/// leaving a smooth integrand in θ.
pub fn integrate_sine_substitution<F: FnMut(f64) -> f64>(
    rule: &GaussLegendre,
    a: f64,
    b: f64,
    panels: usize,
    mut f: F,
) -> f64 {
    let c = 0.5 * (a + b);
    let r = 0.5 * (b - a);
    rule.integrate_composite(-0.5 * PI, 0.5 * PI, panels, |theta| {
        let jac = r * theta.cos();
        if jac == 0.0 {
            0.0
        } else {
            f(c + r * theta.sin()) * jac
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_for_polynomials() {
        let rule = GaussLegendre::new(6);
        // degree 11 is exact for 6 nodes
        let got = rule.integrate(-1.0, 2.0, |x| x.powi(11) - 3.0 * x.powi(4));
        let want = (2f64.powi(12) - 1.0) / 12.0 - 3.0 * (2f64.powi(5) + 1.0) / 5.0;
        assert!((got - want).abs() < 1e-11 * want.abs());
    }

    #[test]
    fn weights_sum_to_two() {
        for n in [1, 2, 5, 16, 64, 127] {
            let rule = GaussLegendre::new(n);
            let s: f64 = rule.weights.iter().sum();
            assert!((s - 2.0).abs() < 1e-13, "n = {n}: {s}");
            assert!(rule.nodes.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn sine_substitution_handles_inverse_sqrt() {
        let rule = GaussLegendre::new(32);
        // ∫_{-1}^{1} (1 - x²)^{-1/2} dx = π
        let got = integrate_sine_substitution(&rule, -1.0, 1.0, 1, |x| (1.0 - x * x).powf(-0.5));
        assert!((got - PI).abs() < 1e-12, "{got}");
    }
}
