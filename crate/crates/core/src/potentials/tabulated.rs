use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::PotentialEval;
use crate::error::{Error, Result};

/// Potential values on a rectilinear grid, interpolated by tensor-product
/// cubic Hermite polynomials.
///
/// Node slopes come from second-order finite differences of the data:
/// centred in the interior, one-sided at the first and last node of each
/// axis. `values` is stored row-major with the last axis varying fastest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TabulatedGrid {
    pub axes: Vec<Vec<f64>>,
    pub values: Vec<f64>,
}

/// Interpolation weights of one axis: node index plus value, first and
/// second derivative weights.
type AxisWeights = Vec<(usize, [f64; 3])>;

impl TabulatedGrid {
    pub fn new(axes: Vec<Vec<f64>>, values: Vec<f64>) -> Result<Self> {
        let grid = Self { axes, values };
        grid.validate(grid.axes.len())?;
        Ok(grid)
    }

    pub(crate) fn validate(&self, dim: usize) -> Result<()> {
        if self.axes.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: self.axes.len() });
        }
        for (a, axis) in self.axes.iter().enumerate() {
            if axis.len() < 3 {
                return Err(Error::InvalidParameter(format!(
                    "tabulated axis {a} needs at least 3 nodes"
                )));
            }
            if !axis.windows(2).all(|w| w[0] < w[1]) {
                return Err(Error::InvalidParameter(format!(
                    "tabulated axis {a} must be strictly increasing"
                )));
            }
        }
        let n: usize = self.axes.iter().map(Vec::len).product();
        if n != self.values.len() {
            return Err(Error::InvalidParameter(format!(
                "tabulated grid expects {n} values, got {}",
                self.values.len()
            )));
        }
        if self.values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("tabulated values must be finite".into()));
        }
        Ok(())
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub(crate) fn evaluate(&self, x: &DVector<f64>) -> Result<PotentialEval> {
        let d = self.axes.len();
        let mut per_axis: Vec<AxisWeights> = Vec::with_capacity(d);
        for (a, axis) in self.axes.iter().enumerate() {
            let xa = x[a];
            if !xa.is_finite() || xa < axis[0] || xa > axis[axis.len() - 1] {
                return Err(Error::Evaluation {
                    coordinate: x.iter().copied().collect(),
                    reason: format!("coordinate {a} outside tabulated range"),
                });
            }
            per_axis.push(axis_weights(axis, xa));
        }

        let strides: Vec<usize> = (0..d)
            .map(|a| self.axes[a + 1..].iter().map(Vec::len).product())
            .collect();

        let mut value = 0.0;
        let mut grad = DVector::zeros(d);
        let mut hess = DMatrix::zeros(d, d);

        // iterate the tensor product of per-axis supports
        let mut idx = vec![0usize; d];
        loop {
            let mut flat = 0;
            for a in 0..d {
                flat += per_axis[a][idx[a]].0 * strides[a];
            }
            let f = self.values[flat];
            let w = |a: usize, k: usize| per_axis[a][idx[a]].1[k];

            let mut base = 1.0;
            for a in 0..d {
                base *= w(a, 0);
            }
            value += base * f;
            for mu in 0..d {
                let mut gw = 1.0;
                for a in 0..d {
                    gw *= if a == mu { w(a, 1) } else { w(a, 0) };
                }
                grad[mu] += gw * f;
                for nu in mu..d {
                    let mut hw = 1.0;
                    for a in 0..d {
                        let order = usize::from(a == mu) + usize::from(a == nu);
                        hw *= w(a, order);
                    }
                    hess[(mu, nu)] += hw * f;
                }
            }

            // odometer increment
            let mut a = d;
            loop {
                if a == 0 {
                    for mu in 0..d {
                        for nu in 0..mu {
                            hess[(mu, nu)] = hess[(nu, mu)];
                        }
                    }
                    return Ok(PotentialEval { value, grad, hess });
                }
                a -= 1;
                idx[a] += 1;
                if idx[a] < per_axis[a].len() {
                    break;
                }
                idx[a] = 0;
            }
        }
    }
}

/// Weights `w_j(x)` such that the slope at node `j` is `Σ_k c_{jk} f_k`.
fn slope_stencil(axis: &[f64], j: usize) -> [(usize, f64); 3] {
    let n = axis.len();
    if j == 0 {
        let (h1, h2) = (axis[1] - axis[0], axis[2] - axis[1]);
        let s = h1 + h2;
        [
            (0, -(2.0 * h1 + h2) / (h1 * s)),
            (1, s / (h1 * h2)),
            (2, -h1 / (h2 * s)),
        ]
    } else if j == n - 1 {
        let (h1, h2) = (axis[n - 2] - axis[n - 3], axis[n - 1] - axis[n - 2]);
        let s = h1 + h2;
        [
            (n - 3, h2 / (h1 * s)),
            (n - 2, -s / (h1 * h2)),
            (n - 1, (2.0 * h2 + h1) / (h2 * s)),
        ]
    } else {
        let (hl, hr) = (axis[j] - axis[j - 1], axis[j + 1] - axis[j]);
        [
            (j - 1, -hr / (hl * (hl + hr))),
            (j, (hr - hl) / (hl * hr)),
            (j + 1, hl / (hr * (hl + hr))),
        ]
    }
}

fn axis_weights(axis: &[f64], x: f64) -> AxisWeights {
    let n = axis.len();
    let i = match axis.partition_point(|&a| a <= x) {
        0 => 0,
        p if p >= n => n - 2,
        p => p - 1,
    };
    let h = axis[i + 1] - axis[i];
    let t = (x - axis[i]) / h;

    // cubic Hermite basis and derivatives with respect to x
    let h00 = [
        2.0 * t.powi(3) - 3.0 * t * t + 1.0,
        (6.0 * t * t - 6.0 * t) / h,
        (12.0 * t - 6.0) / (h * h),
    ];
    let h10 = [
        (t.powi(3) - 2.0 * t * t + t) * h,
        3.0 * t * t - 4.0 * t + 1.0,
        (6.0 * t - 4.0) / h,
    ];
    let h01 = [
        -2.0 * t.powi(3) + 3.0 * t * t,
        (-6.0 * t * t + 6.0 * t) / h,
        (-12.0 * t + 6.0) / (h * h),
    ];
    let h11 = [
        (t.powi(3) - t * t) * h,
        3.0 * t * t - 2.0 * t,
        (6.0 * t - 2.0) / h,
    ];

    let mut out: AxisWeights = Vec::with_capacity(4);
    let mut add = |node: usize, w: [f64; 3]| {
        if let Some(entry) = out.iter_mut().find(|(k, _)| *k == node) {
            for k in 0..3 {
                entry.1[k] += w[k];
            }
        } else {
            out.push((node, w));
        }
    };
    add(i, h00);
    add(i + 1, h01);
    for (node, c) in slope_stencil(axis, i) {
        add(node, [h10[0] * c, h10[1] * c, h10[2] * c]);
    }
    for (node, c) in slope_stencil(axis, i + 1) {
        add(node, [h11[0] * c, h11[1] * c, h11[2] * c]);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid_1d(f: impl Fn(f64) -> f64, nodes: &[f64]) -> TabulatedGrid {
        TabulatedGrid::new(vec![nodes.to_vec()], nodes.iter().map(|&x| f(x)).collect()).unwrap()
    }

    #[test]
    fn reproduces_quadratics_exactly() {
        // second-order slopes are exact for quadratics, so the Hermite
        // interpolant reproduces them everywhere
        let nodes: Vec<f64> = (0..9).map(|i| -2.0 + 0.5 * i as f64 + 0.03 * (i as f64).sin()).collect();
        let g = grid_1d(|x| 3.0 * x * x - x + 2.0, &nodes);
        for &x in &[-1.97, -0.3, 0.11, 1.7, 2.0] {
            let e = g.evaluate(&DVector::from_element(1, x)).unwrap();
            assert!((e.value - (3.0 * x * x - x + 2.0)).abs() < 1e-12);
            assert!((e.grad[0] - (6.0 * x - 1.0)).abs() < 1e-11);
            assert!((e.hess[(0, 0)] - 6.0).abs() < 1e-9);
        }
    }

    #[test]
    fn interpolates_node_values() {
        let axes = vec![vec![0.0, 1.0, 2.0, 3.0], vec![-1.0, 0.0, 1.0]];
        let values: Vec<f64> = (0..12).map(|k| (k as f64 * 0.7).sin()).collect();
        let g = TabulatedGrid::new(axes.clone(), values.clone()).unwrap();
        for (i, &x) in axes[0].iter().enumerate() {
            for (j, &y) in axes[1].iter().enumerate() {
                let e = g.evaluate(&DVector::from_column_slice(&[x, y])).unwrap();
                assert!((e.value - values[i * 3 + j]).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn outside_range_is_an_error() {
        let g = grid_1d(|x| x, &[0.0, 1.0, 2.0]);
        assert!(g.evaluate(&DVector::from_element(1, 2.5)).is_err());
    }

    #[test]
    fn rejects_malformed_grids() {
        assert!(TabulatedGrid::new(vec![vec![0.0, 1.0]], vec![0.0, 1.0]).is_err());
        assert!(TabulatedGrid::new(vec![vec![0.0, 2.0, 1.0]], vec![0.0; 3]).is_err());
        assert!(TabulatedGrid::new(vec![vec![0.0, 1.0, 2.0]], vec![0.0; 4]).is_err());
    }
}
