//! Exact 1D reference spectrum: three-point finite-difference Hamiltonian
//! on a Dirichlet box, Sturm-sequence bisection for eigenvalues and inverse
//! iteration for eigenvectors.

use std::f64::consts::PI;
use std::io::Write;

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::report::fmt17;
use crate::error::{Error, Result};
use crate::potentials::Potential;

/// Relative wall amplitude above which a retained state counts as leaking.
pub const WALL_LEAKAGE_LIMIT: f64 = 1e-8;

/// Uniform grid of `n` interior points on `[x_min, x_max]`; the end points
/// carry the Dirichlet condition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1d {
    pub x_min: f64,
    pub x_max: f64,
    pub n: usize,
}

impl Grid1d {
    pub fn new(x_min: f64, x_max: f64, n: usize) -> Result<Self> {
        if !(x_max > x_min) || n < 3 {
            return Err(Error::InvalidParameter(format!("bad grid [{x_min}, {x_max}] with {n} points")));
        }
        Ok(Self { x_min, x_max, n })
    }

    pub fn spacing(&self) -> f64 {
        (self.x_max - self.x_min) / (self.n + 1) as f64
    }

    pub fn point(&self, i: usize) -> f64 {
        self.x_min + (i + 1) as f64 * self.spacing()
    }

    /// The grid with the spacing halved (`2n + 1` interior points).
    pub fn refined(&self) -> Self {
        Self { n: 2 * self.n + 1, ..*self }
    }
}

/// Symmetric tridiagonal matrix with constant off-diagonal.
struct Tridiagonal {
    diag: Vec<f64>,
    off: f64,
}

impl Tridiagonal {
    fn hamiltonian(potential: &Potential, grid: &Grid1d) -> Result<Self> {
        let dx = grid.spacing();
        let kin = potential.hbar().powi(2) / (potential.mass() * dx * dx);
        let diag = (0..grid.n)
            .map(|i| Ok(kin + potential.value(&DVector::from_element(1, grid.point(i)))?))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { diag, off: -0.5 * kin })
    }

    /// Number of eigenvalues strictly below `x`.
    fn count_below(&self, x: f64) -> usize {
        let e2 = self.off * self.off;
        let mut q = 1.0;
        let mut count = 0;
        for (i, d) in self.diag.iter().enumerate() {
            q = if i == 0 { d - x } else { d - x - e2 / q };
            if q == 0.0 {
                q = -f64::EPSILON * (d.abs() + self.off.abs());
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn bounds(&self) -> (f64, f64) {
        let r = 2.0 * self.off.abs();
        let lo = self.diag.iter().cloned().fold(f64::INFINITY, f64::min) - r;
        let hi = self.diag.iter().cloned().fold(f64::NEG_INFINITY, f64::max) + r;
        (lo, hi)
    }

    /// `k`-th smallest eigenvalue (0-based) by bisection.
    fn eigenvalue(&self, k: usize) -> f64 {
        let (mut lo, mut hi) = self.bounds();
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Solves `(T − λ) y = b` by Gaussian elimination with partial pivoting.
    fn shifted_solve(&self, lambda: f64, b: &[f64]) -> Vec<f64> {
        let n = self.diag.len();
        // rows hold (a, b, c) band entries after pivoting: u0 diag, u1, u2 upper
        let mut u0 = vec![0.0; n];
        let mut u1 = vec![0.0; n];
        let mut u2 = vec![0.0; n];
        let mut rhs = b.to_vec();
        let e = self.off;
        let tiny = f64::EPSILON * (self.bounds().1.abs() + self.bounds().0.abs());

        let mut cur_d = self.diag[0] - lambda;
        let mut cur_u = if n > 1 { e } else { 0.0 };
        let mut cur_u2 = 0.0;
        for i in 0..n {
            if i + 1 == n {
                u0[i] = if cur_d == 0.0 { tiny } else { cur_d };
                u1[i] = 0.0;
                u2[i] = 0.0;
                break;
            }
            let next_l = e;
            let next_d = self.diag[i + 1] - lambda;
            let next_u = if i + 2 < n { e } else { 0.0 };
            if cur_d.abs() >= next_l.abs() {
                let piv = if cur_d == 0.0 { tiny } else { cur_d };
                let m = next_l / piv;
                u0[i] = piv;
                u1[i] = cur_u;
                u2[i] = cur_u2;
                rhs[i + 1] -= m * rhs[i];
                cur_d = next_d - m * cur_u;
                cur_u = next_u - m * cur_u2;
                cur_u2 = 0.0;
            } else {
                // swap rows i and i+1
                let m = cur_d / next_l;
                u0[i] = next_l;
                u1[i] = next_d;
                u2[i] = next_u;
                rhs.swap(i, i + 1);
                rhs[i + 1] -= m * rhs[i];
                let nd = cur_u - m * next_d;
                let nu = cur_u2 - m * next_u;
                cur_d = nd;
                cur_u = nu;
                cur_u2 = 0.0;
            }
        }
        let mut y = vec![0.0; n];
        for i in (0..n).rev() {
            let mut s = rhs[i];
            if i + 1 < n {
                s -= u1[i] * y[i + 1];
            }
            if i + 2 < n {
                s -= u2[i] * y[i + 2];
            }
            y[i] = s / u0[i];
        }
        y
    }

    fn eigenvector(&self, lambda: f64, rng: &mut ChaCha8Rng) -> Vec<f64> {
        let n = self.diag.len();
        let mut v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        for _ in 0..3 {
            v = self.shifted_solve(lambda, &v);
            let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
            v.iter_mut().for_each(|a| *a /= norm);
        }
        v
    }
}

/// Eigenpairs of the grid Hamiltonian.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralData {
    pub grid: Grid1d,
    /// Richardson-combined eigenvalues `(4 E(Δx/2) − E(Δx)) / 3`.
    pub eigenvalues: Vec<f64>,
    /// Eigenvalues on `grid` alone.
    pub raw_eigenvalues: Vec<f64>,
    /// `|E_extrapolated − E(Δx/2)|`, a bound on the remaining error.
    pub convergence: Vec<f64>,
    /// Eigenfunctions on `grid`, normalised so `Σ|ψ|² Δx = 1`, sign fixed so
    /// the first sizeable component is positive.
    pub eigenfunctions: Vec<Vec<f64>>,
    /// Largest `|ψ|` next to a wall relative to `max|ψ|`, per state.
    pub wall_leakage: Vec<f64>,
}

/// Lowest `n_states` eigenpairs of `−(ħ²/2M) d²/dx² + V` on `grid`. The box
/// is an artificial truncation: any retained state whose amplitude next to a
/// wall exceeds [`WALL_LEAKAGE_LIMIT`] is an error.
pub fn solve_1d(potential: &Potential, grid: &Grid1d, n_states: usize) -> Result<SpectralData> {
    solve(potential, grid, n_states, true)
}

/// As [`solve_1d`] for a physical hard-wall box: leakage is recorded but not
/// checked.
pub fn solve_1d_hard_walls(potential: &Potential, grid: &Grid1d, n_states: usize) -> Result<SpectralData> {
    solve(potential, grid, n_states, false)
}

fn solve(potential: &Potential, grid: &Grid1d, n_states: usize, check_walls: bool) -> Result<SpectralData> {
    if potential.dim() != 1 {
        return Err(Error::DimensionMismatch { expected: 1, got: potential.dim() });
    }
    if n_states == 0 || n_states > grid.n / 2 {
        return Err(Error::InvalidParameter(format!(
            "n_states = {n_states} must lie in 1..={} for a {}-point grid",
            grid.n / 2,
            grid.n
        )));
    }
    let coarse = Tridiagonal::hamiltonian(potential, grid)?;
    let fine = Tridiagonal::hamiltonian(potential, &grid.refined())?;
    let dx = grid.spacing();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);

    let mut eigenvalues = Vec::with_capacity(n_states);
    let mut raw = Vec::with_capacity(n_states);
    let mut convergence = Vec::with_capacity(n_states);
    let mut eigenfunctions = Vec::with_capacity(n_states);
    let mut leakage = Vec::with_capacity(n_states);
    for k in 0..n_states {
        let e0 = coarse.eigenvalue(k);
        let e1 = fine.eigenvalue(k);
        let ex = (4.0 * e1 - e0) / 3.0;
        let mut v = coarse.eigenvector(e0, &mut rng);
        let max = v.iter().fold(0.0f64, |m, a| m.max(a.abs()));
        if let Some(first) = v.iter().find(|a| a.abs() > 1e-3 * max) {
            if *first < 0.0 {
                v.iter_mut().for_each(|a| *a = -*a);
            }
        }
        let scale = 1.0 / dx.sqrt();
        v.iter_mut().for_each(|a| *a *= scale);
        let max = max * scale;
        let wall = v[0].abs().max(v[v.len() - 1].abs()) / max;
        if check_walls && wall > WALL_LEAKAGE_LIMIT {
            return Err(Error::WallLeakage { state: k, leakage: wall });
        }
        eigenvalues.push(ex);
        raw.push(e0);
        convergence.push((ex - e1).abs());
        eigenfunctions.push(v);
        leakage.push(wall);
    }
    Ok(SpectralData { grid: *grid, eigenvalues, raw_eigenvalues: raw, convergence, eigenfunctions, wall_leakage: leakage })
}

fn gaussian(s: f64, eta: f64) -> f64 {
    (-0.5 * (s / eta).powi(2)).exp() / ((2.0 * PI).sqrt() * eta)
}

impl SpectralData {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// Highest energy at which a smearing of width `eta` stays inside the
    /// retained spectrum.
    pub fn max_usable_energy(&self, eta: f64) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(f64::NEG_INFINITY) - 5.0 * eta
    }

    fn check_range(&self, energy: f64, eta: f64) -> Result<()> {
        if !(eta > 0.0) {
            return Err(Error::InvalidParameter("smearing width must be positive".into()));
        }
        let max_usable = self.max_usable_energy(eta);
        if energy > max_usable {
            return Err(Error::OutOfRange { energy, max_usable });
        }
        Ok(())
    }

    /// Mean level spacing of the retained states around `energy`.
    pub fn local_spacing(&self, energy: f64) -> f64 {
        let e = &self.eigenvalues;
        if e.len() < 2 {
            return f64::INFINITY;
        }
        let k = e.partition_point(|v| *v < energy).clamp(1, e.len() - 1);
        e[k] - e[k - 1]
    }

    /// `true` when `eta` exceeds the local level spacing.
    pub fn is_resolved(&self, energy: f64, eta: f64) -> bool {
        eta > self.local_spacing(energy)
    }

    /// `|ψ_n(x)|²` with linear interpolation of `ψ_n` between nodes and the
    /// Dirichlet zeros at the walls.
    pub fn probability(&self, n: usize, x: f64) -> f64 {
        let g = &self.grid;
        let psi = &self.eigenfunctions[n];
        let s = (x - g.x_min) / g.spacing();
        if !(s > 0.0 && s < (g.n + 1) as f64) {
            return 0.0;
        }
        let j = s.floor() as usize;
        let t = s - j as f64;
        let at = |node: usize| if node == 0 || node > g.n { 0.0 } else { psi[node - 1] };
        let v = (1.0 - t) * at(j) + t * at(j + 1);
        v * v
    }

    /// `Σ_n |ψ_n(x)|² exp(−(E − E_n)²/2η²)/(√(2π) η)`.
    pub fn local_density_smeared(&self, x: f64, energy: f64, eta: f64) -> Result<f64> {
        self.check_range(energy, eta)?;
        Ok((0..self.len()).map(|n| self.probability(n, x) * gaussian(energy - self.eigenvalues[n], eta)).sum())
    }

    /// `Σ_n exp(−(E − E_n)²/2η²)/(√(2π) η)`.
    pub fn dos_smeared(&self, energy: f64, eta: f64) -> Result<f64> {
        self.check_range(energy, eta)?;
        Ok(self.eigenvalues.iter().map(|en| gaussian(energy - en, eta)).sum())
    }

    /// Interior sign changes of eigenfunction `n`, ignoring components below
    /// `1e-10` of its maximum.
    pub fn sign_changes(&self, n: usize) -> usize {
        let psi = &self.eigenfunctions[n];
        let max = psi.iter().fold(0.0f64, |m, a| m.max(a.abs()));
        let mut last = 0.0;
        let mut changes = 0;
        for &v in psi {
            if v.abs() < 1e-10 * max {
                continue;
            }
            if last != 0.0 && (v > 0.0) != (last > 0.0) {
                changes += 1;
            }
            last = v;
        }
        changes
    }

    /// CSV `n, E_n`.
    pub fn write_eigenvalues_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["n", "E_n"])?;
        for (n, e) in self.eigenvalues.iter().enumerate() {
            w.write_record([n.to_string(), fmt17(*e)])?;
        }
        w.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_levels() {
        let pot = Potential::harmonic(1, 1.0).unwrap();
        let spec = solve_1d(&pot, &Grid1d::new(-12.0, 12.0, 4000).unwrap(), 21).unwrap();
        for (n, e) in spec.eigenvalues.iter().enumerate() {
            assert!((e - (n as f64 + 0.5)).abs() < 1e-6, "n={n} E={e}");
            assert_eq!(spec.sign_changes(n), n);
        }
        let norm: f64 = spec.eigenfunctions[7].iter().map(|a| a * a).sum::<f64>() * spec.grid.spacing();
        assert!((norm - 1.0).abs() < 1e-12);
    }

    #[test]
    fn particle_in_box() {
        let pot = Potential::free(1);
        let l = 2.0;
        let grid = Grid1d::new(0.0, l, 2000).unwrap();
        assert!(matches!(solve_1d(&pot, &grid, 5), Err(Error::WallLeakage { state: 0, .. })));
        let spec = solve_1d_hard_walls(&pot, &grid, 5).unwrap();
        for (k, e) in spec.eigenvalues.iter().enumerate() {
            let n = (k + 1) as f64;
            let exact = (PI * n / l).powi(2) / 2.0;
            assert!((e - exact).abs() / exact < 1e-6, "n={n}");
        }
    }

    #[test]
    fn leakage_detected() {
        let pot = Potential::harmonic(1, 1.0).unwrap();
        let err = solve_1d(&pot, &Grid1d::new(-3.0, 3.0, 600).unwrap(), 10).unwrap_err();
        assert!(matches!(err, Error::WallLeakage { .. }));
    }

    #[test]
    fn out_of_range_energy() {
        let pot = Potential::harmonic(1, 1.0).unwrap();
        let spec = solve_1d(&pot, &Grid1d::new(-10.0, 10.0, 1000).unwrap(), 10).unwrap();
        assert!(matches!(spec.dos_smeared(8.0, 1.0), Err(Error::OutOfRange { .. })));
        assert!(spec.dos_smeared(2.0, 0.5).is_ok());
    }
}
