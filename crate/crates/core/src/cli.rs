//! Command-line front end: `maupertuis <subcommand> --scenario <file>
//! [--out <dir>] [--threads <n>]`.
//!
//! Every subcommand writes its CSV tables and `<subcommand>_summary.json`
//! into the output directory and exits 0 iff every criterion passes.

use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;

use crate::density::{
    allowed_intervals_1d, default_turning_threshold, density_from_resolvent, density_sweep, hydrogen_momentum_case,
    semiclassical_density, write_density_csv, Regime,
};
use crate::dewitt::{coefficient_a1, coefficient_a2};
use crate::dynamics::{compare_geodesic_newton, geodesic_integrate, newton_integrate, unit_velocity};
use crate::error::{Error, Result};
use crate::geometry::{
    conformal_factor, curvature_invariants, ricci_scalar_analytic, ricci_scalar_fd, weyl_curvature_term,
    MaupertuisMetric, Side,
};
use crate::report::{fmt17, json17, number17, Check, Criterion, OutputDir, Summary};
use crate::scenario::Scenario;
use crate::spectral::{solve_1d, Grid1d, WALL_LEAKAGE_LIMIT};
use crate::validate::{self, compare_with_oracle};

/// Output directory used when neither `--out` nor the scenario names one.
pub const DEFAULT_OUT: &str = "out";
pub const OUT_ENV: &str = "MAUPERTUIS_OUT";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Geometry,
    Geodesic,
    Dewitt,
    Density,
    Oracle,
    Compare,
    Hydrogen,
    Validate,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Geometry => "geometry",
            Command::Geodesic => "geodesic",
            Command::Dewitt => "dewitt",
            Command::Density => "density",
            Command::Oracle => "oracle",
            Command::Compare => "compare",
            Command::Hydrogen => "hydrogen",
            Command::Validate => "validate",
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "maupertuis", version, about = "Maupertuis-metric geometry and semiclassical densities")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Sub,
}

#[derive(Debug, Subcommand)]
pub enum Sub {
    /// Curvature two-path tables.
    Geometry(RunArgs),
    /// Trajectory and deviation reports.
    Geodesic(RunArgs),
    /// Heat-kernel coefficient tables.
    Dewitt(RunArgs),
    /// Density breakdown sweeps.
    Density(RunArgs),
    /// Spectra and smeared densities from the finite-difference Hamiltonian.
    Oracle(RunArgs),
    /// Semiclassical density against the oracle.
    Compare(RunArgs),
    /// Momentum-space hydrogen report.
    Hydrogen(RunArgs),
    /// Full invariant suite.
    Validate(RunArgs),
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    #[arg(long)]
    pub scenario: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub threads: Option<usize>,
}

impl Sub {
    fn split(&self) -> (Command, &RunArgs) {
        match self {
            Sub::Geometry(a) => (Command::Geometry, a),
            Sub::Geodesic(a) => (Command::Geodesic, a),
            Sub::Dewitt(a) => (Command::Dewitt, a),
            Sub::Density(a) => (Command::Density, a),
            Sub::Oracle(a) => (Command::Oracle, a),
            Sub::Compare(a) => (Command::Compare, a),
            Sub::Hydrogen(a) => (Command::Hydrogen, a),
            Sub::Validate(a) => (Command::Validate, a),
        }
    }
}

/// `--out`, then `MAUPERTUIS_OUT`, then the scenario's `output_dir`, then `out`.
pub fn resolve_out_dir(flag: Option<&PathBuf>, scenario: &Scenario) -> PathBuf {
    if let Some(p) = flag {
        return p.clone();
    }
    if let Some(p) = std::env::var_os(OUT_ENV).filter(|v| !v.is_empty()) {
        return PathBuf::from(p);
    }
    scenario.output_dir.as_ref().map(PathBuf::from).unwrap_or_else(|| PathBuf::from(DEFAULT_OUT))
}

/// Parses arguments, runs, prints status lines and returns the exit code:
/// 0 all pass, 1 a criterion failed, 2 config or runtime error.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let (cmd, args) = cli.command.split();
    match execute(cmd, args) {
        Ok(summary) => {
            for c in &summary.criteria {
                println!("{}", c.status_line());
            }
            if summary.all_pass() {
                0
            } else {
                eprintln!("{}", serde_json::to_string(&summary.failure_json()).unwrap_or_default());
                1
            }
        }
        Err(e) => {
            let body = match &e {
                Error::Config { path, reason } => json!({"error": "config", "path": path, "reason": reason}),
                other => json!({"error": "runtime", "reason": other.to_string()}),
            };
            eprintln!("{body}");
            2
        }
    }
}

fn execute(cmd: Command, args: &RunArgs) -> Result<Summary> {
    let scenario = Scenario::load(&args.scenario)?;
    let out = OutputDir::create(resolve_out_dir(args.out.as_ref(), &scenario))?;
    match args.threads {
        Some(0) => Err(Error::Config { path: "--threads".into(), reason: "thread count must be positive".into() }),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::InvalidParameter(e.to_string()))?
            .install(|| run(cmd, &scenario, &out)),
        None => run(cmd, &scenario, &out),
    }
}

/// Runs one subcommand and writes its outputs, including the summary.
pub fn run(cmd: Command, scenario: &Scenario, out: &OutputDir) -> Result<Summary> {
    let criteria = match cmd {
        Command::Geometry => geometry(scenario, out)?,
        Command::Geodesic => geodesic(scenario, out)?,
        Command::Dewitt => dewitt(scenario, out)?,
        Command::Density => density(scenario, out)?,
        Command::Oracle => oracle(scenario, out)?,
        Command::Compare => compare(scenario, out)?,
        Command::Hydrogen => hydrogen(scenario, out)?,
        Command::Validate => validate::run_all(scenario.seed),
    };
    let summary = Summary::new(scenario.name.clone(), cmd.name(), criteria);
    out.write_summary(&summary)?;
    Ok(summary)
}

fn point(v: &[f64]) -> DVector<f64> {
    DVector::from_column_slice(v)
}

fn coords_header(dim: usize) -> Vec<String> {
    (0..dim).map(|i| format!("x{i}")).collect()
}

fn geometry(s: &Scenario, out: &OutputDir) -> Result<Vec<Criterion>> {
    let g = s.require(&s.geometry, "geometry")?;
    let pot = Arc::new(s.potential()?);
    let d = pot.dim();
    let points: Vec<DVector<f64>> = g.points.iter().map(|p| point(p)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
    let random: Vec<DVector<f64>> =
        (0..g.random_points).map(|_| DVector::from_fn(d, |_, _| rng.gen_range(-g.sample_box..g.sample_box))).collect();

    let mut rows = Vec::new();
    let mut worst: f64 = 0.0;
    let mut worst_d1: f64 = 0.0;
    let mut skipped = 0usize;
    for &e in &s.energies {
        let metric = MaupertuisMetric::with_side(pot.clone(), e, Side::Forbidden);
        let threshold = default_turning_threshold(&pot, e);
        let mut here = points.clone();
        for x in &random {
            if 2.0 * pot.mass() * (pot.value(x)? - e) > crate::geometry::DEFAULT_DELTA_MIN {
                here.push(x.clone());
            } else {
                skipped += 1;
            }
        }
        let results = here
            .par_iter()
            .map(|x| -> Result<(f64, f64, f64, f64, bool)> {
                let an = ricci_scalar_analytic(&pot, e, x, threshold)?;
                let fd = ricci_scalar_fd(&metric, x, g.step)?;
                let geo = conformal_factor(&pot, e, x)?;
                Ok((geo.omega2(), an.value, fd, weyl_curvature_term(&geo.jet), an.near_turning))
            })
            .collect::<Result<Vec<_>>>()?;
        for (x, (omega2, an, fd, weyl, near)) in here.iter().zip(results) {
            let rel = (an - fd).abs() / (1.0 + an.abs());
            worst = worst.max(rel);
            if d == 1 {
                worst_d1 = worst_d1.max(an.abs());
            }
            let mut row = vec![fmt17(e)];
            row.extend(x.iter().map(|v| fmt17(*v)));
            row.extend([fmt17(omega2), fmt17(an), fmt17(fd), fmt17(rel), fmt17(weyl), near.to_string()]);
            rows.push(row);
        }
    }
    let mut header = vec!["E".to_string()];
    header.extend(coords_header(d));
    header.extend(["omega2", "R_analytic", "R_fd", "relative_difference", "weyl_term", "near_turning"].map(String::from));
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    out.write_table("geometry_curvature.csv", &header, &rows)?;

    let mut checks = vec![Check::at_most("max |R_an - R_fd|/(1+|R|)", worst, g.tolerance)];
    if d == 1 {
        checks.push(Check::at_most("max |R| in one dimension", worst_d1, 0.0));
    }
    let mut c = Criterion::from_checks("geometry.two_path", "curvature two-path", checks)
        .with_note(format!("{} points evaluated", rows.len()));
    if skipped > 0 {
        c = c.with_note(format!("{skipped} random points outside the positive-metric region skipped"));
    }
    Ok(vec![c])
}

fn geodesic(s: &Scenario, out: &OutputDir) -> Result<Vec<Criterion>> {
    let g = s.require(&s.geodesic, "geodesic")?;
    let pot = s.potential()?;
    let x0 = point(&g.x0);
    let v_dir = point(&g.v0);
    let v_at = pot.value(&x0)?;
    let energy = g.energy.unwrap_or(0.5 * pot.mass() * v_dir.norm_squared() + v_at);
    let rep = compare_geodesic_newton(&pot, energy, &x0, &v_dir, g.span, g.tol)?;

    let speed = (2.0 * (energy - v_at) / pot.mass()).sqrt();
    let v0 = &v_dir * (speed / v_dir.norm());
    let newton = newton_integrate(&pot, &x0, &v0, rep.t_end, g.tol)?;
    let metric = MaupertuisMetric::allowed(pot.clone(), energy);
    let u0 = unit_velocity(&metric, &x0, &v_dir)?;
    let geo = geodesic_integrate(&metric, &x0, &u0, rep.l_end, g.tol)?;
    newton.write_csv(out.writer("geodesic_newton.csv")?)?;
    geo.write_csv(out.writer("geodesic_metric.csv")?)?;

    let report = json!({
        "energy": number17(energy),
        "max_deviation": number17(rep.max_deviation),
        "t_end": number17(rep.t_end),
        "l_end": number17(rep.l_end),
        "compared_samples": rep.compared_samples,
        "rate_mismatch": number17(rep.rate_mismatch),
        "newton_energy_drift": number17(rep.newton_energy_drift),
        "geodesic_norm_drift": number17(rep.geodesic_norm_drift),
        "truncated": rep.truncated,
    });
    out.write_json("geodesic_deviation.json", &report)?;
    Ok(vec![Criterion::from_checks(
        "geodesic.newton",
        "geodesic vs Newton",
        vec![
            Check::at_most("max position deviation", rep.max_deviation, g.tolerance),
            Check::at_most("truncated", rep.truncated as u8 as f64, 0.0),
        ],
    )])
}

fn dewitt(s: &Scenario, out: &OutputDir) -> Result<Vec<Criterion>> {
    let dw = s.require(&s.dewitt, "dewitt")?;
    let pot = s.potential()?;
    let d = pot.dim();
    let mut rows = Vec::new();
    let mut non_finite = 0usize;
    let mut conformal_a1: f64 = 0.0;
    for &e in &s.energies {
        let metric = MaupertuisMetric::new(pot.clone(), e);
        let packs = dw
            .points
            .par_iter()
            .map(|p| curvature_invariants(&metric, &point(p), dw.step))
            .collect::<Result<Vec<_>>>()?;
        for (p, pack) in dw.points.iter().zip(packs) {
            for &xi in &dw.xi {
                let (a1, a2) = (coefficient_a1(pack.r, xi), coefficient_a2(&pack, xi));
                if !(pack.is_finite() && a1.is_finite() && a2.is_finite()) {
                    non_finite += 1;
                }
                if xi == 1.0 / 6.0 {
                    conformal_a1 = conformal_a1.max(a1.abs());
                }
                let mut row = vec![fmt17(e)];
                row.extend(p.iter().map(|v| fmt17(*v)));
                row.extend([xi, pack.r, pack.box_r, pack.ricci_sq, pack.riemann_sq, 1.0, a1, a2].map(fmt17));
                rows.push(row);
            }
        }
    }
    let mut header = vec!["E".to_string()];
    header.extend(coords_header(d));
    header.extend(["xi", "R", "box_R", "ricci_squared", "riemann_squared", "a0", "a1", "a2"].map(String::from));
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    out.write_table("dewitt_coefficients.csv", &header, &rows)?;
    Ok(vec![Criterion::from_checks(
        "dewitt.coefficients",
        "heat-kernel coefficients",
        vec![
            Check::at_most("non-finite rows", non_finite as f64, 0.0),
            Check::at_most("max |a1| at xi = 1/6", conformal_a1, 0.0),
        ],
    )])
}

fn density(s: &Scenario, out: &OutputDir) -> Result<Vec<Criterion>> {
    let den = s.require(&s.density, "density")?;
    let pot = s.potential()?;
    let mut points: Vec<DVector<f64>> = den.points.iter().map(|p| point(p)).collect();
    if let Some(l) = &den.line {
        let (a, b) = (point(&l.from), point(&l.to));
        points.extend((0..l.n).map(|i| &a + (&b - &a) * (i as f64 / (l.n - 1) as f64)));
    }
    let mut rows = Vec::new();
    let mut worst: f64 = 0.0;
    for &e in &den.energies {
        let sweep = density_sweep(&pot, e, &points, den.order, den.threshold)?;
        for r in &sweep {
            if r.regime == Regime::Forbidden {
                continue;
            }
            let a = semiclassical_density(&pot, e, &r.x, den.order, den.threshold)?;
            let b = density_from_resolvent(&pot, e, &r.x, den.order, den.threshold)?;
            for i in 0..=den.order {
                let (va, vb) = (a.term(i), b.term(i));
                let scale = va.abs().max(vb.abs());
                if scale > 0.0 {
                    worst = worst.max((va - vb).abs() / scale);
                }
            }
        }
        rows.extend(sweep);
    }
    write_density_csv(&rows, out.writer("density_sweep.csv")?)?;
    let forbidden = rows.iter().filter(|r| r.regime == Regime::Forbidden).count();
    let near = rows.iter().filter(|r| r.regime == Regime::NearTurning).count();
    Ok(vec![Criterion::from_checks(
        "density.pipeline",
        "resolvent continuation matches the density",
        vec![Check::at_most("max relative per-term difference", worst, den.tolerance)],
    )
    .with_note(format!("{} rows, {forbidden} forbidden, {near} near a turning point", rows.len()))])
}

fn oracle(s: &Scenario, out: &OutputDir) -> Result<Vec<Criterion>> {
    let o = s.require(&s.oracle, "oracle")?;
    let pot = s.oracle_potential()?;
    let grid = Grid1d::new(o.x_min, o.x_max, o.n)?;
    let spec = solve_1d(&pot, &grid, o.n_states)?;
    spec.write_eigenvalues_csv(out.writer("oracle_eigenvalues.csv")?)?;

    let max_e = spec.max_usable_energy(o.eta);
    let mut density_rows = Vec::new();
    let mut dos_rows = Vec::new();
    for &e in &o.energies {
        if e > max_e {
            return Err(Error::OutOfRange { energy: e, max_usable: max_e });
        }
        dos_rows.push(vec![fmt17(e), fmt17(spec.dos_smeared(e, o.eta)?), spec.is_resolved(e, o.eta).to_string()]);
        for i in 0..o.x_points {
            let x = o.x_min + (o.x_max - o.x_min) * i as f64 / (o.x_points - 1).max(1) as f64;
            density_rows.push(vec![fmt17(e), fmt17(x), fmt17(spec.local_density_smeared(x, e, o.eta)?)]);
        }
    }
    out.write_table("oracle_density.csv", &["E", "x", "density"], &density_rows)?;
    out.write_table("oracle_dos.csv", &["E", "dos", "resolved"], &dos_rows)?;

    let quarter = (o.n_states / 4).max(1);
    let node_errors = (0..quarter).filter(|&n| spec.sign_changes(n) != n).count();
    let leakage = spec.wall_leakage.iter().cloned().fold(0.0, f64::max);
    let convergence = spec.convergence[..quarter].iter().cloned().fold(0.0, f64::max);
    Ok(vec![Criterion::from_checks(
        "oracle.spectrum",
        "finite-difference spectrum",
        vec![
            Check::at_most("max wall leakage", leakage, WALL_LEAKAGE_LIMIT),
            Check::at_most("states with wrong node count", node_errors as f64, 0.0),
        ],
    )
    .with_note(format!("max grid-refinement change over the lowest {quarter} states {convergence:e}"))
    .with_note(format!("largest usable energy {}", fmt17(max_e)))])
}

fn compare(s: &Scenario, out: &OutputDir) -> Result<Vec<Criterion>> {
    let o = s.require(&s.oracle, "oracle")?;
    let pot = s.oracle_potential()?;
    let grid = Grid1d::new(o.x_min, o.x_max, o.n)?;
    let mut rows = Vec::new();
    let mut checks = Vec::new();
    let mut worst: f64 = 0.0;
    for &e in &o.energies {
        let interval = allowed_intervals_1d(&pot, e, (o.x_min, o.x_max), 4000)?
            .into_iter()
            .max_by(|a, b| (a.1 - a.0).total_cmp(&(b.1 - b.0)))
            .ok_or_else(|| Error::InvalidParameter(format!("no classically allowed region at E = {e}")))?;
        let cmp = compare_with_oracle(&pot, &grid, o.n_states, e, o.eta, interval, o.fraction, o.x_points)?;
        for i in 0..cmp.x.len() {
            rows.push([e, cmp.x[i], cmp.exact[i], cmp.order0[i], cmp.order2[i]].map(fmt17).to_vec());
        }
        worst = worst.max(cmp.max_relative_order0);
        checks.push(Check::at_most(format!("E={e} L2 order 2 minus order 0"), cmp.l2_order2 - cmp.l2_order0, 0.0));
    }
    out.write_table("compare_density.csv", &["E", "x", "exact", "order0", "order2"], &rows)?;
    let mut all = vec![Check::at_most("max relative deviation, order 0", worst, o.tolerance)];
    all.extend(checks);
    Ok(vec![Criterion::from_checks("compare.oracle", "semiclassical vs exact density", all)])
}

fn hydrogen(s: &Scenario, out: &OutputDir) -> Result<Vec<Criterion>> {
    let h = s.require(&s.hydrogen, "hydrogen")?;
    let mut reports = Vec::new();
    let mut worst: f64 = 0.0;
    for (k, &p_e) in h.p_e.iter().enumerate() {
        let rep = hydrogen_momentum_case(h.dim, p_e, h.samples, s.seed ^ k as u64, h.step)?;
        worst = worst.max(rep.max_relative_fd_error);
        reports.push(rep);
    }
    let statement = reports.first().map(|r| r.weyl_statement.clone()).unwrap_or_default();
    out.write_json("hydrogen_report.json", &json17(serde_json::to_value(&reports)?))?;
    Ok(vec![Criterion::from_checks(
        "hydrogen.curvature",
        "hydrogen metric curvature",
        vec![Check::at_most("max relative FD error", worst, h.tolerance)],
    )
    .with_note(statement)])
}
