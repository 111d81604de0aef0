//! Benchmark checks with fixed thresholds. Each check runs its own
//! configurations and reports a single pass/fail [`Outcome`].

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::indicator::Region;
use crate::integrator::{SchemeMode, Solver, SolverConfig, TimeStepPolicy};
use crate::mesh::{BoundaryCondition, BoundarySpec, ConservedField};
use crate::problems::{lookup, ProblemSpec};
use crate::runner::{block_average, compare, exact_convergence, run, runge_convergence, RunConfig, RunResult};

#[derive(Debug, Clone, Serialize)]
pub struct Outcome {
    pub id: u8,
    pub title: String,
    pub passed: bool,
    pub detail: String,
}

impl Outcome {
    fn new(id: u8, title: &str, passed: bool, detail: String) -> Self {
        Self { id, title: title.to_string(), passed, detail }
    }

    fn from_result(id: u8, title: &str, r: Result<(bool, String)>) -> Self {
        match r {
            Ok((passed, detail)) => Self::new(id, title, passed, detail),
            Err(e) => Self::new(id, title, false, format!("error: {e}")),
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{tag}] {}. {}: {}", self.id, self.title, self.detail)
    }
}

/// Cells needed for spacing `h` on `[a, b]`.
fn cells(range: (f64, f64), h: f64) -> usize {
    ((range.1 - range.0) / h).round() as usize
}

fn positive(r: &RunResult<f64>) -> bool {
    r.summary.min_rho > 0.0 && r.summary.min_p > 0.0
}

fn x_centers(r: &RunResult<f64>) -> Vec<f64> {
    match r.solution.as_1d() {
        Some((g, _)) => (0..g.n_cells).map(|i| g.x(i as isize)).collect(),
        None => Vec::new(),
    }
}

fn total_variation(rho: &[f64], x: &[f64], window: (f64, f64)) -> f64 {
    let idx: Vec<usize> = (0..x.len()).filter(|&i| x[i] >= window.0 && x[i] <= window.1).collect();
    idx.windows(2).map(|w| (rho[w[1]] - rho[w[0]]).abs()).sum()
}

fn argmax(v: &[f64]) -> usize {
    v.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).map_or(0, |(i, _)| i)
}

/// Fifth-order Runge study on the smooth 1-D wave.
pub const ACCURACY_1D_MESHES: [usize; 6] = [100, 200, 400, 800, 1600, 3200];
pub const ACCURACY_1D_MIN_RATE: f64 = 4.7;
pub const ACCURACY_1D_RHO_ERROR: f64 = 4.89e-9;

pub fn accuracy_1d() -> Outcome {
    let title = "1-D fifth-order accuracy";
    Outcome::from_result(1, title, (|| {
        let rep = runge_convergence("smooth1d", SchemeMode::Quasi5, &ACCURACY_1D_MESHES, true)?;
        let mut ok = true;
        let mut detail = Vec::new();
        for n in [80.0, 160.0, 320.0] {
            let row = rep.row(1.0 / n).ok_or_else(|| Error::config(format!("missing row 1/{n}")))?;
            let rates: Vec<f64> = row.rates.iter().map(|r| r.unwrap_or(f64::NAN)).collect();
            ok &= rates.iter().all(|&r| r >= ACCURACY_1D_MIN_RATE);
            detail.push(format!("1/{n}: rates {:.2}/{:.2}/{:.2}", rates[0], rates[1], rates[2]));
        }
        let e = rep.row(1.0 / 80.0).and_then(|r| r.errors[0]).unwrap_or(f64::NAN);
        let factor = (e / ACCURACY_1D_RHO_ERROR).max(ACCURACY_1D_RHO_ERROR / e);
        ok &= factor <= 3.0;
        detail.push(format!("rho error at 1/80 {e:.3e} (x{factor:.2} off 4.89e-9)"));
        Ok((ok, detail.join("; ")))
    })())
}

pub const ACCURACY_2D_MESHES: [usize; 3] = [200, 400, 800];
pub const ACCURACY_2D_MIN_RATE: f64 = 4.5;

pub fn accuracy_2d() -> Outcome {
    let title = "2-D fifth-order accuracy";
    Outcome::from_result(2, title, (|| {
        let rep = exact_convergence("vortex2d", SchemeMode::Quasi5, &ACCURACY_2D_MESHES, true)?;
        let mut ok = true;
        let mut detail = Vec::new();
        for n in [20.0, 40.0] {
            let row = rep.row(1.0 / n).ok_or_else(|| Error::config(format!("missing row 1/{n}")))?;
            let rates: Vec<f64> = row.rates.iter().map(|r| r.unwrap_or(f64::NAN)).collect();
            ok &= rates.iter().all(|&r| r >= ACCURACY_2D_MIN_RATE);
            let e = row.errors[0].unwrap_or(f64::NAN);
            detail.push(format!(
                "1/{n}: rho err {e:.3e}, rates {:.2}/{:.2}/{:.2}/{:.2}",
                rates[0], rates[1], rates[2], rates[3]
            ));
        }
        Ok((ok, detail.join("; ")))
    })())
}

pub const CONSERVATION_STEPS: usize = 100;
pub const CONSERVATION_TOL: f64 = 1e-12;

/// Largest relative change of the conserved totals over `steps` steps of
/// `problem` with periodic boundaries.
pub fn periodic_drift(problem: &ProblemSpec, mode: SchemeMode, nx: usize, steps: usize) -> Result<[f64; 3]> {
    let periodic = ProblemSpec { bc: BoundarySpec::uniform(BoundaryCondition::Periodic), ..*problem };
    let grid = periodic.grid_1d::<f64>(nx)?;
    let cfg = SolverConfig {
        nx,
        ny: 1,
        dx: grid.dx,
        dy: None,
        bc: periodic.boundary(),
        gas: periodic.gas(),
        mode,
        indicator: periodic.indicator_config(mode, None, None)?,
        policy: TimeStepPolicy::default(),
        gravity: false,
    };
    let mut solver = Solver::new(cfg)?;
    let mut field: ConservedField<f64, 3> = periodic.initial_field_1d(&grid);
    let before = field.totals();
    let mut t = 0.0;
    for _ in 0..steps {
        solver.fill_ghosts(&mut field)?;
        let dt = solver.compute_dt(&field, f64::INFINITY)?;
        solver.step(&mut field, t, dt)?;
        t += dt;
    }
    let after = field.totals();
    Ok([0, 1, 2].map(|c| (after[c] - before[c]).abs() / before[c].abs().max(f64::MIN_POSITIVE)))
}

pub fn conservation() -> Outcome {
    let title = "conservation with periodic boundaries";
    Outcome::from_result(3, title, (|| {
        let p = lookup("shock_density")?;
        let d = periodic_drift(&p, SchemeMode::AdaptiveNew, cells(p.x_range, 1.0 / 40.0), CONSERVATION_STEPS)?;
        let ok = d.iter().all(|&v| v <= CONSERVATION_TOL);
        Ok((ok, format!("relative drift rho {:.1e}, rho u {:.1e}, E {:.1e}", d[0], d[1], d[2])))
    })())
}

pub const ROBUST_REFERENCE_DX: f64 = 1.0 / 400.0;
pub const ROBUST_TV_WINDOW: (f64, f64) = (4.0, 8.0);
pub const ROBUST_TV_EXCESS: f64 = 0.10;
pub const ROBUST_OVERSHOOT: f64 = 0.02;
/// Behind/ahead extent of the window around the leading shock.
pub const ROBUST_SHOCK_WINDOW: (f64, f64) = (1.0, 0.5);

pub fn robustness() -> Outcome {
    let title = "shock/entropy robustness";
    Outcome::from_result(4, title, (|| {
        let p = lookup("shock_density")?;
        let ref_nx = cells(p.x_range, ROBUST_REFERENCE_DX);
        let reference = run::<f64>(&RunConfig::new("shock_density", SchemeMode::LdcuMinmod2).with_nx(ref_nx))?;
        let ref_rho = reference.solution.density();
        let mut ok = positive(&reference);
        let mut detail = Vec::new();
        for h in [40.0, 200.0] {
            let nx = cells(p.x_range, 1.0 / h);
            let cfg = RunConfig { c1: Some(0.015), c2: Some(0.15), ..RunConfig::new("shock_density", SchemeMode::AdaptiveNew).with_nx(nx) };
            let r = run::<f64>(&cfg)?;
            let rho = r.solution.density();
            let x = x_centers(&r);
            let rref = block_average(&ref_rho, ref_nx / nx);

            let tv = total_variation(&rho, &x, ROBUST_TV_WINDOW);
            let tv_ref = total_variation(&rref, &x, ROBUST_TV_WINDOW);

            // leading shock: largest jump of the restricted reference right of the origin
            let jumps: Vec<f64> = (0..nx - 1).map(|i| if x[i] > 0.0 { (rref[i + 1] - rref[i]).abs() } else { 0.0 }).collect();
            let xs = x[argmax(&jumps)];
            let near = |i: &usize| x[*i] >= xs - ROBUST_SHOCK_WINDOW.0 && x[*i] <= xs + ROBUST_SHOCK_WINDOW.1;
            let peak = (0..nx).filter(near).map(|i| rho[i]).fold(f64::MIN, f64::max);
            let peak_ref = (0..nx).filter(near).map(|i| rref[i]).fold(f64::MIN, f64::max);
            let overshoot = (peak / peak_ref - 1.0).max(0.0);

            let pass = positive(&r) && tv <= (1.0 + ROBUST_TV_EXCESS) * tv_ref && overshoot <= ROBUST_OVERSHOOT;
            ok &= pass;
            detail.push(format!(
                "1/{h}: min rho {:.3}, min p {:.3}, TV {tv:.3} vs {tv_ref:.3}, overshoot {:.2}% at x={xs:.2}",
                r.summary.min_rho,
                r.summary.min_p,
                overshoot * 100.0
            ));
        }
        Ok((ok, detail.join("; ")))
    })())
}

pub const BLAST_PEAK_WINDOW: (f64, f64) = (0.7, 0.8);

pub fn blast_wave() -> Outcome {
    let title = "blast wave";
    Outcome::from_result(5, title, (|| {
        let r = run::<f64>(&RunConfig::new("blast", SchemeMode::AdaptiveNew).with_nx(400))?;
        let reference = run::<f64>(&RunConfig::new("blast", SchemeMode::LdcuMinmod2).with_nx(4000))?;
        let xp = x_centers(&r)[argmax(&r.solution.density())];
        let xr = x_centers(&reference)[argmax(&reference.solution.density())];
        let inside = |x: f64| x >= BLAST_PEAK_WINDOW.0 && x <= BLAST_PEAK_WINDOW.1;
        let ok = positive(&r) && positive(&reference) && inside(xp) && inside(xr);
        Ok((
            ok,
            format!(
                "min rho {:.3e}, min p {:.3e}, peak at x={xp:.4} (reference x={xr:.4})",
                r.summary.min_rho, r.summary.min_p
            ),
        ))
    })())
}

fn bits_equal<const N: usize>(a: &ConservedField<f64, N>, b: &ConservedField<f64, N>) -> bool {
    a.interior().zip(b.interior()).all(|((_, u), (_, v))| u.iter().zip(v).all(|(x, y)| x.to_bits() == y.to_bits()))
}

fn same_solution(a: &RunResult<f64>, b: &RunResult<f64>) -> bool {
    match (a.solution.as_1d(), b.solution.as_1d()) {
        (Some((_, fa)), Some((_, fb))) => bits_equal(fa, fb),
        _ => match (a.solution.as_2d(), b.solution.as_2d()) {
            (Some((_, fa)), Some((_, fb))) => bits_equal(fa, fb),
            _ => false,
        },
    }
}

/// Forced-mask NEW run against the matching fixed scheme.
fn forced_matches(problem: &str, nx: usize, t_final: f64, region: Region, fixed: SchemeMode) -> Result<bool> {
    let forced = RunConfig {
        c1: Some(0.5),
        c2: Some(0.5),
        t_final: Some(t_final),
        forced_region: Some(region),
        ..RunConfig::new(problem, SchemeMode::AdaptiveNew).with_nx(nx)
    };
    let plain = RunConfig { t_final: Some(t_final), ..RunConfig::new(problem, fixed).with_nx(nx) };
    Ok(same_solution(&run::<f64>(&forced)?, &run::<f64>(&plain)?))
}

pub fn mode_equivalence() -> Outcome {
    let title = "forced-mask equivalence";
    Outcome::from_result(6, title, (|| {
        let cases = [
            ("smooth1d", 400, 0.02, Region::C, SchemeMode::Quasi5),
            ("vortex2d", 80, 0.05, Region::C, SchemeMode::Quasi5),
            ("shock_density", 800, 0.5, Region::B, SchemeMode::LdcuMinmod2),
            ("rp3", 60, 0.1, Region::B, SchemeMode::LdcuMinmod2),
        ];
        let mut ok = true;
        let mut detail = Vec::new();
        for (p, nx, t, region, fixed) in cases {
            let same = forced_matches(p, nx, t, region, fixed)?;
            ok &= same;
            detail.push(format!("{p} all-{region:?} vs {fixed}: {}", if same { "identical" } else { "differs" }));
        }
        Ok((ok, detail.join("; ")))
    })())
}

/// Spacing of each 2-D smoke run.
pub const SMOKE_RUNS: [(&str, f64); 5] =
    [("rp3", 1.0 / 100.0), ("rp6", 1.0 / 150.0), ("rp12", 1.0 / 250.0), ("implosion", 1.0 / 200.0), ("rt", 1.0 / 128.0)];
pub const TIMING_DX: f64 = 1.0 / 400.0;

pub fn benchmarks_2d() -> Outcome {
    let title = "2-D benchmarks and timing";
    Outcome::from_result(8, title, (|| {
        let mut ok = true;
        let mut detail = Vec::new();
        for (name, h) in SMOKE_RUNS {
            let p = lookup(name)?;
            let (nx, ny) = (cells(p.x_range, h), cells(p.y_range, h));
            let r = run::<f64>(&RunConfig::new(name, SchemeMode::AdaptiveNew).with_mesh(nx, ny))?;
            let counts = r.final_mask.as_ref().map(|m| m.counts()).unwrap_or_default();
            let pass = positive(&r) && counts.a > 0 && counts.b > 0;
            ok &= pass;
            detail.push(format!("{name} {nx}x{ny}: A {} B {} cells{}", counts.a, counts.b, if pass { "" } else { " (FAILED)" }));
        }
        let p = lookup("shock_density")?;
        let cmp = compare("shock_density", cells(p.x_range, TIMING_DX), None, 1, None)?;
        ok &= cmp.ratio > 1.0;
        detail.push(format!(
            "shock_density OLD/NEW wall time {:.1}s/{:.1}s = {:.2}",
            cmp.old_median_s, cmp.new_median_s, cmp.ratio
        ));
        Ok((ok, detail.join("; ")))
    })())
}

/// Every check that runs from the library, in order.
pub fn run_all() -> Vec<Outcome> {
    vec![accuracy_1d(), accuracy_2d(), conservation(), robustness(), blast_wave(), mode_equivalence(), benchmarks_2d()]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mesh_counts_from_spacing() {
        assert_eq!(cells((0.0, 1.2), 1.0 / 100.0), 120);
        assert_eq!(cells((0.0, 0.6), 1.0 / 250.0), 150);
        assert_eq!(cells((-5.0, 15.0), 1.0 / 400.0), 8000);
    }

    #[test]
    fn total_variation_over_window() {
        let x = [0.0, 1.0, 2.0, 3.0, 4.0];
        let rho = [5.0, 1.0, 2.0, 1.0, 9.0];
        assert_eq!(total_variation(&rho, &x, (1.0, 3.0)), 2.0);
    }

    #[test]
    fn short_periodic_run_conserves() {
        let p = lookup("shock_density").unwrap();
        let d = periodic_drift(&p, SchemeMode::AdaptiveNew, 200, 5).unwrap();
        assert!(d.iter().all(|&v| v <= 1e-13), "{d:?}");
    }
}
