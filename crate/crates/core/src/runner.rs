//! Run driver: configuration, snapshots, logs, convergence studies, timing.

use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::euler::{GasConfig, PrimitiveState};
use crate::indicator::{Region, RegionCounts, RegionMask};
use crate::integrator::{field_minima, SchemeMode, Solver, SolverConfig, StepRecord, TimeStepPolicy};
use crate::mesh::{BoundarySpec, ConservedField, Grid1D, Grid2D};
use crate::problems::{lookup, ProblemSpec};
use crate::scalar::Real;

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub problem: String,
    pub mode: SchemeMode,
    /// Defaults to the catalog mesh.
    pub nx: Option<usize>,
    pub ny: Option<usize>,
    pub cfl: f64,
    pub accuracy_mode: bool,
    pub c1: Option<f64>,
    pub c2: Option<f64>,
    pub t_final: Option<f64>,
    /// Directory for snapshots, `run.log` and `summary.json`; nothing is
    /// written when `None`.
    pub out: Option<PathBuf>,
    /// Extra snapshot times; the final time is always written.
    pub snapshots: Vec<f64>,
    /// Replaces the catalog boundary conditions.
    pub boundary: Option<BoundarySpec<f64>>,
    /// Uses this region everywhere instead of the indicator.
    pub forced_region: Option<Region>,
}

impl RunConfig {
    pub fn new(problem: impl Into<String>, mode: SchemeMode) -> Self {
        Self {
            problem: problem.into(),
            mode,
            nx: None,
            ny: None,
            cfl: 0.4,
            accuracy_mode: false,
            c1: None,
            c2: None,
            t_final: None,
            out: None,
            snapshots: Vec::new(),
            boundary: None,
            forced_region: None,
        }
    }

    pub fn with_nx(mut self, nx: usize) -> Self {
        self.nx = Some(nx);
        self
    }

    pub fn with_mesh(mut self, nx: usize, ny: usize) -> Self {
        self.nx = Some(nx);
        self.ny = Some(ny);
        self
    }
}

/// Final numerical field together with its grid.
#[derive(Debug, Clone)]
pub enum Solution<T> {
    One { grid: Grid1D<T>, field: ConservedField<T, 3> },
    Two { grid: Grid2D<T>, field: ConservedField<T, 4> },
}

impl<T: Real> Solution<T> {
    pub fn nx(&self) -> usize {
        match self {
            Solution::One { grid, .. } => grid.n_cells,
            Solution::Two { grid, .. } => grid.nx,
        }
    }

    pub fn ny(&self) -> usize {
        match self {
            Solution::One { .. } => 1,
            Solution::Two { grid, .. } => grid.ny,
        }
    }

    pub fn as_1d(&self) -> Option<(&Grid1D<T>, &ConservedField<T, 3>)> {
        match self {
            Solution::One { grid, field } => Some((grid, field)),
            Solution::Two { .. } => None,
        }
    }

    pub fn as_2d(&self) -> Option<(&Grid2D<T>, &ConservedField<T, 4>)> {
        match self {
            Solution::Two { grid, field } => Some((grid, field)),
            Solution::One { .. } => None,
        }
    }

    /// Interior densities in storage order.
    pub fn density(&self) -> Vec<T> {
        match self {
            Solution::One { field, .. } => field.interior().map(|(_, u)| u[0]).collect(),
            Solution::Two { field, .. } => field.interior().map(|(_, u)| u[0]).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub struct AreaPercent {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl From<RegionCounts> for AreaPercent {
    fn from(c: RegionCounts) -> Self {
        let total = (c.a + c.b + c.c).max(1) as f64;
        Self {
            a: 100.0 * c.a as f64 / total,
            b: 100.0 * c.b as f64 / total,
            c: 100.0 * c.c as f64 / total,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct RunSummary {
    pub problem: String,
    pub mode: String,
    pub nx: usize,
    pub ny: usize,
    pub t_final: f64,
    pub steps: usize,
    pub wall_time_s: f64,
    pub min_rho: f64,
    pub min_p: f64,
    /// Area percentages of the final step's classification (adaptive modes).
    pub final_areas: Option<AreaPercent>,
}

#[derive(Debug, Clone)]
pub struct RunResult<T> {
    pub problem: ProblemSpec,
    pub solution: Solution<T>,
    pub t: T,
    pub log: Vec<StepRecord>,
    pub final_mask: Option<RegionMask>,
    pub summary: RunSummary,
    pub snapshot_files: Vec<PathBuf>,
}

/// Runs one configuration, writing artifacts when `config.out` is set.
pub fn run<T: Real>(config: &RunConfig) -> Result<RunResult<T>> {
    let problem = lookup(&config.problem)?;
    let t_final = config.t_final.unwrap_or(problem.t_final);
    if !(t_final > 0.0) {
        return Err(Error::config(format!("final time must be positive, got {t_final}")));
    }
    if !(config.cfl > 0.0) {
        return Err(Error::config(format!("CFL number must be positive, got {}", config.cfl)));
    }
    let mut targets: Vec<f64> = Vec::new();
    for &s in &config.snapshots {
        if !(0.0..=t_final).contains(&s) {
            return Err(Error::config(format!("snapshot time {s} outside [0, {t_final}]")));
        }
        targets.push(s);
    }
    targets.push(t_final);
    targets.sort_by(|a, b| a.total_cmp(b));
    targets.dedup();

    let nx = config.nx.unwrap_or(problem.default_nx);
    let ny = if problem.is_2d() { config.ny.or(config.nx).unwrap_or(problem.default_ny) } else { 1 };
    let indicator = problem.indicator_config::<T>(config.mode, config.c1, config.c2)?;
    let bc = match &config.boundary {
        Some(b) => ProblemSpec { bc: *b, ..problem }.boundary::<T>(),
        None => problem.boundary::<T>(),
    };
    let gas = problem.gas::<T>();
    let policy = TimeStepPolicy { cfl: T::lit(config.cfl), accuracy_mode: config.accuracy_mode };
    if let Some(dir) = &config.out {
        fs::create_dir_all(dir)?;
    }

    let mut meta = SnapshotMeta {
        problem: problem.name.to_string(),
        mode: config.mode.name().to_string(),
        t: 0.0,
        nx,
        ny,
        dx: 0.0,
        dy: None,
        gamma: problem.gamma,
    };
    let mut files = Vec::new();
    let start = Instant::now();
    let (solution, t, log, mask) = if problem.is_2d() {
        let grid = problem.grid_2d::<T>(nx, ny)?;
        meta.dx = grid.dx.as_f64();
        meta.dy = Some(grid.dy.as_f64());
        let cfg = SolverConfig {
            nx,
            ny,
            dx: grid.dx,
            dy: Some(grid.dy),
            bc,
            gas,
            mode: config.mode,
            indicator,
            policy,
            gravity: problem.gravity,
        };
        let field = problem.initial_field_2d(&grid);
        let mut write = |t: f64, f: &ConservedField<T, 4>, m: Option<&RegionMask>| -> Result<()> {
            if let Some(dir) = &config.out {
                let snap = Snapshot::from_2d(SnapshotMeta { t, ..meta.clone() }, &grid, f, &gas, m);
                files.push(snap.write_to_dir(dir)?);
            }
            Ok(())
        };
        let (field, t, log, mask) = drive(cfg, field, &targets, config.forced_region, &mut write)?;
        (Solution::Two { grid, field }, t, log, mask)
    } else {
        let grid = problem.grid_1d::<T>(nx)?;
        meta.dx = grid.dx.as_f64();
        let cfg = SolverConfig {
            nx,
            ny: 1,
            dx: grid.dx,
            dy: None,
            bc,
            gas,
            mode: config.mode,
            indicator,
            policy,
            gravity: false,
        };
        let field = problem.initial_field_1d(&grid);
        let mut write = |t: f64, f: &ConservedField<T, 3>, m: Option<&RegionMask>| -> Result<()> {
            if let Some(dir) = &config.out {
                let snap = Snapshot::from_1d(SnapshotMeta { t, ..meta.clone() }, &grid, f, &gas, m);
                files.push(snap.write_to_dir(dir)?);
            }
            Ok(())
        };
        let (field, t, log, mask) = drive(cfg, field, &targets, config.forced_region, &mut write)?;
        (Solution::One { grid, field }, t, log, mask)
    };
    let wall = start.elapsed().as_secs_f64();

    let (min_rho, min_p) = match &solution {
        Solution::One { field, .. } => field_minima(field, &gas),
        Solution::Two { field, .. } => field_minima(field, &gas),
    };
    let summary = RunSummary {
        problem: problem.name.to_string(),
        mode: config.mode.name().to_string(),
        nx,
        ny,
        t_final,
        steps: log.len(),
        wall_time_s: wall,
        min_rho,
        min_p,
        final_areas: mask.as_ref().map(|m| m.counts().into()),
    };
    if let Some(dir) = &config.out {
        write_log(&dir.join("run.log"), &log)?;
        fs::write(dir.join("summary.json"), serde_json::to_string_pretty(&summary)?)?;
    }
    Ok(RunResult { problem, solution, t, log, final_mask: mask, summary, snapshot_files: files })
}

type Driven<T, const N: usize> = (ConservedField<T, N>, T, Vec<StepRecord>, Option<RegionMask>);

fn drive<T: Real, const N: usize>(
    cfg: SolverConfig<T>,
    mut field: ConservedField<T, N>,
    targets: &[f64],
    forced: Option<Region>,
    write: &mut dyn FnMut(f64, &ConservedField<T, N>, Option<&RegionMask>) -> Result<()>,
) -> Result<Driven<T, N>> {
    let (nx, ny) = (cfg.nx, cfg.ny);
    let mut solver = Solver::new(cfg)?;
    if let Some(r) = forced {
        solver.force_mask(Some(RegionMask::uniform(nx, ny, r)))?;
    }
    let mut t = T::zero();
    let mut log = Vec::new();
    for &target in targets {
        solver.advance(&mut field, &mut t, T::lit(target), &mut log)?;
        write(target, &field, solver.last_mask())?;
    }
    let mask = solver.last_mask().cloned();
    Ok((field, t, log, mask))
}

fn write_log(path: &Path, log: &[StepRecord]) -> Result<()> {
    let mut out = std::io::BufWriter::new(fs::File::create(path)?);
    writeln!(out, "# step t dt min_rho min_p area_a area_b area_c")?;
    for (n, r) in log.iter().enumerate() {
        writeln!(
            out,
            "{} {:.9e} {:.6e} {:.6e} {:.6e} {} {} {}",
            n + 1,
            r.t,
            r.dt,
            r.min_rho,
            r.min_p,
            r.areas.a,
            r.areas.b,
            r.areas.c
        )?;
    }
    out.flush()?;
    Ok(())
}

// ---------------------------------------------------------------------------
// snapshots

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SnapshotMeta {
    pub problem: String,
    pub mode: String,
    pub t: f64,
    pub nx: usize,
    pub ny: usize,
    pub dx: f64,
    pub dy: Option<f64>,
    pub gamma: f64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub struct SnapshotRow {
    pub x: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub y: Option<f64>,
    pub rho: f64,
    pub u: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub v: Option<f64>,
    pub p: f64,
    #[serde(rename = "E")]
    pub e: f64,
    pub region: u8,
}

/// Primitive-variable table of one field, one row per interior cell.
///
/// On disk: a `# ` line holding the metadata as JSON, then CSV with columns
/// `x,[y,]rho,u,[v,]p,E,region`.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub meta: SnapshotMeta,
    pub rows: Vec<SnapshotRow>,
}

impl Snapshot {
    pub fn from_1d<T: Real>(
        meta: SnapshotMeta,
        grid: &Grid1D<T>,
        field: &ConservedField<T, 3>,
        gas: &GasConfig<T>,
        mask: Option<&RegionMask>,
    ) -> Self {
        let rows = field
            .interior()
            .map(|((i, _), u)| {
                let s = PrimitiveState::from_conserved_1d(u, gas);
                SnapshotRow {
                    x: grid.x(i as isize).as_f64(),
                    y: None,
                    rho: s.rho.as_f64(),
                    u: s.u.as_f64(),
                    v: None,
                    p: s.p.as_f64(),
                    e: u[2].as_f64(),
                    region: mask.map_or(0, |m| m.get(i, 0).code()),
                }
            })
            .collect();
        Self { meta, rows }
    }

    pub fn from_2d<T: Real>(
        meta: SnapshotMeta,
        grid: &Grid2D<T>,
        field: &ConservedField<T, 4>,
        gas: &GasConfig<T>,
        mask: Option<&RegionMask>,
    ) -> Self {
        let rows = field
            .interior()
            .map(|((i, k), u)| {
                let s = PrimitiveState::from_conserved_2d(u, gas);
                SnapshotRow {
                    x: grid.x(i as isize).as_f64(),
                    y: Some(grid.y(k as isize).as_f64()),
                    rho: s.rho.as_f64(),
                    u: s.u.as_f64(),
                    v: Some(s.v.as_f64()),
                    p: s.p.as_f64(),
                    e: u[3].as_f64(),
                    region: mask.map_or(0, |m| m.get(i, k).code()),
                }
            })
            .collect();
        Self { meta, rows }
    }

    pub fn file_name(&self) -> String {
        format!("{}_{}_t{:.6}.csv", self.meta.problem, self.meta.mode, self.meta.t)
    }

    pub fn write<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "# {}", serde_json::to_string(&self.meta)?)?;
        let mut csv = csv::Writer::from_writer(w);
        for r in &self.rows {
            csv.serialize(r)?;
        }
        csv.flush()?;
        Ok(())
    }

    pub fn write_to_dir(&self, dir: &Path) -> Result<PathBuf> {
        let path = dir.join(self.file_name());
        self.write(std::io::BufWriter::new(fs::File::create(&path)?))?;
        Ok(path)
    }

    pub fn read<R: BufRead>(mut r: R) -> Result<Self> {
        let mut first = String::new();
        r.read_line(&mut first)?;
        let json = first
            .trim_end()
            .strip_prefix("# ")
            .ok_or_else(|| Error::Snapshot("missing metadata line".into()))?;
        let meta: SnapshotMeta = serde_json::from_str(json)?;
        let mut csv = csv::Reader::from_reader(r);
        let rows = csv.deserialize().collect::<std::result::Result<Vec<SnapshotRow>, _>>()?;
        if rows.len() != meta.nx * meta.ny {
            return Err(Error::Snapshot(format!(
                "expected {} rows, found {}",
                meta.nx * meta.ny,
                rows.len()
            )));
        }
        Ok(Self { meta, rows })
    }

    pub fn read_file(path: &Path) -> Result<Self> {
        Self::read(BufReader::new(fs::File::open(path)?))
    }
}

// ---------------------------------------------------------------------------
// convergence

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ErrorMethod {
    /// Triple-mesh estimate from consecutive solution differences.
    Runge,
    /// Difference to the exact solution at cell centers.
    Exact,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceRow {
    pub dx: f64,
    /// Per variable; `None` where undefined.
    pub errors: Vec<Option<f64>>,
    pub rates: Vec<Option<f64>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceReport {
    pub problem: String,
    pub mode: String,
    pub method: ErrorMethod,
    pub variables: Vec<String>,
    pub rows: Vec<ConvergenceRow>,
}

impl ConvergenceReport {
    pub fn row(&self, dx: f64) -> Option<&ConvergenceRow> {
        self.rows.iter().find(|r| (r.dx - dx).abs() <= 1e-9 * dx)
    }

    pub fn to_table(&self) -> String {
        let mut s = format!("# {} {} ({:?})\n{:>12}", self.problem, self.mode, self.method, "dx");
        for v in &self.variables {
            s.push_str(&format!(" {:>12} {:>6}", format!("err({v})"), "rate"));
        }
        s.push('\n');
        let cell = |x: Option<f64>, prec: usize, sci: bool| match x {
            Some(v) if sci => format!("{v:.prec$e}"),
            Some(v) => format!("{v:.prec$}"),
            None => "-".to_string(),
        };
        for r in &self.rows {
            s.push_str(&format!("{:>12.6e}", r.dx));
            for (e, q) in r.errors.iter().zip(&r.rates) {
                s.push_str(&format!(" {:>12} {:>6}", cell(*e, 3, true), cell(*q, 2, false)));
            }
            s.push('\n');
        }
        s
    }
}

/// `(Error, Rate)` from the consecutive differences `d12 = |u_h - u_2h|` and
/// `d24 = |u_2h - u_4h|`. The error is undefined when `d12 == d24`.
pub fn runge_estimate(d12: f64, d24: f64) -> (Option<f64>, f64) {
    let rate = (d24 / d12).log2();
    let denom = (d12 - d24).abs();
    let err = if denom > 0.0 { Some(d12 * d12 / denom) } else { None };
    (err, rate)
}

/// Values of a periodic fine-mesh function at the coarse centers, by the
/// 6-point centered Lagrange interpolant at the midpoint of fine cells
/// `2i, 2i+1`. Non-periodic data are clamped at the ends.
pub fn restrict_to_coarse(fine: &[f64], periodic: bool) -> Vec<f64> {
    const W: [f64; 6] = [3.0, -25.0, 150.0, 150.0, -25.0, 3.0];
    let n = fine.len() as isize;
    let at = |j: isize| {
        let j = if periodic { j.rem_euclid(n) } else { j.clamp(0, n - 1) };
        fine[j as usize]
    };
    (0..n / 2)
        .map(|i| {
            W.iter()
                .enumerate()
                .map(|(m, w)| w * at(2 * i - 2 + m as isize))
                .sum::<f64>()
                / 256.0
        })
        .collect()
}

/// Averages consecutive blocks of `factor` cells (reference solutions).
pub fn block_average(fine: &[f64], factor: usize) -> Vec<f64> {
    fine.chunks_exact(factor).map(|c| c.iter().sum::<f64>() / factor as f64).collect()
}

fn l1(a: &[f64], b: &[f64], h: f64) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum::<f64>() * h
}

/// Runge triple-mesh study on a 1-D problem over the conserved variables
/// `rho, rho u, E`. `meshes` are cell counts, each twice the previous.
pub fn runge_convergence(
    problem: &str,
    mode: SchemeMode,
    meshes: &[usize],
    accuracy_mode: bool,
) -> Result<ConvergenceReport> {
    if meshes.len() < 3 {
        return Err(Error::config("a Runge study needs at least three meshes"));
    }
    if meshes.windows(2).any(|w| w[1] != 2 * w[0]) {
        return Err(Error::config("each mesh must refine the previous one by a factor of two"));
    }
    let spec = lookup(problem)?;
    if spec.is_2d() {
        return Err(Error::config("Runge studies are implemented for 1-D problems"));
    }
    let periodic = spec.bc.periodic_x();
    let mut sols: Vec<[Vec<f64>; 3]> = Vec::new();
    let mut dxs = Vec::new();
    for &n in meshes {
        let cfg = RunConfig { accuracy_mode, ..RunConfig::new(problem, mode).with_nx(n) };
        let res = run::<f64>(&cfg)?;
        let (grid, field) = res.solution.as_1d().expect("1-D problem");
        dxs.push(grid.dx);
        let comp = |d: usize| field.interior().map(|(_, u)| u[d]).collect::<Vec<_>>();
        sols.push([comp(0), comp(1), comp(2)]);
    }
    // diff[m] = |u_m - u_{m-1}| on mesh m-1
    let diffs: Vec<[f64; 3]> = (1..sols.len())
        .map(|m| {
            std::array::from_fn(|d| {
                let r = restrict_to_coarse(&sols[m][d], periodic);
                l1(&r, &sols[m - 1][d], dxs[m - 1])
            })
        })
        .collect();
    let mut rows = Vec::new();
    for m in 2..sols.len() {
        let mut errors = Vec::new();
        let mut rates = Vec::new();
        for d in 0..3 {
            let (e, r) = runge_estimate(diffs[m - 1][d], diffs[m - 2][d]);
            errors.push(e);
            rates.push(Some(r));
        }
        rows.push(ConvergenceRow { dx: dxs[m], errors, rates });
    }
    Ok(ConvergenceReport {
        problem: problem.to_string(),
        mode: mode.name().to_string(),
        method: ErrorMethod::Runge,
        variables: vec!["rho".into(), "rho*u".into(), "E".into()],
        rows,
    })
}

/// L¹ errors of `rho, u, v, p` against the problem's exact solution.
pub fn l1_error_vs_exact<T: Real>(result: &RunResult<T>) -> Result<[f64; 4]> {
    let exact = result
        .problem
        .exact
        .ok_or_else(|| Error::config(format!("problem `{}` has no exact solution", result.problem.name)))?;
    let gamma = result.problem.gamma;
    let t = result.t.as_f64();
    let gas = result.problem.gas::<T>();
    let mut err = [0.0; 4];
    match &result.solution {
        Solution::Two { grid, field } => {
            for ((i, k), u) in field.interior() {
                let s = PrimitiveState::from_conserved_2d(u, &gas);
                let e = exact(grid.x(i as isize).as_f64(), grid.y(k as isize).as_f64(), t, gamma);
                let num = [s.rho, s.u, s.v, s.p].map(Real::as_f64);
                for (acc, (a, b)) in err.iter_mut().zip(num.iter().zip([e.rho, e.u, e.v, e.p])) {
                    *acc += (a - b).abs();
                }
            }
            let area = grid.cell_area().as_f64();
            Ok(err.map(|e| e * area))
        }
        Solution::One { grid, field } => {
            for ((i, _), u) in field.interior() {
                let s = PrimitiveState::from_conserved_1d(u, &gas);
                let e = exact(grid.x(i as isize).as_f64(), 0.0, t, gamma);
                let num = [s.rho, s.u, s.v, s.p].map(Real::as_f64);
                for (acc, (a, b)) in err.iter_mut().zip(num.iter().zip([e.rho, e.u, e.v, e.p])) {
                    *acc += (a - b).abs();
                }
            }
            Ok(err.map(|e| e * grid.dx.as_f64()))
        }
    }
}

/// Exact-solution study on a 2-D problem over `rho, u, v, p`. `meshes` are
/// cells per direction, each twice the previous.
pub fn exact_convergence(
    problem: &str,
    mode: SchemeMode,
    meshes: &[usize],
    accuracy_mode: bool,
) -> Result<ConvergenceReport> {
    if meshes.len() < 2 {
        return Err(Error::config("a convergence study needs at least two meshes"));
    }
    let mut rows: Vec<ConvergenceRow> = Vec::new();
    let mut prev: Option<[f64; 4]> = None;
    for &n in meshes {
        let cfg = RunConfig { accuracy_mode, ..RunConfig::new(problem, mode).with_mesh(n, n) };
        let res = run::<f64>(&cfg)?;
        let e = l1_error_vs_exact(&res)?;
        let dx = res.solution.as_2d().map_or_else(
            || res.solution.as_1d().map(|(g, _)| g.dx).unwrap_or(f64::NAN),
            |(g, _)| g.dx,
        );
        let rates = match prev {
            Some(p) => (0..4).map(|d| Some((p[d] / e[d]).log2())).collect(),
            None => vec![None; 4],
        };
        rows.push(ConvergenceRow { dx, errors: e.iter().map(|v| Some(*v)).collect(), rates });
        prev = Some(e);
    }
    Ok(ConvergenceReport {
        problem: problem.to_string(),
        mode: mode.name().to_string(),
        method: ErrorMethod::Exact,
        variables: vec!["rho".into(), "u".into(), "v".into(), "p".into()],
        rows,
    })
}

// ---------------------------------------------------------------------------
// timing comparison

#[derive(Debug, Clone, Serialize)]
pub struct CompareReport {
    pub problem: String,
    pub nx: usize,
    pub repeats: usize,
    pub new_median_s: f64,
    pub old_median_s: f64,
    /// OLD wall time over NEW wall time.
    pub ratio: f64,
    pub reference_nx: Option<usize>,
    /// L¹ density distance to the block-averaged reference (1-D only).
    pub new_l1_rho: Option<f64>,
    pub old_l1_rho: Option<f64>,
}

pub fn median(values: &mut [f64]) -> f64 {
    values.sort_by(|a, b| a.total_cmp(b));
    let n = values.len();
    if n == 0 {
        f64::NAN
    } else if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

/// Times NEW against OLD on the same mesh. With `reference_nx`, a Minmod2
/// LDCU run on that mesh serves as reference for density errors.
pub fn compare(problem: &str, nx: usize, ny: Option<usize>, repeats: usize, reference_nx: Option<usize>) -> Result<CompareReport> {
    if repeats == 0 {
        return Err(Error::config("repeat count must be at least one"));
    }
    let mesh = |mode| {
        let mut c = RunConfig::new(problem, mode).with_nx(nx);
        c.ny = ny;
        c
    };
    let times = |mode| -> Result<(f64, RunResult<f64>)> {
        let mut ts = Vec::with_capacity(repeats);
        let mut last = None;
        for _ in 0..repeats {
            let r = run::<f64>(&mesh(mode))?;
            ts.push(r.summary.wall_time_s);
            last = Some(r);
        }
        Ok((median(&mut ts), last.expect("repeats >= 1")))
    };
    let (new_t, new_r) = times(SchemeMode::AdaptiveNew)?;
    let (old_t, old_r) = times(SchemeMode::AdaptiveOld)?;
    let (mut new_l1, mut old_l1) = (None, None);
    if let Some(rn) = reference_nx {
        if rn % nx != 0 {
            return Err(Error::config("reference mesh must be a multiple of the run mesh"));
        }
        let reference = run::<f64>(&RunConfig::new(problem, SchemeMode::LdcuMinmod2).with_nx(rn))?;
        if let Some((g, _)) = new_r.solution.as_1d() {
            let r = block_average(&reference.solution.density(), rn / nx);
            new_l1 = Some(l1(&new_r.solution.density(), &r, g.dx));
            old_l1 = Some(l1(&old_r.solution.density(), &r, g.dx));
        }
    }
    Ok(CompareReport {
        problem: problem.to_string(),
        nx,
        repeats,
        new_median_s: new_t,
        old_median_s: old_t,
        ratio: old_t / new_t,
        reference_nx,
        new_l1_rho: new_l1,
        old_l1_rho: old_l1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn runge_formula_examples() {
        let (err, rate) = runge_estimate(1e-3, 3.2e-2);
        assert!((rate - 5.0).abs() < 1e-12);
        assert!((err.unwrap() - 1e-6 / 3.1e-2).abs() < 1e-15);
        assert!((err.unwrap() - 3.2258e-5).abs() < 1e-9);
        assert_eq!(runge_estimate(1e-3, 1e-3).0, None);
    }

    #[test]
    fn restriction_is_exact_for_quintics() {
        let n = 64;
        let f = |x: f64| 1.0 + x - 2.0 * x.powi(2) + 0.5 * x.powi(3) + x.powi(4) - 0.3 * x.powi(5);
        let fine: Vec<f64> = (0..n).map(|j| f((j as f64 + 0.5) / n as f64)).collect();
        let coarse = restrict_to_coarse(&fine, false);
        for i in 3..n / 2 - 3 {
            let x = (i as f64 + 0.5) / (n / 2) as f64;
            assert!((coarse[i] - f(x)).abs() < 1e-13, "{i}");
        }
    }

    #[test]
    fn block_average_of_pairs() {
        assert_eq!(block_average(&[1.0, 3.0, 5.0, 7.0], 2), vec![2.0, 6.0]);
    }

    #[test]
    fn median_even_and_odd() {
        assert_eq!(median(&mut [3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&mut [4.0, 1.0, 2.0, 3.0]), 2.5);
    }

    #[test]
    fn snapshot_round_trip() {
        let cfg = RunConfig::new("blast", SchemeMode::AdaptiveNew).with_nx(40);
        let cfg = RunConfig { t_final: Some(0.002), ..cfg };
        let res = run::<f64>(&cfg).unwrap();
        let (grid, field) = res.solution.as_1d().unwrap();
        let meta = SnapshotMeta {
            problem: "blast".into(),
            mode: "adaptive-new".into(),
            t: 0.002,
            nx: 40,
            ny: 1,
            dx: grid.dx,
            dy: None,
            gamma: 1.4,
        };
        let snap = Snapshot::from_1d(meta, grid, field, &res.problem.gas(), res.final_mask.as_ref());
        let mut buf = Vec::new();
        snap.write(&mut buf).unwrap();
        let back = Snapshot::read(&buf[..]).unwrap();
        assert_eq!(back, snap);
    }

    #[test]
    fn repeated_runs_write_identical_snapshots() {
        let cfg = RunConfig { t_final: Some(0.05), ..RunConfig::new("rp3", SchemeMode::AdaptiveNew).with_mesh(30, 30) };
        let bytes = || {
            let res = run::<f64>(&cfg).unwrap();
            let (grid, field) = res.solution.as_2d().unwrap();
            let meta = SnapshotMeta {
                problem: "rp3".into(),
                mode: "adaptive-new".into(),
                t: 0.05,
                nx: 30,
                ny: 30,
                dx: grid.dx,
                dy: Some(grid.dy),
                gamma: 1.4,
            };
            let mut buf = Vec::new();
            Snapshot::from_2d(meta, grid, field, &res.problem.gas(), res.final_mask.as_ref()).write(&mut buf).unwrap();
            buf
        };
        assert_eq!(bytes(), bytes());
    }

    #[test]
    fn snapshot_rejects_missing_header() {
        assert!(Snapshot::read("x,rho\n1,2\n".as_bytes()).is_err());
    }
}
