//! SSP-RK3 time stepping with per-interface scheme dispatch.
//!
//! One solver core serves both dimensionalities: a 1-D field is a single row
//! (`N = 3`) and only x-interfaces exist; a 2-D field (`N = 4`) adds the
//! y-interfaces. Every interface carries exactly one flux value per stage,
//! so the update is conservative regardless of how schemes are mixed.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::euler::{
    basis_at, eos_pressure, interface_speeds, physical_flux, rt_gravity_source, Axis, GasConfig,
    PrimitiveState,
};
use crate::indicator::{classify, indicator_1d, indicator_2d, IndicatorConfig, Region, RegionCounts, RegionMask};
use crate::ldcu::ldcu_flux_with_speeds;
use crate::limiters::LimiterParams;
use crate::mesh::{fill_ghosts, BoundarySpec, ConservedField, Grid1D, Grid2D, GHOST};
use crate::quasilinear::{l_flux, omega_factor, omega_unchecked};
use crate::reconstruction::reconstruct_interface;
use crate::scalar::{Real, Vector};

/// Numerical scheme selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum SchemeMode {
    /// LDCU with the dissipative Minmod2 limiter everywhere.
    LdcuMinmod2,
    /// LDCU with the overcompressive SBM limiter everywhere.
    LdcuSbm,
    /// Quasi-linear fifth-order scheme everywhere.
    Quasi5,
    /// Overcompressive LDCU in rough cells, Minmod2 LDCU elsewhere.
    AdaptiveOld,
    /// Overcompressive LDCU in rough cells, fifth-order elsewhere.
    AdaptiveModified,
    /// Overcompressive LDCU at contacts, Minmod2 LDCU in other rough cells,
    /// fifth-order in smooth cells.
    AdaptiveNew,
}

impl SchemeMode {
    pub const ALL: [SchemeMode; 6] = [
        SchemeMode::LdcuMinmod2,
        SchemeMode::LdcuSbm,
        SchemeMode::Quasi5,
        SchemeMode::AdaptiveOld,
        SchemeMode::AdaptiveModified,
        SchemeMode::AdaptiveNew,
    ];

    pub fn is_adaptive(self) -> bool {
        matches!(self, SchemeMode::AdaptiveOld | SchemeMode::AdaptiveModified | SchemeMode::AdaptiveNew)
    }

    pub fn needs_contact_threshold(self) -> bool {
        self == SchemeMode::AdaptiveNew
    }

    pub fn name(self) -> &'static str {
        match self {
            SchemeMode::LdcuMinmod2 => "ldcu-minmod2",
            SchemeMode::LdcuSbm => "ldcu-sbm",
            SchemeMode::Quasi5 => "quasi5",
            SchemeMode::AdaptiveOld => "adaptive-old",
            SchemeMode::AdaptiveModified => "adaptive-modified",
            SchemeMode::AdaptiveNew => "adaptive-new",
        }
    }
}

impl fmt::Display for SchemeMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SchemeMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('_', "-");
        let mode = match key.as_str() {
            "ldcu-minmod2" | "minmod2" => SchemeMode::LdcuMinmod2,
            "ldcu-sbm" | "sbm" | "ldcu-overcompressive" => SchemeMode::LdcuSbm,
            "quasi5" | "fifth-order" => SchemeMode::Quasi5,
            "adaptive-old" | "old" => SchemeMode::AdaptiveOld,
            "adaptive-modified" | "modified" => SchemeMode::AdaptiveModified,
            "adaptive-new" | "new" => SchemeMode::AdaptiveNew,
            _ => {
                let names: Vec<_> = SchemeMode::ALL.iter().map(|m| m.name()).collect();
                return Err(Error::config(format!("unknown mode `{s}`; expected one of {}", names.join(", "))));
            }
        };
        Ok(mode)
    }
}

/// Flux chosen for one interface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SchemeChoice<T> {
    Quasi5,
    Ldcu(LimiterParams<T>),
}

/// Scheme for the interface between stencil positions 2 and 3 of the six
/// cells `j-2 ..= j+3`.
///
/// * NEW: any B in the stencil gives Minmod2 LDCU, otherwise any A gives
///   overcompressive LDCU, otherwise the fifth-order flux.
/// * MODIFIED: any rough cell in the stencil gives overcompressive LDCU.
/// * OLD: a rough cell on either side of the interface gives overcompressive
///   LDCU, otherwise Minmod2 LDCU.
pub fn dispatch_interface_flux<T: Real>(stencil: &[Region; 6], mode: SchemeMode) -> SchemeChoice<T> {
    let rough = |r: &Region| *r != Region::C;
    match mode {
        SchemeMode::LdcuMinmod2 => SchemeChoice::Ldcu(LimiterParams::minmod2()),
        SchemeMode::LdcuSbm => SchemeChoice::Ldcu(LimiterParams::overcompressive()),
        SchemeMode::Quasi5 => SchemeChoice::Quasi5,
        SchemeMode::AdaptiveOld => {
            if rough(&stencil[2]) || rough(&stencil[3]) {
                SchemeChoice::Ldcu(LimiterParams::overcompressive())
            } else {
                SchemeChoice::Ldcu(LimiterParams::minmod2())
            }
        }
        SchemeMode::AdaptiveModified => {
            if stencil.iter().any(rough) {
                SchemeChoice::Ldcu(LimiterParams::overcompressive())
            } else {
                SchemeChoice::Quasi5
            }
        }
        SchemeMode::AdaptiveNew => {
            if stencil.contains(&Region::B) {
                SchemeChoice::Ldcu(LimiterParams::minmod2())
            } else if stencil.contains(&Region::A) {
                SchemeChoice::Ldcu(LimiterParams::overcompressive())
            } else {
                SchemeChoice::Quasi5
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeStepPolicy<T> {
    /// CFL number; 0.4 unless overridden.
    pub cfl: T,
    /// Accuracy studies of the fifth-order scheme: `dt = h^(5/3)`, bounded
    /// only by the stability limit `h / (2 a)`. The CFL number is ignored.
    pub accuracy_mode: bool,
}

/// CFL bound kept in accuracy mode.
pub const ACCURACY_STABILITY_CFL: f64 = 0.5;

impl<T: Real> Default for TimeStepPolicy<T> {
    fn default() -> Self {
        Self { cfl: T::lit(0.4), accuracy_mode: false }
    }
}

impl<T: Real> TimeStepPolicy<T> {
    /// Time step from the maximal one-sided speeds `a` (x) and `b` (y; zero in
    /// 1-D), before clipping to the remaining time.
    pub fn dt_from_speeds(&self, a: T, dx: T, b: T, dy: Option<T>) -> Option<T> {
        let cfl = if self.accuracy_mode { T::lit(ACCURACY_STABILITY_CFL) } else { self.cfl };
        let mut dt: Option<T> = None;
        if a > T::zero() {
            dt = Some(cfl * dx / a);
        }
        if let Some(dy) = dy {
            if b > T::zero() {
                let by = cfl * dy / b;
                dt = Some(dt.map_or(by, |d| d.min(by)));
            }
        }
        if self.accuracy_mode {
            let h = dy.map_or(dx, |dy| dx.min(dy));
            let cap = h.powf(T::lit(5.0 / 3.0));
            dt = Some(dt.map_or(cap, |d| d.min(cap)));
        }
        dt
    }
}

/// Per-step log entry.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct StepRecord {
    pub t: f64,
    pub dt: f64,
    pub min_rho: f64,
    pub min_p: f64,
    pub areas: RegionCounts,
    /// Interface evaluations that fell back to first order, summed over the
    /// three stages.
    pub low_order_faces: usize,
}

/// Solver configuration shared by both dimensionalities.
#[derive(Debug, Clone)]
pub struct SolverConfig<T> {
    pub nx: usize,
    pub ny: usize,
    pub dx: T,
    /// `None` for 1-D.
    pub dy: Option<T>,
    pub bc: BoundarySpec<T>,
    pub gas: GasConfig<T>,
    pub mode: SchemeMode,
    pub indicator: Option<IndicatorConfig<T>>,
    pub policy: TimeStepPolicy<T>,
    pub gravity: bool,
}

#[derive(Debug, Default)]
struct Workspace<T, const N: usize> {
    choice_x: Vec<SchemeChoice<T>>,
    choice_y: Vec<SchemeChoice<T>>,
    phys_x: Vec<Vector<T, N>>,
    phys_y: Vec<Vector<T, N>>,
    flux_x: Vec<Vector<T, N>>,
    flux_y: Vec<Vector<T, N>>,
    low_x: Vec<bool>,
    low_y: Vec<bool>,
    /// Interfaces switched to first order since the counter was reset.
    low_faces: usize,
    any_quasi5: bool,
}

/// Adaptive finite-volume / finite-difference solver for `N`-component Euler
/// fields (`N = 3` in 1-D, `N = 4` in 2-D).
#[derive(Debug)]
pub struct Solver<T, const N: usize> {
    config: SolverConfig<T>,
    forced_mask: Option<RegionMask>,
    last_mask: Option<RegionMask>,
    work: Workspace<T, N>,
}

pub type Solver1D<T> = Solver<T, 3>;
pub type Solver2D<T> = Solver<T, 4>;

impl<T: Real> Solver<T, 3> {
    pub fn new_1d(
        grid: &Grid1D<T>,
        bc: BoundarySpec<T>,
        gas: GasConfig<T>,
        mode: SchemeMode,
        indicator: Option<IndicatorConfig<T>>,
        policy: TimeStepPolicy<T>,
    ) -> Result<Self> {
        Self::new(SolverConfig {
            nx: grid.n_cells,
            ny: 1,
            dx: grid.dx,
            dy: None,
            bc,
            gas,
            mode,
            indicator,
            policy,
            gravity: false,
        })
    }
}

impl<T: Real> Solver<T, 4> {
    pub fn new_2d(
        grid: &Grid2D<T>,
        bc: BoundarySpec<T>,
        gas: GasConfig<T>,
        mode: SchemeMode,
        indicator: Option<IndicatorConfig<T>>,
        policy: TimeStepPolicy<T>,
        gravity: bool,
    ) -> Result<Self> {
        Self::new(SolverConfig {
            nx: grid.nx,
            ny: grid.ny,
            dx: grid.dx,
            dy: Some(grid.dy),
            bc,
            gas,
            mode,
            indicator,
            policy,
            gravity,
        })
    }
}

impl<T: Real, const N: usize> Solver<T, N> {
    pub fn new(config: SolverConfig<T>) -> Result<Self> {
        let two_d = config.dy.is_some();
        if (N == 4) != two_d || !(N == 3 || N == 4) {
            return Err(Error::config("component count does not match grid dimensionality"));
        }
        if config.gravity && !two_d {
            return Err(Error::config("gravity source is only defined in 2-D"));
        }
        config.bc.validate(two_d)?;
        if !(config.policy.cfl > T::zero()) {
            return Err(Error::config("CFL number must be positive"));
        }
        if config.mode.is_adaptive() {
            let ind = config
                .indicator
                .as_ref()
                .ok_or_else(|| Error::config(format!("{} needs adaption constants", config.mode)))?;
            ind.validate()?;
            if config.mode.needs_contact_threshold() && ind.c2.is_none() {
                return Err(Error::config("adaptive-new needs both C1 and C2"));
            }
        }
        Ok(Self { config, forced_mask: None, last_mask: None, work: Workspace::default() })
    }

    pub fn config(&self) -> &SolverConfig<T> {
        &self.config
    }

    /// Replaces the indicator-driven classification by a fixed mask.
    pub fn force_mask(&mut self, mask: Option<RegionMask>) -> Result<()> {
        if let Some(m) = &mask {
            if m.nx != self.config.nx || m.ny != self.config.ny {
                return Err(Error::config("forced mask shape does not match the grid"));
            }
        }
        self.forced_mask = mask;
        Ok(())
    }

    /// Mask used by the most recent step (adaptive modes only).
    pub fn last_mask(&self) -> Option<&RegionMask> {
        self.last_mask.as_ref()
    }

    pub fn fill_ghosts(&self, field: &mut ConservedField<T, N>) -> Result<()> {
        fill_ghosts(field, &self.config.bc, &self.config.gas)
    }

    fn check_shape(&self, field: &ConservedField<T, N>) -> Result<()> {
        if field.nx() != self.config.nx || field.ny() != self.config.ny {
            return Err(Error::config("field shape does not match the solver grid"));
        }
        Ok(())
    }

    /// Region classification of `field` (ghosts must be filled).
    pub fn classify(&self, field: &ConservedField<T, N>) -> Result<RegionMask> {
        let cfg = &self.config;
        let ind = cfg
            .indicator
            .as_ref()
            .ok_or_else(|| Error::config("classification needs adaption constants"))?;
        let gas = &cfg.gas;
        let rho: Vec<T> = field.cells().iter().map(|u| u[0]).collect();
        let p: Vec<T> = field.cells().iter().map(|u| eos_pressure(u, gas)).collect();
        let with_p = ind.c2.is_some();
        let (rho_bar, p_bar) = if cfg.dy.is_some() {
            let r = indicator_2d(&rho, cfg.nx, cfg.ny, GHOST, ind.epsilon)?;
            let q = if with_p { Some(indicator_2d(&p, cfg.nx, cfg.ny, GHOST, ind.epsilon)?) } else { None };
            (r.smoothed, q.map(|q| q.smoothed))
        } else {
            let r = indicator_1d(&rho, GHOST, ind.epsilon)?;
            let q = if with_p { Some(indicator_1d(&p, GHOST, ind.epsilon)?) } else { None };
            (r.smoothed, q.map(|q| q.smoothed))
        };
        classify(&rho_bar, p_bar.as_deref(), cfg.nx, cfg.ny, ind)
    }

    /// Stable time step for `field` (ghosts must be filled), clipped to
    /// `remaining`. A static field takes the whole remaining interval.
    pub fn compute_dt(&self, field: &ConservedField<T, N>, remaining: T) -> Result<T> {
        let cfg = &self.config;
        let gas = &cfg.gas;
        let prim = |i: isize, k: isize| PrimitiveState::from_conserved(field.get(i, k), gas);
        let (nx, ny) = (cfg.nx as isize, cfg.ny as isize);
        let mut a = T::zero();
        for k in 0..ny {
            for i in 0..=nx {
                a = a.max(interface_speeds(&prim(i - 1, k), &prim(i, k), Axis::X, gas)?.max_abs());
            }
        }
        let mut b = T::zero();
        if cfg.dy.is_some() {
            for k in 0..=ny {
                for i in 0..nx {
                    b = b.max(interface_speeds(&prim(i, k - 1), &prim(i, k), Axis::Y, gas)?.max_abs());
                }
            }
        }
        let dt = cfg.policy.dt_from_speeds(a, cfg.dx, b, cfg.dy).unwrap_or(remaining);
        Ok(dt.min(remaining))
    }

    /// Advances `field` by one SSP-RK3 step of size `dt` starting at time `t`.
    pub fn step(&mut self, field: &mut ConservedField<T, N>, t: T, dt: T) -> Result<StepRecord> {
        self.check_shape(field)?;
        if !(dt > T::zero()) {
            return Err(Error::config(format!("time step must be positive, got {dt}")));
        }
        self.fill_ghosts(field)?;
        let mask = if let Some(m) = &self.forced_mask {
            Some(m.clone())
        } else if self.config.mode.is_adaptive() {
            Some(self.classify(field)?)
        } else {
            None
        };
        self.plan_interfaces(mask.as_ref());

        self.work.low_faces = 0;
        let u0 = field.clone();
        let config = &self.config;
        let work = &mut self.work;
        let next = ssp_rk3_step(&u0, dt, |stage, state, residual| {
            if stage > 0 {
                check_valid(state, &config.gas, t, stage - 1)?;
                fill_ghosts(state, &config.bc, &config.gas)?;
            }
            stage_residual(config, work, stage, state, &u0, dt, residual)
        })?;
        check_valid(&next, &self.config.gas, t, 2)?;
        *field = next;
        self.fill_ghosts(field)?;

        let (min_rho, min_p) = field_minima(field, &self.config.gas);
        let areas = mask.as_ref().map(RegionMask::counts).unwrap_or_default();
        self.last_mask = mask;
        Ok(StepRecord {
            t: (t + dt).as_f64(),
            dt: dt.as_f64(),
            min_rho,
            min_p,
            areas,
            low_order_faces: self.work.low_faces,
        })
    }

    /// Steps from `t` to `t_target`, landing on it exactly. Records are
    /// appended to `log`. Returns the number of steps taken.
    pub fn advance(
        &mut self,
        field: &mut ConservedField<T, N>,
        t: &mut T,
        t_target: T,
        log: &mut Vec<StepRecord>,
    ) -> Result<usize> {
        let mut steps = 0;
        // remaining intervals below this are round-off of the clipped last step
        let tiny = T::epsilon() * T::lit(16.0) * t_target.abs().max(T::one());
        while t_target - *t > tiny {
            self.fill_ghosts(field)?;
            let dt = self.compute_dt(field, t_target - *t)?;
            let rec = self.step(field, *t, dt)?;
            *t = if t_target - (*t + dt) <= tiny { t_target } else { *t + dt };
            log.push(rec);
            steps += 1;
        }
        Ok(steps)
    }

    /// Fixes the scheme of every interface for the coming step.
    fn plan_interfaces(&mut self, mask: Option<&RegionMask>) {
        let cfg = &self.config;
        let mode = cfg.mode;
        let (nx, ny) = (cfg.nx, cfg.ny);
        let work = &mut self.work;
        let stencil_at = |axis: Axis, i: isize, k: isize| -> [Region; 6] {
            match mask {
                None => [Region::C; 6],
                Some(m) => std::array::from_fn(|s| {
                    let off = s as isize - 2;
                    let (ci, ck) = match axis {
                        Axis::X => (i + off, k),
                        Axis::Y => (i, k + off),
                    };
                    let ci = wrap_or_clamp(ci, nx, cfg.bc.periodic_x());
                    let ck = wrap_or_clamp(ck, ny, cfg.bc.periodic_y());
                    m.get(ci, ck)
                }),
            }
        };
        work.choice_x.clear();
        for k in 0..ny as isize {
            for m in 0..=nx as isize {
                work.choice_x.push(dispatch_interface_flux(&stencil_at(Axis::X, m - 1, k), mode));
            }
        }
        work.choice_y.clear();
        if cfg.dy.is_some() {
            for m in 0..=ny as isize {
                for i in 0..nx as isize {
                    work.choice_y.push(dispatch_interface_flux(&stencil_at(Axis::Y, i, m - 1), mode));
                }
            }
        }
        work.any_quasi5 = work
            .choice_x
            .iter()
            .chain(&work.choice_y)
            .any(|c| matches!(c, SchemeChoice::Quasi5));
    }
}

#[inline]
fn wrap_or_clamp(i: isize, n: usize, periodic: bool) -> usize {
    if periodic {
        i.rem_euclid(n as isize) as usize
    } else {
        i.clamp(0, n as isize - 1) as usize
    }
}

/// Three-stage SSP Runge-Kutta step
///
/// ```text
/// U1  = U0 + dt R(U0)
/// U2  = 3/4 U0 + 1/4 (U1 + dt R(U1))
/// U^+ = 1/3 U0 + 2/3 (U2 + dt R(U2))
/// ```
///
/// `rhs(stage, state, residual)` writes `R(state)` for the interior cells (in
/// storage order) and may refresh the ghosts of `state`.
pub fn ssp_rk3_step<T, const N: usize, F>(
    u0: &ConservedField<T, N>,
    dt: T,
    mut rhs: F,
) -> Result<ConservedField<T, N>>
where
    T: Real,
    F: FnMut(usize, &mut ConservedField<T, N>, &mut Vec<Vector<T, N>>) -> Result<()>,
{
    let (w0, w1) = (
        [T::zero(), T::lit(0.75), T::one() / T::lit(3.0)],
        [T::one(), T::lit(0.25), T::two() / T::lit(3.0)],
    );
    let mut state = u0.clone();
    let mut residual = Vec::with_capacity(u0.len());
    for stage in 0..3 {
        residual.clear();
        rhs(stage, &mut state, &mut residual)?;
        if residual.len() != u0.len() {
            return Err(Error::config("residual length does not match the interior"));
        }
        let (a, b) = (w0[stage], w1[stage]);
        let mut idx = 0;
        for k in 0..u0.ny() as isize {
            for i in 0..u0.nx() as isize {
                let base = u0.get(i, k);
                let cur = state.get_mut(i, k);
                let r = &residual[idx];
                for d in 0..N {
                    let advanced = cur[d] + dt * r[d];
                    cur[d] = if stage == 0 { advanced } else { a * base[d] + b * advanced };
                }
                idx += 1;
            }
        }
    }
    Ok(state)
}

fn check_valid<T: Real, const N: usize>(
    field: &ConservedField<T, N>,
    gas: &GasConfig<T>,
    t: T,
    stage: usize,
) -> Result<()> {
    for ((i, k), u) in field.interior() {
        let p = eos_pressure(u, gas);
        let finite = u.iter().all(|v| v.is_finite());
        if !finite || !(u[0] > T::zero()) || !(p > T::zero()) {
            let cell = if field.is_2d() { format!("({i}, {k})") } else { format!("{i}") };
            return Err(Error::BlowUp {
                t: t.as_f64(),
                stage: stage + 1,
                cell,
                reason: format!("rho = {}, p = {}", u[0], p),
            });
        }
    }
    Ok(())
}

/// Interior minima of density and pressure.
pub fn field_minima<T: Real, const N: usize>(field: &ConservedField<T, N>, gas: &GasConfig<T>) -> (f64, f64) {
    let mut min_rho = f64::INFINITY;
    let mut min_p = f64::INFINITY;
    for (_, u) in field.interior() {
        min_rho = min_rho.min(u[0].as_f64());
        min_p = min_p.min(eos_pressure(u, gas).as_f64());
    }
    (min_rho, min_p)
}

/// `-(F_{j+1/2} - F_{j-1/2}) / dx - (G_{k+1/2} - G_{k-1/2}) / dy + S`
/// for every interior cell of `state`, whose ghosts are filled.
///
/// Cells whose forward-Euler candidate `U + dt R` is not admissible get all
/// their interface fluxes replaced by first-order LDCU fluxes, repeated until
/// no new cell is flagged.
fn stage_residual<T: Real, const N: usize>(
    cfg: &SolverConfig<T>,
    work: &mut Workspace<T, N>,
    stage: usize,
    state: &ConservedField<T, N>,
    u0: &ConservedField<T, N>,
    dt: T,
    residual: &mut Vec<Vector<T, N>>,
) -> Result<()> {
    let gas = &cfg.gas;
    let (nx, ny) = (cfg.nx as isize, cfg.ny as isize);
    let two_d = cfg.dy.is_some();

    if work.any_quasi5 {
        work.phys_x.clear();
        work.phys_x.extend(state.cells().iter().map(|u| physical_flux(u, Axis::X, gas)));
        if two_d {
            work.phys_y.clear();
            work.phys_y.extend(state.cells().iter().map(|u| physical_flux(u, Axis::Y, gas)));
        }
    }

    let last_stage = stage == 2;
    let omega_x = omega_factor(cfg.dx, dt);
    work.flux_x.clear();
    for k in 0..ny {
        for m in 0..=nx {
            let choice = work.choice_x[(k * (nx + 1) + m) as usize];
            let f = interface_flux(
                state, u0, &work.phys_x, choice, Axis::X, m - 1, k, cfg.dx, gas, last_stage, omega_x,
            )?;
            work.flux_x.push(f);
        }
    }

    work.flux_y.clear();
    if let Some(dy) = cfg.dy {
        let omega_y = omega_factor(dy, dt);
        for m in 0..=ny {
            for i in 0..nx {
                let choice = work.choice_y[(m * nx + i) as usize];
                let f = interface_flux(
                    state, u0, &work.phys_y, choice, Axis::Y, i, m - 1, dy, gas, last_stage, omega_y,
                )?;
                work.flux_y.push(f);
            }
        }
    }

    work.low_x.clear();
    work.low_x.resize(work.flux_x.len(), false);
    work.low_y.clear();
    work.low_y.resize(work.flux_y.len(), false);
    loop {
        residual.clear();
        assemble_residual(cfg, work, state, residual);
        let mut changed = false;
        for k in 0..ny {
            for i in 0..nx {
                let idx = (k * nx + i) as usize;
                let u = state.get(i, k);
                let mut cand = [T::zero(); N];
                for d in 0..N {
                    cand[d] = u[d] + dt * residual[idx][d];
                }
                if admissible(&cand, gas) {
                    continue;
                }
                let mut faces = vec![(Axis::X, (k * (nx + 1) + i) as usize), (Axis::X, (k * (nx + 1) + i + 1) as usize)];
                if two_d {
                    faces.push((Axis::Y, (k * nx + i) as usize));
                    faces.push((Axis::Y, ((k + 1) * nx + i) as usize));
                }
                for (axis, f) in faces {
                    let low = match axis {
                        Axis::X => &mut work.low_x[f],
                        Axis::Y => &mut work.low_y[f],
                    };
                    if *low {
                        continue;
                    }
                    *low = true;
                    changed = true;
                    let (left, right) = match axis {
                        Axis::X => {
                            let m = f as isize % (nx + 1);
                            (state.get(m - 1, k), state.get(m, k))
                        }
                        Axis::Y => {
                            let m = f as isize / nx;
                            (state.get(i, m - 1), state.get(i, m))
                        }
                    };
                    let flux = first_order_ldcu(left, right, axis, gas)?;
                    match axis {
                        Axis::X => work.flux_x[f] = flux,
                        Axis::Y => work.flux_y[f] = flux,
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    work.low_faces += work.low_x.iter().chain(&work.low_y).filter(|b| **b).count();
    Ok(())
}

fn assemble_residual<T: Real, const N: usize>(
    cfg: &SolverConfig<T>,
    work: &Workspace<T, N>,
    state: &ConservedField<T, N>,
    residual: &mut Vec<Vector<T, N>>,
) {
    let (nx, ny) = (cfg.nx as isize, cfg.ny as isize);
    let inv_dx = cfg.dx.recip();
    let inv_dy = cfg.dy.map(|d| d.recip());
    for k in 0..ny {
        for i in 0..nx {
            let fl = &work.flux_x[(k * (nx + 1) + i) as usize];
            let fr = &work.flux_x[(k * (nx + 1) + i + 1) as usize];
            let mut r = [T::zero(); N];
            for d in 0..N {
                r[d] = -(fr[d] - fl[d]) * inv_dx;
            }
            if let Some(inv_dy) = inv_dy {
                let gb = &work.flux_y[(k * nx + i) as usize];
                let gt = &work.flux_y[((k + 1) * nx + i) as usize];
                for d in 0..N {
                    r[d] = r[d] - (gt[d] - gb[d]) * inv_dy;
                }
                if cfg.gravity {
                    let u = state.get(i, k);
                    let s = rt_gravity_source(&[u[0], u[1], u[2], u[N - 1]]);
                    for d in 0..N {
                        r[d] = r[d] + s[d];
                    }
                }
            }
            residual.push(r);
        }
    }
}

/// LDCU flux with the cell values as one-sided states.
fn first_order_ldcu<T: Real, const N: usize>(
    left: &Vector<T, N>,
    right: &Vector<T, N>,
    axis: Axis,
    gas: &GasConfig<T>,
) -> Result<Vector<T, N>> {
    let l = PrimitiveState::from_conserved(left, gas);
    let r = PrimitiveState::from_conserved(right, gas);
    let speeds = interface_speeds(&l, &r, axis, gas)?;
    Ok(ldcu_flux_with_speeds(left, right, &speeds, axis, gas))
}

#[inline]
fn admissible<T: Real, const N: usize>(u: &Vector<T, N>, gas: &GasConfig<T>) -> bool {
    u.iter().all(|v| v.is_finite()) && physical(u, gas)
}

/// Flux at the interface between cell `(i, k)` and its successor along `axis`.
#[allow(clippy::too_many_arguments)]
#[inline]
fn interface_flux<T: Real, const N: usize>(
    state: &ConservedField<T, N>,
    u0: &ConservedField<T, N>,
    phys: &[Vector<T, N>],
    choice: SchemeChoice<T>,
    axis: Axis,
    i: isize,
    k: isize,
    h: T,
    gas: &GasConfig<T>,
    last_stage: bool,
    omega_scale: T,
) -> Result<Vector<T, N>> {
    let at = |s: isize| match axis {
        Axis::X => (i + s, k),
        Axis::Y => (i, k + s),
    };
    match choice {
        SchemeChoice::Quasi5 => {
            let fluxes: [Vector<T, N>; 6] = std::array::from_fn(|m| {
                let (ci, ck) = at(m as isize - 2);
                phys[state.offset(ci, ck)]
            });
            let mut f = l_flux(&fluxes);
            if last_stage {
                let states: [Vector<T, N>; 6] = std::array::from_fn(|m| {
                    let (ci, ck) = at(m as isize - 2);
                    *u0.get(ci, ck)
                });
                let w = omega_unchecked(&states, omega_scale);
                for d in 0..N {
                    f[d] = f[d] - w[d];
                }
            }
            Ok(f)
        }
        SchemeChoice::Ldcu(params) => {
            let cells: [Vector<T, N>; 4] = std::array::from_fn(|m| {
                let (ci, ck) = at(m as isize - 1);
                *state.get(ci, ck)
            });
            ldcu_interface(&cells, &params, axis, h, gas)
        }
    }
}

/// LDCU flux from the four cells around an interface. Falls back to the
/// cell values when the reconstruction produces a non-physical state.
#[inline]
pub(crate) fn ldcu_interface<T: Real, const N: usize>(
    cells: &[Vector<T, N>; 4],
    params: &LimiterParams<T>,
    axis: Axis,
    h: T,
    gas: &GasConfig<T>,
) -> Result<Vector<T, N>> {
    let mut mean = [T::zero(); N];
    for d in 0..N {
        mean[d] = T::half() * (cells[1][d] + cells[2][d]);
    }
    let p_mean = eos_pressure(&mean, gas);
    let (mut um, mut up) = (cells[1], cells[2]);
    if mean[0] > T::zero() && p_mean > T::zero() {
        let basis = basis_at(&mean, p_mean, axis, gas);
        let rec = reconstruct_interface(cells, &basis, params, h);
        if physical(&rec.u_minus, gas) && physical(&rec.u_plus, gas) {
            um = rec.u_minus;
            up = rec.u_plus;
        }
    }
    let left = PrimitiveState::from_conserved(&um, gas);
    let right = PrimitiveState::from_conserved(&up, gas);
    let speeds = interface_speeds(&left, &right, axis, gas)?;
    Ok(ldcu_flux_with_speeds(&um, &up, &speeds, axis, gas))
}

#[inline]
fn physical<T: Real, const N: usize>(u: &Vector<T, N>, gas: &GasConfig<T>) -> bool {
    u[0] > T::zero() && eos_pressure(u, gas) > T::zero()
}
