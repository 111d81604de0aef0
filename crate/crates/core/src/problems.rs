//! Benchmark configurations: initial data, boundaries, adaption constants.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::euler::{GasConfig, PrimitiveState};
use crate::indicator::IndicatorConfig;
use crate::integrator::SchemeMode;
use crate::mesh::{BoundaryCondition, BoundarySpec, ConservedField, Grid1D, Grid2D};
use crate::scalar::Real;

pub type InitialCondition = fn(x: f64, y: f64, gamma: f64) -> PrimitiveState<f64>;
pub type ExactSolution = fn(x: f64, y: f64, t: f64, gamma: f64) -> PrimitiveState<f64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dimension {
    One,
    Two,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds {
    pub c1: f64,
    pub c2: Option<f64>,
}

#[derive(Debug, Clone, Copy)]
pub struct ProblemSpec {
    pub name: &'static str,
    pub dimension: Dimension,
    pub x_range: (f64, f64),
    /// Unused for 1-D problems.
    pub y_range: (f64, f64),
    pub gamma: f64,
    pub t_final: f64,
    pub bc: BoundarySpec<f64>,
    pub gravity: bool,
    /// Adaption constants of the NEW scheme.
    pub new_thresholds: Option<Thresholds>,
    /// Adaption constant of the OLD scheme.
    pub old_c1: Option<f64>,
    pub default_nx: usize,
    pub default_ny: usize,
    pub initial: InitialCondition,
    pub exact: Option<ExactSolution>,
}

impl ProblemSpec {
    pub fn is_2d(&self) -> bool {
        self.dimension == Dimension::Two
    }

    pub fn gas<T: Real>(&self) -> GasConfig<T> {
        GasConfig::new(T::lit(self.gamma)).expect("catalog gamma > 1")
    }

    pub fn initial_state(&self, x: f64, y: f64) -> PrimitiveState<f64> {
        (self.initial)(x, y, self.gamma)
    }

    pub fn boundary<T: Real>(&self) -> BoundarySpec<T> {
        let conv = |bc: BoundaryCondition<f64>| match bc {
            BoundaryCondition::Free => BoundaryCondition::Free,
            BoundaryCondition::Periodic => BoundaryCondition::Periodic,
            BoundaryCondition::SolidWall => BoundaryCondition::SolidWall,
            BoundaryCondition::Dirichlet(s) => BoundaryCondition::Dirichlet(cast_state(&s)),
        };
        BoundarySpec {
            left: conv(self.bc.left),
            right: conv(self.bc.right),
            bottom: conv(self.bc.bottom),
            top: conv(self.bc.top),
        }
    }

    /// Adaption constants for `mode`, with optional overrides. Non-adaptive
    /// modes return `None`.
    pub fn indicator_config<T: Real>(
        &self,
        mode: SchemeMode,
        c1: Option<f64>,
        c2: Option<f64>,
    ) -> Result<Option<IndicatorConfig<T>>> {
        if !mode.is_adaptive() {
            return Ok(None);
        }
        let (d1, d2) = match mode {
            SchemeMode::AdaptiveNew => {
                let t = self.new_thresholds;
                (t.map(|t| t.c1), t.and_then(|t| t.c2))
            }
            _ => (self.old_c1, None),
        };
        let c1 = c1.or(d1).ok_or_else(|| {
            Error::config(format!("problem `{}` has no default C1 for {mode}; pass --c1", self.name))
        })?;
        let c2 = if mode.needs_contact_threshold() {
            Some(c2.or(d2).ok_or_else(|| {
                Error::config(format!("problem `{}` has no default C2; pass --c2", self.name))
            })?)
        } else {
            None
        };
        IndicatorConfig::new(T::lit(c1), c2.map(T::lit)).map(Some)
    }

    pub fn grid_1d<T: Real>(&self, nx: usize) -> Result<Grid1D<T>> {
        Grid1D::new(T::lit(self.x_range.0), T::lit(self.x_range.1), nx)
    }

    pub fn grid_2d<T: Real>(&self, nx: usize, ny: usize) -> Result<Grid2D<T>> {
        Grid2D::new(
            (T::lit(self.x_range.0), T::lit(self.x_range.1)),
            (T::lit(self.y_range.0), T::lit(self.y_range.1)),
            nx,
            ny,
        )
    }

    /// Point values of the initial data at the cell centers.
    pub fn initial_field_1d<T: Real>(&self, grid: &Grid1D<T>) -> ConservedField<T, 3> {
        let gas = self.gas::<T>();
        let mut f = ConservedField::new_1d(grid.n_cells);
        for i in 0..grid.n_cells as isize {
            let s = self.initial_state(grid.x(i).as_f64(), 0.0);
            f.set(i, 0, cast_state::<T>(&s).to_conserved_1d(&gas));
        }
        f
    }

    pub fn initial_field_2d<T: Real>(&self, grid: &Grid2D<T>) -> ConservedField<T, 4> {
        let gas = self.gas::<T>();
        let mut f = ConservedField::new_2d(grid.nx, grid.ny);
        for k in 0..grid.ny as isize {
            for i in 0..grid.nx as isize {
                let s = self.initial_state(grid.x(i).as_f64(), grid.y(k).as_f64());
                f.set(i, k, cast_state::<T>(&s).to_conserved_2d(&gas));
            }
        }
        f
    }
}

pub fn cast_state<T: Real>(s: &PrimitiveState<f64>) -> PrimitiveState<T> {
    PrimitiveState { rho: T::lit(s.rho), u: T::lit(s.u), v: T::lit(s.v), p: T::lit(s.p) }
}

fn smooth1d_ic(x: f64, _y: f64, gamma: f64) -> PrimitiveState<f64> {
    let u = (PI * x / 5.0 + PI / 4.0).sin();
    let rho = ((gamma - 1.0) / (2.0 * gamma.sqrt()) * (u + 10.0)).powf(2.0 / (gamma - 1.0));
    PrimitiveState::new_1d(rho, u, rho.powf(gamma))
}

fn shock_density_ic(x: f64, _y: f64, _gamma: f64) -> PrimitiveState<f64> {
    if x < -4.0 {
        PrimitiveState::new_1d(27.0 / 7.0, 4.0 * 35f64.sqrt() / 9.0, 31.0 / 3.0)
    } else {
        PrimitiveState::new_1d(1.0 + 0.2 * (5.0 * x).sin(), 0.0, 1.0)
    }
}

fn shock_entropy_ic(x: f64, _y: f64, _gamma: f64) -> PrimitiveState<f64> {
    if x < -4.5 {
        PrimitiveState::new_1d(1.51695, 0.523346, 1.805)
    } else {
        PrimitiveState::new_1d(1.0 + 0.1 * (20.0 * x).sin(), 0.0, 1.0)
    }
}

fn blast_ic(x: f64, _y: f64, _gamma: f64) -> PrimitiveState<f64> {
    let p = if x < 0.1 {
        1000.0
    } else if x <= 0.9 {
        0.01
    } else {
        100.0
    };
    PrimitiveState::new_1d(1.0, 0.0, p)
}

fn vortex_ic(x: f64, y: f64, gamma: f64) -> PrimitiveState<f64> {
    let kappa = 5.0 / (2.0 * PI) * ((1.0 - x * x - y * y) / 2.0).exp();
    let rho = (1.0 - (gamma - 1.0) * kappa * kappa / (2.0 * gamma)).powf(1.0 / (gamma - 1.0));
    PrimitiveState::new_2d(rho, 1.0 - kappa * y, 1.0 + kappa * x, rho.powf(gamma))
}

/// Periodic translation of the vortex with unit velocity along the diagonal.
fn vortex_exact(x: f64, y: f64, t: f64, gamma: f64) -> PrimitiveState<f64> {
    let wrap = |s: f64| if s < -10.0 { s + 20.0 } else if s > 10.0 { s - 20.0 } else { s };
    vortex_ic(wrap(x - t), wrap(y - t), gamma)
}

/// Four constant quadrant states around `(x0, y0)`, ordered
/// NE, NW, SW, SE as `(rho, u, v, p)`.
fn quadrants(x: f64, y: f64, x0: f64, y0: f64, q: [[f64; 4]; 4]) -> PrimitiveState<f64> {
    let s = match (x > x0, y > y0) {
        (true, true) => q[0],
        (false, true) => q[1],
        (false, false) => q[2],
        (true, false) => q[3],
    };
    PrimitiveState::new_2d(s[0], s[1], s[2], s[3])
}

fn rp3_ic(x: f64, y: f64, _gamma: f64) -> PrimitiveState<f64> {
    quadrants(
        x,
        y,
        1.0,
        1.0,
        [
            [1.5, 0.0, 0.0, 1.5],
            [0.5323, 1.206, 0.0, 0.3],
            [0.138, 1.206, 1.206, 0.029],
            [0.5323, 0.0, 1.206, 0.3],
        ],
    )
}

fn rp6_ic(x: f64, y: f64, _gamma: f64) -> PrimitiveState<f64> {
    quadrants(
        x,
        y,
        0.5,
        0.5,
        [
            [1.0, 0.75, -0.5, 1.0],
            [2.0, 0.75, 0.5, 1.0],
            [1.0, -0.75, 0.5, 1.0],
            [3.0, -0.75, -0.5, 1.0],
        ],
    )
}

fn rp12_ic(x: f64, y: f64, _gamma: f64) -> PrimitiveState<f64> {
    quadrants(
        x,
        y,
        0.5,
        0.5,
        [
            [0.5313, 0.0, 0.0, 0.4],
            [1.0, 0.7276, 0.0, 1.0],
            [0.8, 0.0, 0.0, 1.0],
            [1.0, 0.0, 0.7276, 1.0],
        ],
    )
}

fn implosion_ic(x: f64, y: f64, _gamma: f64) -> PrimitiveState<f64> {
    if x.abs() + y.abs() < 0.15 {
        PrimitiveState::new_2d(0.125, 0.0, 0.0, 0.14)
    } else {
        PrimitiveState::new_2d(1.0, 0.0, 0.0, 1.0)
    }
}

fn rt_ic(x: f64, y: f64, gamma: f64) -> PrimitiveState<f64> {
    let (rho, p) = if y < 0.5 { (2.0, 2.0 * y + 1.0) } else { (1.0, y + 1.5) };
    let c = (gamma * p / rho).sqrt();
    PrimitiveState::new_2d(rho, 0.0, -0.025 * c * (8.0 * PI * x).cos(), p)
}

fn thresholds(c1: f64, c2: f64) -> Option<Thresholds> {
    Some(Thresholds { c1, c2: Some(c2) })
}

/// Every catalogued problem.
pub fn catalog() -> Vec<ProblemSpec> {
    use BoundaryCondition::*;
    let free = BoundarySpec::uniform(Free);
    let wall = BoundarySpec::uniform(SolidWall);
    let periodic = BoundarySpec::uniform(Periodic);
    let one = |name, x_range, t_final, bc, new_thresholds, old_c1, nx, initial| ProblemSpec {
        name,
        dimension: Dimension::One,
        x_range,
        y_range: (0.0, 1.0),
        gamma: 1.4,
        t_final,
        bc,
        gravity: false,
        new_thresholds,
        old_c1,
        default_nx: nx,
        default_ny: 1,
        initial,
        exact: None,
    };
    let two = |name, range: (f64, f64), t_final, bc, new_thresholds, old_c1, n, initial| ProblemSpec {
        name,
        dimension: Dimension::Two,
        x_range: range,
        y_range: range,
        gamma: 1.4,
        t_final,
        bc,
        gravity: false,
        new_thresholds,
        old_c1,
        default_nx: n,
        default_ny: n,
        initial,
        exact: None,
    };
    vec![
        one("smooth1d", (0.0, 10.0), 0.1, periodic, None, None, 400, smooth1d_ic as InitialCondition),
        one("shock_density", (-5.0, 15.0), 5.0, free, thresholds(0.015, 0.15), Some(0.01), 800, shock_density_ic),
        one("shock_entropy", (-5.0, 5.0), 5.0, free, thresholds(0.02, 0.3), Some(0.01), 600, shock_entropy_ic),
        one("blast", (0.0, 1.0), 0.038, wall, thresholds(0.02, 0.3), Some(0.01), 400, blast_ic),
        ProblemSpec {
            exact: Some(vortex_exact),
            ..two("vortex2d", (-10.0, 10.0), 0.1, periodic, None, None, 200, vortex_ic)
        },
        ProblemSpec {
            default_nx: 120,
            default_ny: 120,
            ..two("rp3", (0.0, 1.2), 1.0, free, thresholds(0.08, 0.2), Some(0.08), 120, rp3_ic)
        },
        two("rp6", (0.0, 1.0), 1.0, free, thresholds(0.06, 0.004), Some(0.1), 150, rp6_ic),
        two("rp12", (0.0, 0.6), 0.5, free, thresholds(0.03, 0.2), Some(0.03), 150, rp12_ic),
        two("implosion", (0.0, 0.5), 2.5, wall, thresholds(0.05, 0.1), Some(0.05), 100, implosion_ic),
        ProblemSpec {
            x_range: (0.0, 0.25),
            y_range: (0.0, 1.0),
            gamma: 5.0 / 3.0,
            gravity: true,
            bc: BoundarySpec {
                left: SolidWall,
                right: SolidWall,
                bottom: Dirichlet(PrimitiveState::new_2d(2.0, 0.0, 0.0, 1.0)),
                top: Dirichlet(PrimitiveState::new_2d(1.0, 0.0, 0.0, 2.5)),
            },
            default_nx: 32,
            default_ny: 128,
            ..two("rt", (0.0, 1.0), 2.95, wall, thresholds(0.08, 0.008), Some(0.08), 128, rt_ic)
        },
    ]
}

pub fn names() -> Vec<&'static str> {
    catalog().iter().map(|p| p.name).collect()
}

pub fn lookup(name: &str) -> Result<ProblemSpec> {
    catalog().into_iter().find(|p| p.name == name).ok_or_else(|| Error::UnknownProblem {
        name: name.to_string(),
        available: names().join(", "),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smooth1d_at_origin() {
        let p = lookup("smooth1d").unwrap();
        let s = p.initial_state(0.0, 0.0);
        let u = 0.5f64.sqrt();
        assert!((s.u - u).abs() < 1e-15);
        let rho = (0.4 / (2.0 * 1.4f64.sqrt()) * (u + 10.0)).powf(5.0);
        assert!((s.rho - rho).abs() < 1e-12 * rho);
        assert!((s.p - rho.powf(1.4)).abs() < 1e-12 * s.p);
    }

    #[test]
    fn blast_middle_state() {
        let s = lookup("blast").unwrap().initial_state(0.5, 0.0);
        assert_eq!((s.rho, s.u, s.p), (1.0, 0.0, 0.01));
    }

    #[test]
    fn vortex_exact_at_zero_is_initial() {
        let p = lookup("vortex2d").unwrap();
        let exact = p.exact.unwrap();
        for &(x, y) in &[(0.3, -1.2), (2.0, 2.0), (-9.9, 9.9)] {
            assert_eq!(exact(x, y, 0.0, 1.4), p.initial_state(x, y));
        }
        assert_eq!(exact(0.5, 0.5, 0.25, 1.4), p.initial_state(0.25, 0.25));
        assert_eq!(exact(-9.95, 0.0, 0.25, 1.4), p.initial_state(9.8, -0.25));
    }

    #[test]
    fn rt_pressure_continuous_at_interface() {
        assert_eq!(2.0 * 0.5 + 1.0, 0.5 + 1.5);
        let p = lookup("rt").unwrap();
        let below = p.initial_state(0.1, 0.5 - 1e-12);
        let above = p.initial_state(0.1, 0.5);
        assert!((below.p - above.p).abs() < 1e-11);
    }

    #[test]
    fn every_initial_state_is_physical() {
        for p in catalog() {
            for s in 0..1000 {
                let f = (s as f64 + 0.5) / 1000.0;
                let x = p.x_range.0 + f * (p.x_range.1 - p.x_range.0);
                // sweep the diagonal and an off-diagonal line in 2-D
                let ys = if p.is_2d() {
                    vec![
                        p.y_range.0 + f * (p.y_range.1 - p.y_range.0),
                        p.y_range.1 - f * (p.y_range.1 - p.y_range.0),
                    ]
                } else {
                    vec![0.0]
                };
                for y in ys {
                    let st = p.initial_state(x, y);
                    assert!(st.rho > 0.0 && st.p > 0.0, "{} at ({x}, {y})", p.name);
                }
            }
        }
    }

    #[test]
    fn unknown_name_lists_catalog() {
        let err = lookup("sod").unwrap_err().to_string();
        assert!(err.contains("shock_density") && err.contains("rt"));
    }

    #[test]
    fn thresholds_resolve() {
        let p = lookup("shock_density").unwrap();
        let new = p.indicator_config::<f64>(SchemeMode::AdaptiveNew, None, None).unwrap().unwrap();
        assert_eq!((new.c1, new.c2), (0.015, Some(0.15)));
        let old = p.indicator_config::<f64>(SchemeMode::AdaptiveOld, None, None).unwrap().unwrap();
        assert_eq!((old.c1, old.c2), (0.01, None));
        assert!(p.indicator_config::<f64>(SchemeMode::Quasi5, None, None).unwrap().is_none());
        let s = lookup("smooth1d").unwrap();
        assert!(s.indicator_config::<f64>(SchemeMode::AdaptiveNew, None, None).is_err());
    }
}
