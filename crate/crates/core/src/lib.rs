//! Adaptive shock-capturing solver for the 1-D and 2-D Euler equations.
//!
//! Cells flagged as rough by a density smoothness indicator are evolved with
//! a second-order low-dissipation central-upwind (LDCU) scheme; a pressure
//! indicator further separates contact neighborhoods (overcompressive SBM
//! limiter) from the remaining rough cells (Minmod2 limiter). Smooth cells
//! use a quasi-linear fifth-order finite-difference flux. Time integration is
//! three-stage SSP Runge-Kutta.
//!
//! All numerical kernels are generic over the scalar type ([`Real`]); the
//! `*64` aliases below fix it to `f64`.

pub mod error;
pub mod euler;
pub mod indicator;
pub mod integrator;
pub mod ldcu;
pub mod limiters;
pub mod mesh;
pub mod problems;
pub mod quasilinear;
pub mod reconstruction;
pub mod runner;
pub mod scalar;
pub mod suite;

pub use error::{Error, Result};
pub use euler::{Axis, CharacteristicBasis, GasConfig, LocalSpeeds, PrimitiveState};
pub use indicator::{IndicatorConfig, Region, RegionCounts, RegionMask};
pub use integrator::{SchemeChoice, SchemeMode, Solver, Solver1D, Solver2D, StepRecord, TimeStepPolicy};
pub use limiters::LimiterParams;
pub use mesh::{BoundaryCondition, BoundarySpec, ConservedField, Field1D, Field2D, Grid1D, Grid2D};
pub use scalar::Real;

pub type Grid1D64 = Grid1D<f64>;
pub type Grid2D64 = Grid2D<f64>;
pub type Field1D64 = Field1D<f64>;
pub type Field2D64 = Field2D<f64>;
pub type Solver1D64 = Solver1D<f64>;
pub type Solver2D64 = Solver2D<f64>;
pub type GasConfig64 = GasConfig<f64>;
pub type PrimitiveState64 = PrimitiveState<f64>;
pub type BoundarySpec64 = BoundarySpec<f64>;
pub type IndicatorConfig64 = IndicatorConfig<f64>;
