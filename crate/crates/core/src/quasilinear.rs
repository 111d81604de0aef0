//! Quasi-linear fifth-order finite-difference fluxes: the linear six-point
//! flux `L` and the correction `omega` subtracted at the last SSP-RK3 stage.

use crate::error::{Error, Result};
use crate::euler::{physical_flux, Axis, GasConfig};
use crate::mesh::ConservedField;
use crate::scalar::{Real, Vector};

/// Which SSP-RK3 stage a flux is evaluated for; `omega` enters only at the third.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StageFluxKind {
    Stage1,
    Stage2,
    Stage3,
}

impl StageFluxKind {
    pub fn from_index(stage: usize) -> Self {
        match stage {
            0 => StageFluxKind::Stage1,
            1 => StageFluxKind::Stage2,
            _ => StageFluxKind::Stage3,
        }
    }
}

/// `[F_{j+3} - 8 F_{j+2} + 37 F_{j+1} + 37 F_j - 8 F_{j-1} + F_{j-2}] / 60`
/// with `fluxes` ordered `j-2 ..= j+3`.
#[inline]
pub fn l_flux<T: Real, const N: usize>(fluxes: &[Vector<T, N>; 6]) -> Vector<T, N> {
    let (c8, c37, c60) = (T::lit(8.0), T::lit(37.0), T::lit(60.0));
    let mut out = [T::zero(); N];
    for d in 0..N {
        out[d] = ((fluxes[5][d] + fluxes[0][d]) - c8 * (fluxes[4][d] + fluxes[1][d])
            + c37 * (fluxes[3][d] + fluxes[2][d]))
            / c60;
    }
    out
}

/// `3 h / (128 dt)` times the fifth difference
/// `U_{j+3} - 5 U_{j+2} + 10 U_{j+1} - 10 U_j + 5 U_{j-1} - U_{j-2}`
/// of the start-of-step states, ordered `j-2 ..= j+3`.
pub fn omega_correction<T: Real, const N: usize>(
    states: &[Vector<T, N>; 6],
    h: T,
    dt: T,
) -> Result<Vector<T, N>> {
    if !(dt > T::zero()) {
        return Err(Error::config(format!("omega correction needs dt > 0, got {dt}")));
    }
    Ok(omega_unchecked(states, omega_factor(h, dt)))
}

#[inline]
pub(crate) fn omega_factor<T: Real>(h: T, dt: T) -> T {
    T::lit(3.0) * h / (T::lit(128.0) * dt)
}

#[inline]
pub(crate) fn omega_unchecked<T: Real, const N: usize>(
    states: &[Vector<T, N>; 6],
    factor: T,
) -> Vector<T, N> {
    let (c5, c10) = (T::lit(5.0), T::lit(10.0));
    let mut out = [T::zero(); N];
    for d in 0..N {
        out[d] = factor
            * ((states[5][d] - states[0][d]) - c5 * (states[4][d] - states[1][d])
                + c10 * (states[3][d] - states[2][d]));
    }
    out
}

/// Six cells `j-2 ..= j+3` along `axis` around the interface after cell `(i, k)`.
pub fn gather_stencil<T: Real, const N: usize>(
    field: &ConservedField<T, N>,
    i: isize,
    k: isize,
    axis: Axis,
) -> [Vector<T, N>; 6] {
    std::array::from_fn(|m| {
        let s = m as isize - 2;
        match axis {
            Axis::X => *field.get(i + s, k),
            Axis::Y => *field.get(i, k + s),
        }
    })
}

/// `L` at the interface after cell `(i, k)` along `axis` (ghosts must be filled).
pub fn l_flux_at<T: Real, const N: usize>(
    field: &ConservedField<T, N>,
    i: isize,
    k: isize,
    axis: Axis,
    gas: &GasConfig<T>,
) -> Vector<T, N> {
    let states = gather_stencil(field, i, k, axis);
    l_flux(&states.map(|u| physical_flux(&u, axis, gas)))
}

/// `omega` at the interface after cell `(i, k)` along `axis`; `h` is the cell
/// width along that axis.
pub fn omega_at<T: Real, const N: usize>(
    field: &ConservedField<T, N>,
    i: isize,
    k: isize,
    axis: Axis,
    h: T,
    dt: T,
) -> Result<Vector<T, N>> {
    omega_correction(&gather_stencil(field, i, k, axis), h, dt)
}
