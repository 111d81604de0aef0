//! Piecewise-linear reconstruction of one-sided interface values, limited in
//! local characteristic variables.

use crate::euler::CharacteristicBasis;
use crate::limiters::{sbm, LimiterParams};
use crate::scalar::{mat_vec, Real, Vector};

/// Relative threshold under which a backward difference counts as zero.
pub const RATIO_GUARD: f64 = 1e-14;

/// Left (`u_minus`) and right (`u_plus`) values at one interface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterfaceStates<T, const N: usize> {
    pub u_minus: Vector<T, N>,
    pub u_plus: Vector<T, N>,
}

/// Reconstructs `U^-` and `U^+` at `j+1/2` from the cells `j-1, j, j+1, j+2`.
///
/// The stencil is mapped to characteristic variables with `basis.r_inv`, the
/// slopes at `j` and `j+1` are limited componentwise with the SBM function of
/// the forward/backward difference ratio, and the extrapolated values are
/// mapped back with `basis.r`.
pub fn reconstruct_interface<T: Real, const N: usize>(
    stencil: &[Vector<T, N>; 4],
    basis: &CharacteristicBasis<T, N>,
    params: &LimiterParams<T>,
    dx: T,
) -> InterfaceStates<T, N> {
    let g = stencil.map(|u| mat_vec(&basis.r_inv, &u));
    let half_dx = T::half() * dx;
    let mut minus = [T::zero(); N];
    let mut plus = [T::zero(); N];
    for c in 0..N {
        let slope_j = limited_slope(g[0][c], g[1][c], g[2][c], params, dx);
        let slope_j1 = limited_slope(g[1][c], g[2][c], g[3][c], params, dx);
        minus[c] = g[1][c] + half_dx * slope_j;
        plus[c] = g[2][c] - half_dx * slope_j1;
    }
    InterfaceStates {
        u_minus: mat_vec(&basis.r, &minus),
        u_plus: mat_vec(&basis.r, &plus),
    }
}

/// `phi((next - mid) / (mid - prev)) * (mid - prev) / dx`, zero when the
/// backward difference vanishes.
#[inline]
fn limited_slope<T: Real>(prev: T, mid: T, next: T, params: &LimiterParams<T>, dx: T) -> T {
    let back = mid - prev;
    let scale = mid.abs().max(prev.abs()).max(T::one());
    if back.abs() < T::lit(RATIO_GUARD) * scale {
        return T::zero();
    }
    let r = (next - mid) / back;
    sbm(r, params) * back / dx
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::euler::{characteristic_basis, Axis, GasConfig};

    fn identity3() -> CharacteristicBasis<f64, 3> {
        let id = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
        CharacteristicBasis { r: id, r_inv: id }
    }

    #[test]
    fn constant_stencil_is_reproduced() {
        let g = GasConfig::new(1.4).unwrap();
        let c: [f64; 3] = [1.3, 0.4, 3.1];
        let basis = characteristic_basis(&c, &c, Axis::X, &g).unwrap();
        for params in [LimiterParams::minmod2(), LimiterParams::overcompressive()] {
            let s = reconstruct_interface(&[c; 4], &basis, &params, 0.1);
            for d in 0..3 {
                assert!((s.u_minus[d] - c[d]).abs() < 1e-14);
                assert!((s.u_plus[d] - c[d]).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn linear_data_gives_midpoint_value() {
        // Gamma_k = alpha + beta k at k = j-1..j+2 with j = 1
        let (alpha, beta) = ([0.5, -1.0, 2.0], [0.25, 0.5, -0.75]);
        let cell = |k: f64| [0, 1, 2].map(|c| alpha[c] + beta[c] * k);
        let stencil = [cell(0.0), cell(1.0), cell(2.0), cell(3.0)];
        let s = reconstruct_interface(&stencil, &identity3(), &LimiterParams::overcompressive(), 1.0);
        let mid = cell(1.5);
        for c in 0..3 {
            assert!((s.u_minus[c] - mid[c]).abs() < 1e-14);
            assert!((s.u_plus[c] - mid[c]).abs() < 1e-14);
        }
    }

    #[test]
    fn isolated_jump_is_first_order() {
        let stencil = [[0.0; 3], [0.0; 3], [1.0; 3], [1.0; 3]];
        let s = reconstruct_interface(&stencil, &identity3(), &LimiterParams::minmod2(), 0.01);
        assert_eq!(s.u_minus, [0.0; 3]);
        assert_eq!(s.u_plus, [1.0; 3]);
    }
}
