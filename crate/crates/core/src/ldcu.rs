//! Low-dissipation central-upwind (LDCU) numerical flux with its built-in
//! anti-diffusion term.

use crate::error::Result;
use crate::euler::{interface_speeds, physical_flux, Axis, GasConfig, LocalSpeeds, PrimitiveState};
use crate::limiters::minmod;
use crate::scalar::{Real, Vector};

/// Below this value of `a+ - a-` the interface is treated as static and the
/// flux falls back to the average of the physical fluxes.
pub const SPEED_EPS: f64 = 1e-12;

/// Intermediate quantities of the anti-diffusion correction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AntiDiffusion<T, const N: usize> {
    pub q: Vector<T, N>,
    pub u_star: Vector<T, N>,
    /// Starred velocity normal to the interface.
    pub normal_velocity: T,
    pub alpha: T,
    pub q_rho: T,
}

/// LDCU flux across an interface normal to `axis`.
///
/// `(a+ F(U-) - a- F(U+)) / (a+ - a-) + a+ a- / (a+ - a-) (U+ - U-) + q`
///
/// Written with `F(U-)` and `F(U+)` in the two upwind terms; the variant with
/// `F(U-)` in both is inconsistent. The diffusion term uses `U+ - U-` in
/// both directions for the same reason.
pub fn ldcu_flux<T: Real, const N: usize>(
    u_minus: &Vector<T, N>,
    u_plus: &Vector<T, N>,
    axis: Axis,
    gas: &GasConfig<T>,
) -> Result<Vector<T, N>> {
    let left = PrimitiveState::from_conserved(u_minus, gas);
    let right = PrimitiveState::from_conserved(u_plus, gas);
    let speeds = interface_speeds(&left, &right, axis, gas)?;
    Ok(ldcu_flux_with_speeds(u_minus, u_plus, &speeds, axis, gas))
}

#[inline]
pub(crate) fn ldcu_flux_with_speeds<T: Real, const N: usize>(
    u_minus: &Vector<T, N>,
    u_plus: &Vector<T, N>,
    speeds: &LocalSpeeds<T>,
    axis: Axis,
    gas: &GasConfig<T>,
) -> Vector<T, N> {
    let f_minus = physical_flux(u_minus, axis, gas);
    let f_plus = physical_flux(u_plus, axis, gas);
    let (ap, am) = (speeds.plus, speeds.minus);
    let da = ap - am;
    let mut flux = [T::zero(); N];
    if da < T::lit(SPEED_EPS) {
        for d in 0..N {
            flux[d] = T::half() * (f_minus[d] + f_plus[d]);
        }
        return flux;
    }
    let inv = da.recip();
    let diff = ap * am * inv;
    for d in 0..N {
        flux[d] = (ap * f_minus[d] - am * f_plus[d]) * inv + diff * (u_plus[d] - u_minus[d]);
    }
    let ad = anti_diffusion_from(u_minus, u_plus, &f_minus, &f_plus, speeds, axis);
    for d in 0..N {
        flux[d] = flux[d] + ad.q[d];
    }
    flux
}

/// Anti-diffusion term `q = alpha* q^rho (1, vel*, |vel*|^2 / 2)`.
pub fn anti_diffusion<T: Real, const N: usize>(
    u_minus: &Vector<T, N>,
    u_plus: &Vector<T, N>,
    axis: Axis,
    gas: &GasConfig<T>,
) -> Result<AntiDiffusion<T, N>> {
    let left = PrimitiveState::from_conserved(u_minus, gas);
    let right = PrimitiveState::from_conserved(u_plus, gas);
    let speeds = interface_speeds(&left, &right, axis, gas)?;
    let f_minus = physical_flux(u_minus, axis, gas);
    let f_plus = physical_flux(u_plus, axis, gas);
    Ok(anti_diffusion_from(u_minus, u_plus, &f_minus, &f_plus, &speeds, axis))
}

#[inline]
fn anti_diffusion_from<T: Real, const N: usize>(
    u_minus: &Vector<T, N>,
    u_plus: &Vector<T, N>,
    f_minus: &Vector<T, N>,
    f_plus: &Vector<T, N>,
    speeds: &LocalSpeeds<T>,
    axis: Axis,
) -> AntiDiffusion<T, N> {
    let zero = T::zero();
    let (ap, am) = (speeds.plus, speeds.minus);
    let da = ap - am;
    let mut u_star = [zero; N];
    if da < T::lit(SPEED_EPS) {
        return AntiDiffusion { q: [zero; N], u_star, normal_velocity: zero, alpha: zero, q_rho: zero };
    }
    for d in 0..N {
        u_star[d] = (ap * u_plus[d] - am * u_minus[d] - (f_plus[d] - f_minus[d])) / da;
    }
    let rho_star = u_star[0];
    if !(rho_star > zero) {
        return AntiDiffusion { q: [zero; N], u_star, normal_velocity: zero, alpha: zero, q_rho: zero };
    }
    let mut vel = [zero; N];
    let mut q2 = zero;
    for d in 1..N - 1 {
        vel[d] = u_star[d] / rho_star;
        q2 = q2 + vel[d] * vel[d];
    }
    let un = vel[axis.normal()];

    let q_rho = minmod((un - am) * (rho_star - u_minus[0]), (ap - un) * (u_plus[0] - rho_star));
    let (num, den) = if un < zero { (ap, ap - un) } else { (am, am - un) };
    let alpha = if den == zero { zero } else { num / den };

    let scale = alpha * q_rho;
    let mut q = [zero; N];
    q[0] = scale;
    for d in 1..N - 1 {
        q[d] = scale * vel[d];
    }
    q[N - 1] = scale * T::half() * q2;
    AntiDiffusion { q, u_star, normal_velocity: un, alpha, q_rho }
}

pub fn ldcu_flux_1d<T: Real>(
    u_minus: &Vector<T, 3>,
    u_plus: &Vector<T, 3>,
    gas: &GasConfig<T>,
) -> Result<Vector<T, 3>> {
    ldcu_flux(u_minus, u_plus, Axis::X, gas)
}

pub fn ldcu_flux_2d_x<T: Real>(
    u_minus: &Vector<T, 4>,
    u_plus: &Vector<T, 4>,
    gas: &GasConfig<T>,
) -> Result<Vector<T, 4>> {
    ldcu_flux(u_minus, u_plus, Axis::X, gas)
}

pub fn ldcu_flux_2d_y<T: Real>(
    u_minus: &Vector<T, 4>,
    u_plus: &Vector<T, 4>,
    gas: &GasConfig<T>,
) -> Result<Vector<T, 4>> {
    ldcu_flux(u_minus, u_plus, Axis::Y, gas)
}
