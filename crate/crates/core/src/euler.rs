//! Ideal-gas Euler physics: equation of state, physical fluxes, one-sided
//! local speeds, characteristic bases and the gravity source.
//!
//! Conserved vectors are `[rho, rho u, E]` in 1-D and `[rho, rho u, rho v, E]`
//! in 2-D; every routine here is written once over the component count `N`,
//! with the momenta occupying components `1..N-1`.

use crate::error::{Error, Result};
use crate::scalar::{Matrix, Real, Vector};

/// Spatial direction of a flux or an interface.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
}

impl Axis {
    /// Component index of the momentum normal to this axis' interfaces.
    #[inline]
    pub fn normal(self) -> usize {
        match self {
            Axis::X => 1,
            Axis::Y => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GasConfig<T> {
    pub gamma: T,
}

impl<T: Real> GasConfig<T> {
    pub fn new(gamma: T) -> Result<Self> {
        if gamma > T::one() {
            Ok(Self { gamma })
        } else {
            Err(Error::config(format!("specific heat ratio must exceed 1, got {gamma}")))
        }
    }
}

/// Density, velocity and pressure. `v` is zero for 1-D states.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrimitiveState<T> {
    pub rho: T,
    pub u: T,
    pub v: T,
    pub p: T,
}

impl<T: Real> PrimitiveState<T> {
    pub fn new_1d(rho: T, u: T, p: T) -> Self {
        Self { rho, u, v: T::zero(), p }
    }

    pub fn new_2d(rho: T, u: T, v: T, p: T) -> Self {
        Self { rho, u, v, p }
    }

    pub fn is_valid(&self) -> bool {
        self.rho > T::zero() && self.p > T::zero() && self.u.is_finite() && self.v.is_finite()
    }

    pub fn sound_speed(&self, gas: &GasConfig<T>) -> T {
        (gas.gamma * self.p / self.rho).sqrt()
    }

    pub fn to_conserved_1d(&self, gas: &GasConfig<T>) -> Vector<T, 3> {
        let e = self.p / (gas.gamma - T::one()) + T::half() * self.rho * self.u * self.u;
        [self.rho, self.rho * self.u, e]
    }

    pub fn to_conserved_2d(&self, gas: &GasConfig<T>) -> Vector<T, 4> {
        let e = self.p / (gas.gamma - T::one())
            + T::half() * self.rho * (self.u * self.u + self.v * self.v);
        [self.rho, self.rho * self.u, self.rho * self.v, e]
    }

    pub fn from_conserved_1d(u: &Vector<T, 3>, gas: &GasConfig<T>) -> Self {
        Self::from_conserved(u, gas)
    }

    pub fn from_conserved_2d(u: &Vector<T, 4>, gas: &GasConfig<T>) -> Self {
        Self::from_conserved(u, gas)
    }

    pub fn from_conserved<const N: usize>(u: &Vector<T, N>, gas: &GasConfig<T>) -> Self {
        let rho = u[0];
        let vx = u[1] / rho;
        let vy = if N == 4 { u[2] / rho } else { T::zero() };
        Self { rho, u: vx, v: vy, p: eos_pressure(u, gas) }
    }

    /// Velocity component normal to interfaces of `axis`.
    #[inline]
    pub fn normal_velocity(&self, axis: Axis) -> T {
        match axis {
            Axis::X => self.u,
            Axis::Y => self.v,
        }
    }
}

/// Pressure from the ideal-gas equation of state,
/// `p = (gamma - 1) [E - rho |vel|^2 / 2]`. Non-positive results are returned
/// unchanged.
#[inline]
pub fn eos_pressure<T: Real, const N: usize>(u: &Vector<T, N>, gas: &GasConfig<T>) -> T {
    let rho = u[0];
    let mut kinetic = T::zero();
    for m in &u[1..N - 1] {
        let vel = *m / rho;
        kinetic = kinetic + vel * vel;
    }
    (gas.gamma - T::one()) * (u[N - 1] - T::half() * rho * kinetic)
}

/// Physical flux `F` (x) or `G` (y) of a conserved state.
#[inline]
pub fn physical_flux<T: Real, const N: usize>(
    u: &Vector<T, N>,
    axis: Axis,
    gas: &GasConfig<T>,
) -> Vector<T, N> {
    let n = axis.normal();
    debug_assert!(n < N - 1, "y-flux requested for a 1-D state");
    let p = eos_pressure(u, gas);
    let un = u[n] / u[0];
    let mut f = [T::zero(); N];
    f[0] = u[n];
    for d in 1..N - 1 {
        f[d] = u[d] * un;
    }
    f[n] = f[n] + p;
    f[N - 1] = un * (u[N - 1] + p);
    f
}

pub fn physical_flux_x<T: Real, const N: usize>(u: &Vector<T, N>, gas: &GasConfig<T>) -> Vector<T, N> {
    physical_flux(u, Axis::X, gas)
}

pub fn physical_flux_y<T: Real>(u: &Vector<T, 4>, gas: &GasConfig<T>) -> Vector<T, 4> {
    physical_flux(u, Axis::Y, gas)
}

/// One-sided local speeds at an interface: `plus >= 0 >= minus`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalSpeeds<T> {
    pub plus: T,
    pub minus: T,
}

impl<T: Real> LocalSpeeds<T> {
    /// `max(plus, -minus)`, the quantity bounded by the CFL condition.
    pub fn max_abs(&self) -> T {
        self.plus.max(-self.minus)
    }
}

/// `a+ = max(u+ + c+, u- + c-, 0)`, `a- = min(u+ - c+, u- - c-, 0)`, with the
/// velocity normal to `axis`.
pub fn interface_speeds<T: Real>(
    left: &PrimitiveState<T>,
    right: &PrimitiveState<T>,
    axis: Axis,
    gas: &GasConfig<T>,
) -> Result<LocalSpeeds<T>> {
    for (side, s) in [("left", left), ("right", right)] {
        if !(s.rho > T::zero() && s.p >= T::zero()) {
            return Err(Error::InvalidState(format!(
                "{side} interface state rho = {}, p = {}",
                s.rho, s.p
            )));
        }
    }
    let (ul, ur) = (left.normal_velocity(axis), right.normal_velocity(axis));
    let (cl, cr) = (left.sound_speed(gas), right.sound_speed(gas));
    Ok(LocalSpeeds {
        plus: (ur + cr).max(ul + cl).max(T::zero()),
        minus: (ur - cr).min(ul - cl).min(T::zero()),
    })
}

/// Right eigenvectors `r` (as columns) and their inverse for the Jacobian of
/// the flux along one axis, evaluated at the mean of two cell states.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharacteristicBasis<T, const N: usize> {
    pub r: Matrix<T, N>,
    pub r_inv: Matrix<T, N>,
}

/// Eigenbasis at `(left + right) / 2`. Column order is acoustic `u_n - c`,
/// entropy `u_n`, shear `u_n` (2-D only), acoustic `u_n + c`; acoustic columns
/// are scaled to unit density entry.
pub fn characteristic_basis<T: Real, const N: usize>(
    left: &Vector<T, N>,
    right: &Vector<T, N>,
    axis: Axis,
    gas: &GasConfig<T>,
) -> Result<CharacteristicBasis<T, N>> {
    let mut mean = [T::zero(); N];
    for d in 0..N {
        mean[d] = T::half() * (left[d] + right[d]);
    }
    let rho = mean[0];
    let p = eos_pressure(&mean, gas);
    if !(rho > T::zero() && p > T::zero()) {
        return Err(Error::InvalidState(format!(
            "characteristic basis at mean state rho = {rho}, p = {p}"
        )));
    }
    Ok(basis_at(&mean, p, axis, gas))
}

#[inline]
pub(crate) fn basis_at<T: Real, const N: usize>(
    mean: &Vector<T, N>,
    p: T,
    axis: Axis,
    gas: &GasConfig<T>,
) -> CharacteristicBasis<T, N> {
    let one = T::one();
    let half = T::half();
    let rho = mean[0];
    let n = axis.normal();
    let last = N - 1;

    let mut vel = [T::zero(); N];
    let mut q2 = T::zero();
    for d in 1..last {
        vel[d] = mean[d] / rho;
        q2 = q2 + vel[d] * vel[d];
    }
    let un = vel[n];
    let c2 = gas.gamma * p / rho;
    let c = c2.sqrt();
    let h = (mean[last] + p) / rho;
    let b1 = (gas.gamma - one) / c2;
    let b2 = half * b1 * q2;

    let mut r = [[T::zero(); N]; N];
    let mut r_inv = [[T::zero(); N]; N];

    // acoustic (u_n - c), entropy (u_n)
    r[0][0] = one;
    r[0][1] = one;
    r[0][last] = one;
    for d in 1..last {
        r[d][0] = vel[d];
        r[d][1] = vel[d];
        r[d][last] = vel[d];
    }
    r[n][0] = un - c;
    r[n][last] = un + c;
    r[last][0] = h - un * c;
    r[last][1] = half * q2;
    r[last][last] = h + un * c;

    r_inv[0][0] = half * (b2 + un / c);
    r_inv[1][0] = one - b2;
    r_inv[last][0] = half * (b2 - un / c);
    for d in 1..last {
        r_inv[0][d] = -half * b1 * vel[d];
        r_inv[1][d] = b1 * vel[d];
        r_inv[last][d] = -half * b1 * vel[d];
    }
    r_inv[0][n] = r_inv[0][n] - half / c;
    r_inv[last][n] = r_inv[last][n] + half / c;
    r_inv[0][last] = half * b1;
    r_inv[1][last] = -b1;
    r_inv[last][last] = half * b1;

    if N == 4 {
        // shear wave carries the tangential momentum
        let t = 3 - n;
        r[t][2] = one;
        r[last][2] = vel[t];
        r_inv[2][0] = -vel[t];
        r_inv[2][t] = one;
    }
    CharacteristicBasis { r, r_inv }
}

/// Gravity source for the Rayleigh-Taylor setup: `(0, 0, rho, rho v)`.
#[inline]
pub fn rt_gravity_source<T: Real>(u: &Vector<T, 4>) -> Vector<T, 4> {
    [T::zero(), T::zero(), u[0], u[2]]
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn gas() -> GasConfig<f64> {
        GasConfig::new(1.4).unwrap()
    }

    #[test]
    fn eos_examples() {
        let g = gas();
        assert_relative_eq!(eos_pressure(&[1.0, 0.0, 2.5], &g), 1.0, epsilon = 1e-15);
        assert_relative_eq!(eos_pressure(&[1.0, 2.0, 4.5], &g), 1.0, epsilon = 1e-15);
        assert_eq!(eos_pressure(&[2.0, 2.0, 1.0], &g), 0.0);
    }

    #[test]
    fn flux_examples() {
        let g = gas();
        let rest = PrimitiveState::new_1d(1.0, 0.0, 1.0).to_conserved_1d(&g);
        assert_eq!(physical_flux_x(&rest, &g), [0.0, 1.0, 0.0]);
        let moving = PrimitiveState::new_1d(1.0, 2.0, 1.0).to_conserved_1d(&g);
        assert_relative_eq!(moving[2], 4.5, epsilon = 1e-15);
        let f = physical_flux_x(&moving, &g);
        for (a, b) in f.iter().zip([2.0, 5.0, 11.0]) {
            assert_relative_eq!(*a, b, epsilon = 1e-14);
        }
        let rest2 = PrimitiveState::new_2d(1.0, 0.0, 0.0, 1.0).to_conserved_2d(&g);
        assert_eq!(physical_flux_x(&rest2, &g), [0.0, 1.0, 0.0, 0.0]);
        assert_eq!(physical_flux_y(&rest2, &g), [0.0, 0.0, 1.0, 0.0]);
    }

    #[test]
    fn speeds_examples() {
        let g = gas();
        let s = PrimitiveState::new_1d(1.0, 0.0, 1.0);
        let sp = interface_speeds(&s, &s, Axis::X, &g).unwrap();
        assert_relative_eq!(sp.plus, 1.4f64.sqrt(), epsilon = 1e-15);
        assert_relative_eq!(sp.minus, -1.4f64.sqrt(), epsilon = 1e-15);

        // u = 3, c = 1  =>  p = rho / gamma
        let fast = PrimitiveState::new_1d(1.0, 3.0, 1.0 / 1.4);
        let sp = interface_speeds(&fast, &fast, Axis::X, &g).unwrap();
        assert_relative_eq!(sp.plus, 4.0, epsilon = 1e-14);
        assert_eq!(sp.minus, 0.0);
    }

    #[test]
    fn speeds_mirror_symmetry() {
        let g = gas();
        let l = PrimitiveState::new_1d(1.0, 0.7, 2.0);
        let r = PrimitiveState::new_1d(0.4, -0.2, 0.5);
        let a = interface_speeds(&l, &r, Axis::X, &g).unwrap();
        let ml = PrimitiveState::new_1d(r.rho, -r.u, r.p);
        let mr = PrimitiveState::new_1d(l.rho, -l.u, l.p);
        let b = interface_speeds(&ml, &mr, Axis::X, &g).unwrap();
        assert_eq!(a.plus, -b.minus);
        assert_eq!(a.minus, -b.plus);
    }

    #[test]
    fn speeds_reject_invalid_state() {
        let g = gas();
        let ok = PrimitiveState::new_1d(1.0, 0.0, 1.0);
        let bad = PrimitiveState::new_1d(-1.0, 0.0, 1.0);
        assert!(interface_speeds(&ok, &bad, Axis::X, &g).is_err());
    }

    #[test]
    fn gravity_source_examples() {
        assert_eq!(rt_gravity_source(&[2.0, 0.0, 0.0, 5.0]), [0.0, 0.0, 2.0, 0.0]);
        assert_eq!(rt_gravity_source(&[1.0, 0.0, -0.5, 3.0]), [0.0, 0.0, 1.0, -0.5]);
    }

    #[test]
    fn basis_rejects_vacuum_mean() {
        let g = gas();
        assert!(characteristic_basis(&[1.0, 0.0, 0.0], &[1.0, 0.0, 0.0], Axis::X, &g).is_err());
    }

    #[test]
    fn works_in_single_precision() {
        let g = GasConfig::new(1.4f32).unwrap();
        let u = PrimitiveState::new_1d(1.0f32, 2.0, 1.0).to_conserved_1d(&g);
        assert!((eos_pressure(&u, &g) - 1.0).abs() < 1e-6);
    }
}
