//! Two-parameter SBM limiter family and the minmod function.

use crate::scalar::Real;

/// `(theta, tau)` of the SBM limiter. `tau >= 0.5` is dissipative,
/// `0 <= tau < 0.5` compressive and `tau < 0` overcompressive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimiterParams<T> {
    pub theta: T,
    pub tau: T,
}

impl<T: Real> LimiterParams<T> {
    pub fn new(theta: T, tau: T) -> Option<Self> {
        (theta >= T::one() && theta <= T::two()).then_some(Self { theta, tau })
    }

    /// `theta = 2, tau = -0.25`; used around contact discontinuities.
    pub fn overcompressive() -> Self {
        Self { theta: T::two(), tau: T::lit(-0.25) }
    }

    /// `theta = 2, tau = 0.5`, the classical Minmod2 limiter.
    pub fn minmod2() -> Self {
        Self { theta: T::two(), tau: T::half() }
    }
}

/// SBM limiter function of the slope ratio `r`.
#[inline]
pub fn sbm<T: Real>(r: T, params: &LimiterParams<T>) -> T {
    if r <= T::zero() {
        T::zero()
    } else if r <= T::one() {
        sbm_lower(r, params)
    } else {
        r * sbm_lower(r.recip(), params)
    }
}

#[inline]
fn sbm_lower<T: Real>(r: T, params: &LimiterParams<T>) -> T {
    (r * params.theta).min(T::one() + params.tau * (r - T::one()))
}

/// `(sgn a + sgn b) / 2 * min(|a|, |b|)`.
#[inline]
pub fn minmod<T: Real>(a: T, b: T) -> T {
    if a > T::zero() && b > T::zero() {
        a.min(b)
    } else if a < T::zero() && b < T::zero() {
        a.max(b)
    } else {
        T::zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sbm_examples() {
        let mm2 = LimiterParams::<f64>::minmod2();
        let oc = LimiterParams::<f64>::overcompressive();
        assert_eq!(sbm(-3.0, &mm2), 0.0);
        assert_eq!(sbm(-3.0, &oc), 0.0);
        assert_eq!(sbm(1.0, &mm2), 1.0);
        assert_eq!(sbm(1.0, &oc), 1.0);
        assert_eq!(sbm(0.75, &mm2), 0.875);
        assert_eq!(sbm(0.75, &oc), 1.0625);
        assert_eq!(sbm(2.0, &mm2), 1.5);
        assert_eq!(sbm(0.0, &oc), 0.0);
    }

    #[test]
    fn minmod_examples() {
        assert_eq!(minmod(1.0, 2.0), 1.0);
        assert_eq!(minmod(-1.0, 2.0), 0.0);
        assert_eq!(minmod(-3.0, -2.0), -2.0);
        assert_eq!(minmod(0.0, -2.0), 0.0);
    }

    #[test]
    fn params_reject_theta_out_of_range() {
        assert!(LimiterParams::new(0.5, 0.5).is_none());
        assert!(LimiterParams::new(2.5, 0.5).is_none());
        assert!(LimiterParams::new(1.5, -0.25).is_some());
    }
}
