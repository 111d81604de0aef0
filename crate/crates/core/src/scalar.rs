//! Scalar abstraction shared by every numerical kernel.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point type the solver can run on (`f32` or `f64`).
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Sum
    + Default
    + Debug
    + Display
    + LowerExp
    + Send
    + Sync
    + 'static
{
    /// Lossy conversion from an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("count representable in scalar type")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    #[inline]
    fn half() -> Self {
        Self::lit(0.5)
    }

    #[inline]
    fn two() -> Self {
        Self::lit(2.0)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Fixed-size state vector (conserved or characteristic).
pub type Vector<T, const N: usize> = [T; N];

/// Dense square matrix stored row by row.
pub type Matrix<T, const N: usize> = [[T; N]; N];

#[inline]
pub fn mat_vec<T: Real, const N: usize>(m: &Matrix<T, N>, v: &Vector<T, N>) -> Vector<T, N> {
    let mut out = [T::zero(); N];
    for (o, row) in out.iter_mut().zip(m.iter()) {
        let mut acc = T::zero();
        for (a, b) in row.iter().zip(v.iter()) {
            acc = acc + *a * *b;
        }
        *o = acc;
    }
    out
}

pub fn mat_mul<T: Real, const N: usize>(a: &Matrix<T, N>, b: &Matrix<T, N>) -> Matrix<T, N> {
    let mut out = [[T::zero(); N]; N];
    for i in 0..N {
        for j in 0..N {
            let mut acc = T::zero();
            for k in 0..N {
                acc = acc + a[i][k] * b[k][j];
            }
            out[i][j] = acc;
        }
    }
    out
}
