//! Smoothness indicators on density and pressure and the three-way region
//! classification driving the adaptive scheme.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IndicatorConfig<T> {
    /// Noise filter in the indicator denominator.
    pub epsilon: T,
    /// Density threshold: a cell is rough when its smoothed indicator exceeds it.
    pub c1: T,
    /// Pressure threshold separating contact cells from the other rough cells.
    /// `None` collapses both into a single rough class.
    pub c2: Option<T>,
}

impl<T: Real> IndicatorConfig<T> {
    pub const DEFAULT_EPSILON: f64 = 0.2;

    pub fn new(c1: T, c2: Option<T>) -> Result<Self> {
        let cfg = Self { epsilon: T::lit(Self::DEFAULT_EPSILON), c1, c2 };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let unit = |v: T| v > T::zero() && v < T::one();
        if !(self.epsilon > T::zero()) {
            return Err(Error::config("indicator epsilon must be positive"));
        }
        if !unit(self.c1) {
            return Err(Error::config(format!("C1 must lie in (0, 1), got {}", self.c1)));
        }
        if let Some(c2) = self.c2 {
            if !unit(c2) {
                return Err(Error::config(format!("C2 must lie in (0, 1), got {c2}")));
            }
        }
        Ok(())
    }
}

/// Cell class. The discriminants are the codes written to snapshots.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[repr(u8)]
pub enum Region {
    /// Smooth.
    C = 0,
    /// Rough, away from contacts.
    B = 1,
    /// Neighborhood of a contact discontinuity.
    A = 2,
}

impl Region {
    pub fn code(self) -> u8 {
        self as u8
    }

    pub fn from_code(code: u8) -> Option<Self> {
        match code {
            0 => Some(Region::C),
            1 => Some(Region::B),
            2 => Some(Region::A),
            _ => None,
        }
    }
}

/// Per-interior-cell classification, row-major like the field interior.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionMask {
    pub nx: usize,
    pub ny: usize,
    pub cells: Vec<Region>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct RegionCounts {
    pub a: usize,
    pub b: usize,
    pub c: usize,
}

impl RegionMask {
    pub fn uniform(nx: usize, ny: usize, region: Region) -> Self {
        Self { nx, ny, cells: vec![region; nx * ny] }
    }

    #[inline]
    pub fn get(&self, i: usize, k: usize) -> Region {
        self.cells[k * self.nx + i]
    }

    pub fn counts(&self) -> RegionCounts {
        let mut c = RegionCounts::default();
        for r in &self.cells {
            match r {
                Region::A => c.a += 1,
                Region::B => c.b += 1,
                Region::C => c.c += 1,
            }
        }
        c
    }
}

/// Raw and smoothed indicator values on the interior cells.
#[derive(Debug, Clone, PartialEq)]
pub struct Indicator<T> {
    pub raw: Vec<T>,
    pub smoothed: Vec<T>,
}

#[inline]
fn ratio<T: Real>(num: T, den: T) -> T {
    if den > T::zero() {
        num / den
    } else {
        T::zero()
    }
}

/// Second-difference term and denominator of the 1-D indicator at the middle
/// of `(wm, w0, wp)`.
#[inline]
fn line_terms<T: Real>(wm: T, w0: T, wp: T, eps: T) -> (T, T) {
    let num = (wp - T::two() * w0 + wm).abs();
    let den = (wp - w0).abs() + (w0 - wm).abs() + eps * (wp.abs() + T::two() * w0.abs() + wm.abs());
    (num, den)
}

/// 1-D indicator of the scalar field `w`, given with `ghost >= 2` padding
/// cells on each side.
///
/// `E_j = |w_{j+1} - 2 w_j + w_{j-1}| / (|w_{j+1} - w_j| + |w_j - w_{j-1}|
///        + eps (w_{j+1} + 2 w_j + w_{j-1}))`, smoothed with `(1, 4, 1) / 6`.
pub fn indicator_1d<T: Real>(w: &[T], ghost: usize, eps: T) -> Result<Indicator<T>> {
    if ghost < 2 || w.len() < 2 * ghost + 1 {
        return Err(Error::config("1-D indicator needs at least two ghost cells per side"));
    }
    let n = w.len() - 2 * ghost;
    // raw values on interior cells -1 ..= n
    let raw_ext: Vec<T> = (ghost - 1..ghost + n + 1)
        .map(|j| {
            let (num, den) = line_terms(w[j - 1], w[j], w[j + 1], eps);
            ratio(num, den)
        })
        .collect();
    let sixth = T::lit(6.0);
    let smoothed = (1..=n)
        .map(|j| (raw_ext[j + 1] + T::lit(4.0) * raw_ext[j] + raw_ext[j - 1]) / sixth)
        .collect();
    Ok(Indicator { raw: raw_ext[1..=n].to_vec(), smoothed })
}

/// 2-D indicator of a padded, row-major scalar field with `ghost >= 2`
/// layers on every side (corners included).
///
/// `E = sqrt(E1 / E2)` where `E1` sums the squared second differences along
/// x and y and `E2` the squared 1-D denominators; smoothed with the
/// `(1, 4, 16) / 36` tensor kernel.
pub fn indicator_2d<T: Real>(
    w: &[T],
    nx: usize,
    ny: usize,
    ghost: usize,
    eps: T,
) -> Result<Indicator<T>> {
    let stride = nx + 2 * ghost;
    if ghost < 2 || w.len() != stride * (ny + 2 * ghost) {
        return Err(Error::config("2-D indicator needs a padded field with two ghost layers"));
    }
    let at = |i: isize, k: isize| w[(k + ghost as isize) as usize * stride + (i + ghost as isize) as usize];
    // raw values on cells -1 ..= n in both directions
    let ext = nx + 2;
    let mut raw_ext = vec![T::zero(); ext * (ny + 2)];
    for k in -1..=ny as isize {
        for i in -1..=nx as isize {
            let (nxm, dxm) = line_terms(at(i - 1, k), at(i, k), at(i + 1, k), eps);
            let (nym, dym) = line_terms(at(i, k - 1), at(i, k), at(i, k + 1), eps);
            let e1 = nxm * nxm + nym * nym;
            let e2 = dxm * dxm + dym * dym;
            raw_ext[(k + 1) as usize * ext + (i + 1) as usize] = ratio(e1, e2).sqrt();
        }
    }
    let r = |i: usize, k: usize| raw_ext[k * ext + i];
    let (c4, c16, c36) = (T::lit(4.0), T::lit(16.0), T::lit(36.0));
    let mut raw = Vec::with_capacity(nx * ny);
    let mut smoothed = Vec::with_capacity(nx * ny);
    for k in 1..=ny {
        for i in 1..=nx {
            raw.push(r(i, k));
            let corners = r(i - 1, k - 1) + r(i - 1, k + 1) + r(i + 1, k - 1) + r(i + 1, k + 1);
            let edges = r(i - 1, k) + r(i, k - 1) + r(i, k + 1) + r(i + 1, k);
            smoothed.push((corners + c4 * edges + c16 * r(i, k)) / c36);
        }
    }
    Ok(Indicator { raw, smoothed })
}

/// Rough where the smoothed density indicator exceeds `C1`; among rough
/// cells, contact (A) where the smoothed pressure indicator is below `C2`.
pub fn classify<T: Real>(
    rho_bar: &[T],
    p_bar: Option<&[T]>,
    nx: usize,
    ny: usize,
    cfg: &IndicatorConfig<T>,
) -> Result<RegionMask> {
    if rho_bar.len() != nx * ny || p_bar.is_some_and(|p| p.len() != nx * ny) {
        return Err(Error::config("indicator arrays do not match the mask shape"));
    }
    let cells = rho_bar
        .iter()
        .enumerate()
        .map(|(idx, &er)| {
            if !(er > cfg.c1) {
                return Region::C;
            }
            match (cfg.c2, p_bar) {
                (Some(c2), Some(p)) if p[idx] < c2 => Region::A,
                _ => Region::B,
            }
        })
        .collect();
    Ok(RegionMask { nx, ny, cells })
}
