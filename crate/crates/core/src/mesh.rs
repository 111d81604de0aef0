//! Uniform Cartesian grids with ghost padding, conserved-field storage and
//! boundary conditions.

use crate::error::{Error, Result};
use crate::euler::{GasConfig, PrimitiveState};
use crate::scalar::{Real, Vector};

/// Ghost layers on every side. The fifth-order interface flux at `j+1/2`
/// reads cells `j-2..=j+3`.
pub const GHOST: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D<T> {
    pub x_min: T,
    pub x_max: T,
    pub n_cells: usize,
    pub dx: T,
}

impl<T: Real> Grid1D<T> {
    pub fn new(x_min: T, x_max: T, n_cells: usize) -> Result<Self> {
        if n_cells == 0 || !(x_max > x_min) {
            return Err(Error::config(format!(
                "invalid 1-D grid: [{x_min}, {x_max}] with {n_cells} cells"
            )));
        }
        let dx = (x_max - x_min) / T::from_usize_lossy(n_cells);
        Ok(Self { x_min, x_max, n_cells, dx })
    }

    /// Center of cell `i` (ghost indices allowed).
    #[inline]
    pub fn x(&self, i: isize) -> T {
        self.x_min + (T::from_isize(i).unwrap() + T::half()) * self.dx
    }

    pub fn length(&self) -> T {
        self.x_max - self.x_min
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid2D<T> {
    pub x_min: T,
    pub x_max: T,
    pub y_min: T,
    pub y_max: T,
    pub nx: usize,
    pub ny: usize,
    pub dx: T,
    pub dy: T,
}

impl<T: Real> Grid2D<T> {
    pub fn new(x: (T, T), y: (T, T), nx: usize, ny: usize) -> Result<Self> {
        if nx == 0 || ny == 0 || !(x.1 > x.0) || !(y.1 > y.0) {
            return Err(Error::config(format!(
                "invalid 2-D grid: [{}, {}]x[{}, {}] with {nx}x{ny} cells",
                x.0, x.1, y.0, y.1
            )));
        }
        Ok(Self {
            x_min: x.0,
            x_max: x.1,
            y_min: y.0,
            y_max: y.1,
            nx,
            ny,
            dx: (x.1 - x.0) / T::from_usize_lossy(nx),
            dy: (y.1 - y.0) / T::from_usize_lossy(ny),
        })
    }

    #[inline]
    pub fn x(&self, i: isize) -> T {
        self.x_min + (T::from_isize(i).unwrap() + T::half()) * self.dx
    }

    #[inline]
    pub fn y(&self, k: isize) -> T {
        self.y_min + (T::from_isize(k).unwrap() + T::half()) * self.dy
    }

    pub fn cell_area(&self) -> T {
        self.dx * self.dy
    }
}

/// Conserved variables on a ghost-padded grid.
///
/// Cells are stored row-major (y outer, x inner) and each cell holds its `N`
/// components contiguously. A 1-D field is a single row without y-ghosts.
#[derive(Debug, Clone, PartialEq)]
pub struct ConservedField<T, const N: usize> {
    nx: usize,
    ny: usize,
    gy: usize,
    cells: Vec<Vector<T, N>>,
}

/// `(rho, rho u, E)` on a 1-D grid.
pub type Field1D<T> = ConservedField<T, 3>;
/// `(rho, rho u, rho v, E)` on a 2-D grid.
pub type Field2D<T> = ConservedField<T, 4>;

impl<T: Real, const N: usize> ConservedField<T, N> {
    pub fn new_1d(nx: usize) -> Self {
        Self {
            nx,
            ny: 1,
            gy: 0,
            cells: vec![[T::zero(); N]; nx + 2 * GHOST],
        }
    }

    pub fn new_2d(nx: usize, ny: usize) -> Self {
        Self {
            nx,
            ny,
            gy: GHOST,
            cells: vec![[T::zero(); N]; (nx + 2 * GHOST) * (ny + 2 * GHOST)],
        }
    }

    #[inline]
    pub fn nx(&self) -> usize {
        self.nx
    }

    #[inline]
    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn is_2d(&self) -> bool {
        self.gy > 0
    }

    /// Number of interior cells.
    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Padded row length.
    #[inline]
    pub fn stride(&self) -> usize {
        self.nx + 2 * GHOST
    }

    /// Storage offset of cell `(i, k)`; ghost cells have negative or
    /// past-the-end indices.
    #[inline]
    pub fn offset(&self, i: isize, k: isize) -> usize {
        let col = (i + GHOST as isize) as usize;
        let row = (k + self.gy as isize) as usize;
        debug_assert!(col < self.stride() && row < self.ny + 2 * self.gy);
        row * self.stride() + col
    }

    #[inline]
    pub fn get(&self, i: isize, k: isize) -> &Vector<T, N> {
        &self.cells[self.offset(i, k)]
    }

    #[inline]
    pub fn get_mut(&mut self, i: isize, k: isize) -> &mut Vector<T, N> {
        let o = self.offset(i, k);
        &mut self.cells[o]
    }

    #[inline]
    pub fn set(&mut self, i: isize, k: isize, value: Vector<T, N>) {
        let o = self.offset(i, k);
        self.cells[o] = value;
    }

    /// Raw padded storage.
    pub fn cells(&self) -> &[Vector<T, N>] {
        &self.cells
    }

    /// Interior cells in storage order, with their `(i, k)` indices.
    pub fn interior(&self) -> impl Iterator<Item = ((usize, usize), &Vector<T, N>)> + '_ {
        (0..self.ny).flat_map(move |k| {
            (0..self.nx).map(move |i| ((i, k), self.get(i as isize, k as isize)))
        })
    }

    /// Sum of each conserved component over the interior.
    pub fn totals(&self) -> Vector<T, N> {
        let mut acc = [T::zero(); N];
        for (_, u) in self.interior() {
            for (a, v) in acc.iter_mut().zip(u.iter()) {
                *a = *a + *v;
            }
        }
        acc
    }

    /// Shifts storage so that cell `i` of `self` becomes cell `i + shift`
    /// (1-D, interior only, periodic wrap). Used to check periodicity.
    pub fn rolled(&self, shift: isize) -> Self {
        let mut out = self.clone();
        let n = self.nx as isize;
        for k in 0..self.ny as isize {
            for i in 0..n {
                out.set((i + shift).rem_euclid(n), k, *self.get(i, k));
            }
        }
        out
    }
}

/// Condition applied on one side of the domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundaryCondition<T> {
    /// Zero-order extrapolation.
    Free,
    Periodic,
    /// Reflecting wall; the wall-normal momentum changes sign in the ghosts.
    SolidWall,
    /// Fixed primitive state in every ghost layer.
    Dirichlet(PrimitiveState<T>),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundarySpec<T> {
    pub left: BoundaryCondition<T>,
    pub right: BoundaryCondition<T>,
    /// Ignored for 1-D fields.
    pub bottom: BoundaryCondition<T>,
    /// Ignored for 1-D fields.
    pub top: BoundaryCondition<T>,
}

impl<T: Real> BoundarySpec<T> {
    pub fn uniform(bc: BoundaryCondition<T>) -> Self {
        Self { left: bc, right: bc, bottom: bc, top: bc }
    }

    pub fn periodic_x(&self) -> bool {
        matches!(self.left, BoundaryCondition::Periodic)
    }

    pub fn periodic_y(&self) -> bool {
        matches!(self.bottom, BoundaryCondition::Periodic)
    }

    pub fn validate(&self, two_d: bool) -> Result<()> {
        use BoundaryCondition::Periodic;
        let pair = |a: &BoundaryCondition<T>, b: &BoundaryCondition<T>, axis: &str| {
            if matches!(a, Periodic) != matches!(b, Periodic) {
                Err(Error::config(format!(
                    "periodic boundary on only one {axis} side"
                )))
            } else {
                Ok(())
            }
        };
        pair(&self.left, &self.right, "x")?;
        if two_d {
            pair(&self.bottom, &self.top, "y")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy)]
enum Side {
    Low,
    High,
}

/// Populates every ghost layer of `field` according to `bc`. Interior cells
/// are left untouched.
pub fn fill_ghosts<T: Real, const N: usize>(
    field: &mut ConservedField<T, N>,
    bc: &BoundarySpec<T>,
    gas: &GasConfig<T>,
) -> Result<()> {
    let two_d = field.is_2d();
    bc.validate(two_d)?;
    let (nx, ny) = (field.nx as isize, field.ny as isize);

    for k in 0..ny {
        fill_line(field, &bc.left, Side::Low, 1, gas, nx, |f, i| f.offset(i, k));
        fill_line(field, &bc.right, Side::High, 1, gas, nx, |f, i| f.offset(i, k));
    }
    if two_d {
        let g = GHOST as isize;
        for i in -g..nx + g {
            fill_line(field, &bc.bottom, Side::Low, 2, gas, ny, |f, k| f.offset(i, k));
            fill_line(field, &bc.top, Side::High, 2, gas, ny, |f, k| f.offset(i, k));
        }
    }
    Ok(())
}

/// Fills the three ghosts of one grid line. `at(f, m)` maps a position along
/// the line (ghosts included) to a storage offset; `normal` is the momentum
/// component perpendicular to the boundary.
fn fill_line<T: Real, const N: usize>(
    field: &mut ConservedField<T, N>,
    bc: &BoundaryCondition<T>,
    side: Side,
    normal: usize,
    gas: &GasConfig<T>,
    n: isize,
    at: impl Fn(&ConservedField<T, N>, isize) -> usize,
) {
    for g in 1..=GHOST as isize {
        let (ghost, src) = match (bc, side) {
            (BoundaryCondition::Free, Side::Low) => (-g, 0),
            (BoundaryCondition::Free, Side::High) => (n - 1 + g, n - 1),
            (BoundaryCondition::Periodic, Side::Low) => (-g, n - g),
            (BoundaryCondition::Periodic, Side::High) => (n - 1 + g, g - 1),
            (BoundaryCondition::SolidWall, Side::Low) => (-g, g - 1),
            (BoundaryCondition::SolidWall, Side::High) => (n - 1 + g, n - g),
            (BoundaryCondition::Dirichlet(_), Side::Low) => (-g, 0),
            (BoundaryCondition::Dirichlet(_), Side::High) => (n - 1 + g, n - 1),
        };
        let dst = at(field, ghost);
        let value = match bc {
            BoundaryCondition::Dirichlet(state) => dirichlet_state::<T, N>(state, gas),
            BoundaryCondition::SolidWall => {
                let mut v = field.cells[at(field, src)];
                v[normal] = -v[normal];
                v
            }
            _ => field.cells[at(field, src)],
        };
        field.cells[dst] = value;
    }
}

fn dirichlet_state<T: Real, const N: usize>(
    state: &PrimitiveState<T>,
    gas: &GasConfig<T>,
) -> Vector<T, N> {
    let mut out = [T::zero(); N];
    match N {
        3 => out.copy_from_slice(&state.to_conserved_1d(gas)),
        4 => out.copy_from_slice(&state.to_conserved_2d(gas)),
        _ => unreachable!("Euler fields have 3 or 4 components"),
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gas() -> GasConfig<f64> {
        GasConfig::new(1.4).unwrap()
    }

    fn ramp_1d(n: usize) -> Field1D<f64> {
        let g = gas();
        let mut f = Field1D::new_1d(n);
        for i in 0..n {
            let p = PrimitiveState::new_1d(1.0 + i as f64, 0.1 * i as f64 - 0.2, 1.0 + 0.5 * i as f64);
            f.set(i as isize, 0, p.to_conserved_1d(&g));
        }
        f
    }

    #[test]
    fn periodic_wraps_around() {
        let mut f = ramp_1d(8);
        fill_ghosts(&mut f, &BoundarySpec::uniform(BoundaryCondition::Periodic), &gas()).unwrap();
        assert_eq!(f.get(-1, 0), f.get(7, 0));
        assert_eq!(f.get(-3, 0), f.get(5, 0));
        assert_eq!(f.get(8, 0), f.get(0, 0));
        assert_eq!(f.get(10, 0), f.get(2, 0));
    }

    #[test]
    fn solid_wall_reflects_normal_velocity() {
        let g = gas();
        let mut f = Field1D::new_1d(4);
        for i in 0..4 {
            f.set(i, 0, PrimitiveState::new_1d(1.0, 2.0, 1.0).to_conserved_1d(&g));
        }
        fill_ghosts(&mut f, &BoundarySpec::uniform(BoundaryCondition::SolidWall), &g).unwrap();
        let ghost = PrimitiveState::from_conserved_1d(f.get(-1, 0), &g);
        assert_eq!((ghost.rho, ghost.u), (1.0, -2.0));
        assert!((ghost.p - 1.0).abs() < 1e-15);
    }

    #[test]
    fn free_copies_edge_cell() {
        let mut f = ramp_1d(5);
        fill_ghosts(&mut f, &BoundarySpec::uniform(BoundaryCondition::Free), &gas()).unwrap();
        for g in 1..=3 {
            assert_eq!(f.get(-g, 0), f.get(0, 0));
            assert_eq!(f.get(4 + g, 0), f.get(4, 0));
        }
    }

    #[test]
    fn dirichlet_writes_fixed_state_everywhere() {
        let g = gas();
        let top = PrimitiveState::new_2d(1.0, 0.0, 0.0, 2.5);
        let bc = BoundarySpec {
            left: BoundaryCondition::SolidWall,
            right: BoundaryCondition::SolidWall,
            bottom: BoundaryCondition::Dirichlet(PrimitiveState::new_2d(2.0, 0.0, 0.0, 1.0)),
            top: BoundaryCondition::Dirichlet(top),
        };
        let mut f = Field2D::new_2d(3, 4);
        for k in 0..4 {
            for i in 0..3 {
                f.set(i, k, PrimitiveState::new_2d(1.5, 0.1, 0.2, 2.0).to_conserved_2d(&g));
            }
        }
        fill_ghosts(&mut f, &bc, &g).unwrap();
        for gk in 4..7 {
            for i in -3..6 {
                assert_eq!(*f.get(i, gk), top.to_conserved_2d(&g));
            }
        }
    }

    #[test]
    fn one_sided_periodic_is_rejected() {
        let mut f = ramp_1d(4);
        let bc = BoundarySpec {
            left: BoundaryCondition::Periodic,
            ..BoundarySpec::uniform(BoundaryCondition::Free)
        };
        assert!(matches!(fill_ghosts(&mut f, &bc, &gas()), Err(Error::Config(_))));
    }

    #[test]
    fn fill_is_idempotent_in_2d() {
        let g = gas();
        let mut f = Field2D::new_2d(5, 4);
        for k in 0..4 {
            for i in 0..5 {
                let p = PrimitiveState::new_2d(1.0 + i as f64, 0.3 * k as f64, -0.2 * i as f64, 1.0 + k as f64);
                f.set(i, k, p.to_conserved_2d(&g));
            }
        }
        let bc = BoundarySpec {
            left: BoundaryCondition::SolidWall,
            right: BoundaryCondition::Free,
            bottom: BoundaryCondition::Periodic,
            top: BoundaryCondition::Periodic,
        };
        fill_ghosts(&mut f, &bc, &g).unwrap();
        let once = f.clone();
        fill_ghosts(&mut f, &bc, &g).unwrap();
        assert_eq!(once, f);
        // wall on the left negates rho*u only
        let (inner, ghost) = (f.get(0, 1), f.get(-1, 1));
        assert_eq!(ghost[0], inner[0]);
        assert_eq!(ghost[1], -inner[1]);
        assert_eq!(ghost[2], inner[2]);
        assert_eq!(ghost[3], inner[3]);
    }

    #[test]
    fn periodic_fill_commutes_with_roll() {
        let bc = BoundarySpec::uniform(BoundaryCondition::Periodic);
        let mut f = ramp_1d(9);
        fill_ghosts(&mut f, &bc, &gas()).unwrap();
        let mut rolled = f.rolled(9);
        fill_ghosts(&mut rolled, &bc, &gas()).unwrap();
        assert_eq!(f, rolled);
    }
}
