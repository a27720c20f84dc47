use std::fmt;
use std::hash::Hash;

use super::SpaceError;

/// A lattice point in a 2D or 3D space.
///
/// Components are addressed by axis index so that boxes, regions and
/// iteration can be written once for both dimensionalities.
pub trait Cell: Copy + Ord + Hash + fmt::Debug + fmt::Display + Send + Sync + 'static {
    type Dims: Extent<Cell = Self>;

    const AXES: usize;

    fn axis(self, i: usize) -> i64;

    fn from_axes(f: impl FnMut(usize) -> i64) -> Self;

    fn zero() -> Self {
        Self::from_axes(|_| 0)
    }

    /// Componentwise saturating addition.
    fn offset(self, by: Self) -> Self {
        Self::from_axes(|i| self.axis(i).saturating_add(by.axis(i)))
    }

    fn all_le(self, other: Self) -> bool {
        (0..Self::AXES).all(|i| self.axis(i) <= other.axis(i))
    }
}

/// Cell counts along each axis; every component is at least 1.
pub trait Extent: Copy + Eq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    type Cell: Cell<Dims = Self>;

    fn axis(self, i: usize) -> u32;

    fn try_from_axes(f: impl FnMut(usize) -> i64) -> Result<Self, SpaceError>;

    fn volume(self) -> u64 {
        (0..Self::Cell::AXES).map(|i| u64::from(self.axis(i))).product()
    }

    fn as_cell(self) -> Self::Cell {
        Self::Cell::from_axes(|i| i64::from(self.axis(i)))
    }
}

const AXIS_NAMES: [char; 3] = ['x', 'y', 'z'];

fn checked_extent(axis: usize, value: i64) -> Result<u32, SpaceError> {
    if value < 1 {
        return Err(SpaceError::Dimension { axis: AXIS_NAMES[axis], value });
    }
    u32::try_from(value).map_err(|_| SpaceError::Dimension { axis: AXIS_NAMES[axis], value })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Coord2 {
    pub x: i64,
    pub y: i64,
}

impl Coord2 {
    pub const fn new(x: i64, y: i64) -> Self {
        Self { x, y }
    }
}

impl From<(i64, i64)> for Coord2 {
    fn from((x, y): (i64, i64)) -> Self {
        Self { x, y }
    }
}

impl fmt::Display for Coord2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

impl Cell for Coord2 {
    type Dims = Dim2;
    const AXES: usize = 2;

    fn axis(self, i: usize) -> i64 {
        match i {
            0 => self.x,
            1 => self.y,
            _ => panic!("axis {i} out of range for Coord2"),
        }
    }

    fn from_axes(mut f: impl FnMut(usize) -> i64) -> Self {
        Self { x: f(0), y: f(1) }
    }
}

/// A 3D lattice point; `y` is the vertical axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Coord3 {
    pub x: i64,
    pub y: i64,
    pub z: i64,
}

impl Coord3 {
    pub const fn new(x: i64, y: i64, z: i64) -> Self {
        Self { x, y, z }
    }
}

impl From<(i64, i64, i64)> for Coord3 {
    fn from((x, y, z): (i64, i64, i64)) -> Self {
        Self { x, y, z }
    }
}

impl fmt::Display for Coord3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.x, self.y, self.z)
    }
}

impl Cell for Coord3 {
    type Dims = Dim3;
    const AXES: usize = 3;

    fn axis(self, i: usize) -> i64 {
        match i {
            0 => self.x,
            1 => self.y,
            2 => self.z,
            _ => panic!("axis {i} out of range for Coord3"),
        }
    }

    fn from_axes(mut f: impl FnMut(usize) -> i64) -> Self {
        Self { x: f(0), y: f(1), z: f(2) }
    }
}

/// Extent of a 2D space: `width` along x, `depth` along y.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Dim2 {
    width: u32,
    depth: u32,
}

impl Dim2 {
    pub fn new(width: i64, depth: i64) -> Result<Self, SpaceError> {
        Ok(Self { width: checked_extent(0, width)?, depth: checked_extent(1, depth)? })
    }

    pub fn width(self) -> u32 {
        self.width
    }

    pub fn depth(self) -> u32 {
        self.depth
    }
}

impl fmt::Display for Dim2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.width, self.depth)
    }
}

impl Extent for Dim2 {
    type Cell = Coord2;

    fn axis(self, i: usize) -> u32 {
        match i {
            0 => self.width,
            1 => self.depth,
            _ => panic!("axis {i} out of range for Dim2"),
        }
    }

    fn try_from_axes(mut f: impl FnMut(usize) -> i64) -> Result<Self, SpaceError> {
        Self::new(f(0), f(1))
    }
}

/// Extent of a 3D space: `width` along x, `height` along y, `depth` along z.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Dim3 {
    width: u32,
    height: u32,
    depth: u32,
}

impl Dim3 {
    pub fn new(width: i64, height: i64, depth: i64) -> Result<Self, SpaceError> {
        Ok(Self {
            width: checked_extent(0, width)?,
            height: checked_extent(1, height)?,
            depth: checked_extent(2, depth)?,
        })
    }

    pub fn width(self) -> u32 {
        self.width
    }

    pub fn height(self) -> u32 {
        self.height
    }

    pub fn depth(self) -> u32 {
        self.depth
    }

    pub fn max_side(self) -> u32 {
        self.width.max(self.height).max(self.depth)
    }
}

impl fmt::Display for Dim3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}x{}", self.width, self.height, self.depth)
    }
}

impl Extent for Dim3 {
    type Cell = Coord3;

    fn axis(self, i: usize) -> u32 {
        match i {
            0 => self.width,
            1 => self.height,
            2 => self.depth,
            _ => panic!("axis {i} out of range for Dim3"),
        }
    }

    fn try_from_axes(mut f: impl FnMut(usize) -> i64) -> Result<Self, SpaceError> {
        Self::new(f(0), f(1), f(2))
    }
}

/// Half-open axis-aligned box `[lo, hi)`. Empty when any `hi <= lo`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CellBox<C: Cell> {
    pub lo: C,
    pub hi: C,
}

impl<C: Cell> CellBox<C> {
    pub fn new(lo: C, hi: C) -> Self {
        Self { lo, hi }
    }

    pub fn sized(origin: C, dims: C::Dims) -> Self {
        Self { lo: origin, hi: origin.offset(dims.as_cell()) }
    }

    /// The closed box `[lo, hi]`.
    pub fn inclusive(lo: C, hi: C) -> Self {
        Self { lo, hi: hi.offset(C::from_axes(|_| 1)) }
    }

    pub fn is_empty(&self) -> bool {
        (0..C::AXES).any(|i| self.hi.axis(i) <= self.lo.axis(i))
    }

    pub fn volume(&self) -> u64 {
        if self.is_empty() {
            return 0;
        }
        (0..C::AXES)
            .map(|i| (self.hi.axis(i) as i128 - self.lo.axis(i) as i128) as u128)
            .try_fold(1u128, |acc, n| acc.checked_mul(n))
            .map_or(u64::MAX, |v| u64::try_from(v).unwrap_or(u64::MAX))
    }

    pub fn contains(&self, c: C) -> bool {
        (0..C::AXES).all(|i| self.lo.axis(i) <= c.axis(i) && c.axis(i) < self.hi.axis(i))
    }

    pub fn contains_box(&self, other: &Self) -> bool {
        (0..C::AXES).all(|i| self.lo.axis(i) <= other.lo.axis(i) && other.hi.axis(i) <= self.hi.axis(i))
    }

    pub fn intersect(&self, other: &Self) -> Self {
        Self {
            lo: C::from_axes(|i| self.lo.axis(i).max(other.lo.axis(i))),
            hi: C::from_axes(|i| self.hi.axis(i).min(other.hi.axis(i))),
        }
    }

    /// Cells in lexicographic (row-major) order.
    pub fn cells(&self) -> BoxCells<C> {
        BoxCells { bounds: *self, next: if self.is_empty() { None } else { Some(self.lo) } }
    }
}

pub struct BoxCells<C: Cell> {
    bounds: CellBox<C>,
    next: Option<C>,
}

impl<C: Cell> Iterator for BoxCells<C> {
    type Item = C;

    fn next(&mut self) -> Option<C> {
        let current = self.next?;
        let mut carry = true;
        let mut parts = [0i64; 3];
        for i in (0..C::AXES).rev() {
            let v = current.axis(i);
            parts[i] = if carry {
                if v + 1 < self.bounds.hi.axis(i) {
                    carry = false;
                    v + 1
                } else {
                    self.bounds.lo.axis(i)
                }
            } else {
                v
            };
        }
        self.next = if carry { None } else { Some(C::from_axes(|i| parts[i])) };
        Some(current)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn box_iteration_is_lexicographic() {
        let b = CellBox::inclusive(Coord2::new(0, 0), Coord2::new(1, 2));
        let cells: Vec<_> = b.cells().collect();
        let mut sorted = cells.clone();
        sorted.sort();
        assert_eq!(cells, sorted);
        assert_eq!(cells.len(), 6);
        assert_eq!(b.volume(), 6);
    }

    #[test]
    fn empty_box_yields_nothing() {
        let b = CellBox::new(Coord3::new(0, 0, 0), Coord3::new(2, 0, 2));
        assert!(b.is_empty());
        assert_eq!(b.cells().count(), 0);
        assert_eq!(b.volume(), 0);
    }

    #[test]
    fn dims_reject_non_positive() {
        assert!(matches!(Dim2::new(0, 5), Err(SpaceError::Dimension { axis: 'x', value: 0 })));
        assert!(matches!(Dim3::new(1, 0, 1), Err(SpaceError::Dimension { axis: 'y', .. })));
        assert!(Dim3::new(1, 1, -3).is_err());
        assert!(Dim2::new(1, 1).is_ok());
    }

    #[test]
    fn saturating_offset() {
        let c = Coord2::new(i64::MAX - 1, 0).offset(Coord2::new(10, 1));
        assert_eq!(c, Coord2::new(i64::MAX, 1));
    }
}
