//! Bounded 2D and 3D cell spaces.
//!
//! A space maps coordinates to brick names. Placement operations overwrite
//! (last writer wins) and silently clip anything that falls outside the
//! space, or outside the active region when one is set. A region also
//! translates placement coordinates: with a region at origin `o`, placing
//! at `c` targets the absolute cell `o + c`.

mod coord;
pub mod raster;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::palette::{BrickName, Palette, PaletteError};

pub use coord::{BoxCells, Cell, CellBox, Coord2, Coord3, Dim2, Dim3, Extent};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpaceError {
    #[error("dimension along {axis} must be at least 1, got {value}")]
    Dimension { axis: char, value: i64 },
    #[error(transparent)]
    Palette(#[from] PaletteError),
    #[error("region {region} does not fit inside space {space}")]
    Region { region: String, space: String },
    #[error("radius must be non-negative, got {0}")]
    NegativeRadius(i64),
    #[error("range lower corner {lo} exceeds upper corner {hi}")]
    Range { lo: String, hi: String },
    #[error("operation would visit {requested} cells, over the limit of {limit}")]
    WorkLimit { requested: u64, limit: u64 },
}

/// An active sub-box of a space. Placement coordinates are relative to
/// `origin` and clipped to the region.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Region<C: Cell> {
    pub origin: C,
    pub dims: C::Dims,
}

impl<C: Cell> Region<C> {
    pub fn new(origin: C, dims: C::Dims) -> Self {
        Self { origin, dims }
    }

    pub fn bounds(&self) -> CellBox<C> {
        CellBox::sized(self.origin, self.dims)
    }
}

impl<C: Cell> fmt::Display for Region<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at {}", self.dims, self.origin)
    }
}

pub type Region2 = Region<Coord2>;
pub type Region3 = Region<Coord3>;

#[derive(Debug, Clone)]
pub struct Space<C: Cell> {
    dims: C::Dims,
    cells: BTreeMap<C, BrickName>,
    region: Option<Region<C>>,
    palette: Arc<Palette>,
    clipped: u64,
    work_limit: Option<u64>,
}

pub type Space2D = Space<Coord2>;
pub type Space3D = Space<Coord3>;

impl<C: Cell> PartialEq for Space<C> {
    fn eq(&self, other: &Self) -> bool {
        self.dims == other.dims && self.cells == other.cells && self.region == other.region
    }
}

impl<C: Cell> Space<C> {
    /// An empty space whose bricks are checked against the built-in palette.
    pub fn new(dims: C::Dims) -> Self {
        Self::with_palette(dims, Palette::shared_default())
    }

    pub fn with_palette(dims: C::Dims, palette: Arc<Palette>) -> Self {
        Self { dims, cells: BTreeMap::new(), region: None, palette, clipped: 0, work_limit: None }
    }

    pub fn dims(&self) -> C::Dims {
        self.dims
    }

    pub fn capacity(&self) -> u64 {
        self.dims.volume()
    }

    pub fn palette(&self) -> &Arc<Palette> {
        &self.palette
    }

    pub fn region(&self) -> Option<&Region<C>> {
        self.region.as_ref()
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn get(&self, c: C) -> Option<&BrickName> {
        self.cells.get(&c)
    }

    /// Number of cells discarded by clipping so far.
    pub fn clipped(&self) -> u64 {
        self.clipped
    }

    /// Caps the number of cells a single operation may visit. Used by the
    /// interpreter so that a typo like `put2D (99999999,99999999)` fails fast
    /// instead of exhausting memory.
    pub fn set_work_limit(&mut self, limit: Option<u64>) {
        self.work_limit = limit;
    }

    pub fn bounds(&self) -> CellBox<C> {
        CellBox::sized(C::zero(), self.dims)
    }

    fn clip_box(&self) -> CellBox<C> {
        self.region.map_or_else(|| self.bounds(), |r| r.bounds())
    }

    fn translation(&self) -> C {
        self.region.map_or_else(C::zero, |r| r.origin)
    }

    fn check_work(&self, requested: u64) -> Result<(), SpaceError> {
        match self.work_limit {
            Some(limit) if requested > limit => Err(SpaceError::WorkLimit { requested, limit }),
            _ => Ok(()),
        }
    }

    fn check_brick(&self, brick: &BrickName) -> Result<(), SpaceError> {
        self.palette.lookup(brick.as_str())?;
        Ok(())
    }

    /// Places one cell given in placement (region-relative) coordinates.
    /// Returns whether the cell survived clipping.
    fn paint(&mut self, c: C, brick: &BrickName) -> bool {
        let abs = c.offset(self.translation());
        if self.clip_box().contains(abs) {
            self.cells.insert(abs, brick.clone());
            true
        } else {
            self.clipped += 1;
            false
        }
    }

    /// Fills the box `[origin, origin + size)`, returning the number of cells written.
    pub fn put(&mut self, size: C::Dims, brick: &BrickName, origin: C) -> Result<usize, SpaceError> {
        self.check_brick(brick)?;
        let target = CellBox::sized(origin.offset(self.translation()), size);
        let visible = target.intersect(&self.clip_box());
        self.check_work(visible.volume())?;
        let mut written = 0;
        for c in visible.cells() {
            self.cells.insert(c, brick.clone());
            written += 1;
        }
        self.clipped += target.volume() - visible.volume();
        Ok(written)
    }

    /// Single-cell placement; equivalent to `put` with a unit size.
    pub fn put_cell(&mut self, c: C, brick: &BrickName) -> Result<bool, SpaceError> {
        self.check_brick(brick)?;
        Ok(self.paint(c, brick))
    }

    pub fn set_region(&mut self, region: Region<C>) -> Result<(), SpaceError> {
        let inside = (0..C::AXES).all(|i| region.origin.axis(i) >= 0)
            && self.bounds().contains_box(&region.bounds());
        if !inside {
            return Err(SpaceError::Region { region: region.to_string(), space: self.dims.to_string() });
        }
        self.region = Some(region);
        Ok(())
    }

    pub fn clear_region(&mut self) {
        self.region = None;
    }

    /// Visits every coordinate of the closed box `[lo, hi]` and places the
    /// brick the callback returns; `None` leaves the cell untouched.
    pub fn traverse_within<E, F>(&mut self, lo: C, hi: C, mut brick_fn: F) -> Result<usize, E>
    where
        E: From<SpaceError>,
        F: FnMut(C) -> Result<Option<BrickName>, E>,
    {
        if !lo.all_le(hi) {
            return Err(SpaceError::Range { lo: lo.to_string(), hi: hi.to_string() }.into());
        }
        let range = CellBox::inclusive(lo, hi);
        self.check_work(range.volume())?;
        let mut written = 0;
        for c in range.cells() {
            if let Some(brick) = brick_fn(c)? {
                self.check_brick(&brick)?;
                written += usize::from(self.paint(c, &brick));
            }
        }
        Ok(written)
    }

    /// Occupied cells, sorted lexicographically by coordinate.
    pub fn occupied(&self) -> Vec<(C, BrickName)> {
        self.cells.iter().map(|(c, b)| (*c, b.clone())).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (C, &BrickName)> + '_ {
        self.cells.iter().map(|(c, b)| (*c, b))
    }

    pub fn count_of(&self, brick: &str) -> usize {
        self.cells.values().filter(|b| b.as_str() == brick).count()
    }
}

impl Space2D {
    pub fn build(width: i64, depth: i64) -> Result<Self, SpaceError> {
        Ok(Self::new(Dim2::new(width, depth)?))
    }

    fn paint_all(&mut self, cells: impl IntoIterator<Item = Coord2>, brick: &BrickName) -> usize {
        cells.into_iter().map(|c| usize::from(self.paint(c, brick))).sum()
    }

    /// Draws the Bresenham segment from `p0` to `p1`, both endpoints included.
    pub fn line(&mut self, brick: &BrickName, p0: Coord2, p1: Coord2) -> Result<usize, SpaceError> {
        self.check_brick(brick)?;
        self.check_work(raster::line_len(p0, p1))?;
        Ok(self.paint_all(raster::line(p0, p1), brick))
    }

    /// Fills every cell whose rounded distance from `center` is at most `radius`.
    pub fn circle(&mut self, radius: i64, brick: &BrickName, center: Coord2) -> Result<usize, SpaceError> {
        self.round_shape(radius, brick, center, raster::in_circle)
    }

    /// Places the cells whose rounded distance from `center` equals `radius`.
    pub fn ring(&mut self, radius: i64, brick: &BrickName, center: Coord2) -> Result<usize, SpaceError> {
        self.round_shape(radius, brick, center, raster::on_ring)
    }

    fn round_shape(
        &mut self,
        radius: i64,
        brick: &BrickName,
        center: Coord2,
        keep: fn(i64, i64, i64) -> bool,
    ) -> Result<usize, SpaceError> {
        if radius < 0 {
            return Err(SpaceError::NegativeRadius(radius));
        }
        self.check_brick(brick)?;
        // Only offsets that land inside the clip box need visiting.
        let shift = self.translation();
        let reach = CellBox::inclusive(
            Coord2::new(center.x.saturating_sub(radius), center.y.saturating_sub(radius)),
            Coord2::new(center.x.saturating_add(radius), center.y.saturating_add(radius)),
        );
        let clip = self.clip_box();
        let local_clip = CellBox::new(
            Coord2::new(clip.lo.x - shift.x, clip.lo.y - shift.y),
            Coord2::new(clip.hi.x - shift.x, clip.hi.y - shift.y),
        );
        let visible = reach.intersect(&local_clip);
        self.check_work(visible.volume())?;
        let cells: Vec<Coord2> = visible
            .cells()
            .filter(|c| keep(c.x - center.x, c.y - center.y, radius))
            .collect();
        Ok(self.paint_all(cells, brick))
    }
}

impl Space3D {
    pub fn build(width: i64, height: i64, depth: i64) -> Result<Self, SpaceError> {
        Ok(Self::new(Dim3::new(width, height, depth)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn red() -> BrickName {
        BrickName::from("RED")
    }

    #[test]
    fn build_reports_capacity() {
        let s = Space2D::build(64, 64).unwrap();
        assert_eq!(s.capacity(), 4096);
        assert!(s.is_empty());
        assert!(s.region().is_none());
        assert_eq!(Space2D::build(1, 1).unwrap().capacity(), 1);
        assert!(matches!(Space2D::build(0, 5), Err(SpaceError::Dimension { .. })));
    }

    #[test]
    fn put_overwrites_and_clips() {
        let mut s = Space2D::build(4, 4).unwrap();
        assert_eq!(s.put(Dim2::new(3, 3).unwrap(), &red(), Coord2::new(2, 2)).unwrap(), 4);
        assert_eq!(s.clipped(), 5);
        let white = BrickName::from("WHITE");
        s.put(Dim2::new(1, 1).unwrap(), &white, Coord2::new(3, 3)).unwrap();
        assert_eq!(s.get(Coord2::new(3, 3)).unwrap().as_str(), "WHITE");
        assert_eq!(s.len(), 4);
    }

    #[test]
    fn put_rejects_unknown_brick() {
        let mut s = Space2D::build(4, 4).unwrap();
        let err = s.put(Dim2::new(1, 1).unwrap(), &BrickName::from("FUCHSIA"), Coord2::new(0, 0));
        assert!(matches!(err, Err(SpaceError::Palette(PaletteError::UnknownBrick(_)))));
    }

    #[test]
    fn put3d_fill_and_corner() {
        let mut s = Space3D::build(8, 8, 8).unwrap();
        assert_eq!(s.put(Dim3::new(8, 8, 8).unwrap(), &red(), Coord3::new(0, 0, 0)).unwrap(), 512);
        let mut t = Space3D::build(8, 8, 8).unwrap();
        assert_eq!(t.put(Dim3::new(2, 2, 2).unwrap(), &red(), Coord3::new(7, 7, 7)).unwrap(), 1);
        assert!(Dim3::new(1, 0, 1).is_err());
    }

    #[test]
    fn region_translates_and_clips() {
        let mut s = Space2D::build(64, 64).unwrap();
        s.set_region(Region::new(Coord2::new(10, 10), Dim2::new(5, 5).unwrap())).unwrap();
        s.put(Dim2::new(10, 10).unwrap(), &red(), Coord2::new(0, 0)).unwrap();
        assert_eq!(s.len(), 25);
        assert!(s.iter().all(|(c, _)| (10..15).contains(&c.x) && (10..15).contains(&c.y)));
    }

    #[test]
    fn region_must_fit() {
        let mut s = Space2D::build(64, 64).unwrap();
        let r = Region::new(Coord2::new(60, 60), Dim2::new(10, 10).unwrap());
        assert!(matches!(s.set_region(r), Err(SpaceError::Region { .. })));
        let neg = Region::new(Coord2::new(-1, 0), Dim2::new(2, 2).unwrap());
        assert!(s.set_region(neg).is_err());
    }

    #[test]
    fn whole_space_region_is_identity() {
        let mut a = Space2D::build(8, 8).unwrap();
        let mut b = a.clone();
        b.set_region(Region::new(Coord2::new(0, 0), a.dims())).unwrap();
        for s in [&mut a, &mut b] {
            s.put(Dim2::new(5, 3).unwrap(), &red(), Coord2::new(4, -1)).unwrap();
            s.circle(2, &red(), Coord2::new(1, 6)).unwrap();
        }
        assert_eq!(a.occupied(), b.occupied());
    }

    #[test]
    fn clear_region_restores_absolute_placement() {
        let mut s = Space2D::build(16, 16).unwrap();
        s.clear_region();
        assert!(s.region().is_none());
        s.set_region(Region::new(Coord2::new(3, 3), Dim2::new(4, 4).unwrap())).unwrap();
        s.put(Dim2::new(1, 1).unwrap(), &red(), Coord2::new(0, 0)).unwrap();
        s.clear_region();
        assert_eq!(s.len(), 1);
        s.put(Dim2::new(1, 1).unwrap(), &red(), Coord2::new(0, 0)).unwrap();
        assert!(s.get(Coord2::new(0, 0)).is_some());
        assert!(s.get(Coord2::new(3, 3)).is_some());
    }

    #[test]
    fn traverse_checkerboard() {
        let mut s = Space2D::build(8, 8).unwrap();
        let (black, white) = (BrickName::from("BLACK"), BrickName::from("WHITE"));
        s.traverse_within::<SpaceError, _>(Coord2::new(0, 0), Coord2::new(7, 7), |c| {
            Ok(Some(if (c.x + c.y) % 2 == 0 { black.clone() } else { white.clone() }))
        })
        .unwrap();
        assert_eq!(s.count_of("BLACK"), 32);
        assert_eq!(s.count_of("WHITE"), 32);
    }

    #[test]
    fn traverse_empty_and_single() {
        let mut s = Space2D::build(4, 4).unwrap();
        s.traverse_within::<SpaceError, _>(Coord2::new(0, 0), Coord2::new(3, 3), |_| Ok(None)).unwrap();
        assert!(s.is_empty());
        s.traverse_within::<SpaceError, _>(Coord2::new(0, 0), Coord2::new(0, 0), |_| Ok(Some(red())))
            .unwrap();
        assert_eq!(s.len(), 1);
        let err = s.traverse_within::<SpaceError, _>(Coord2::new(2, 0), Coord2::new(1, 0), |_| Ok(None));
        assert!(matches!(err, Err(SpaceError::Range { .. })));
    }

    #[test]
    fn occupied_is_sorted() {
        let mut s = Space2D::build(8, 8).unwrap();
        assert!(s.occupied().is_empty());
        s.put_cell(Coord2::new(3, 2), &red()).unwrap();
        assert_eq!(s.occupied(), vec![(Coord2::new(3, 2), red())]);
        s.put_cell(Coord2::new(1, 7), &red()).unwrap();
        s.put_cell(Coord2::new(1, 0), &red()).unwrap();
        let coords: Vec<_> = s.occupied().into_iter().map(|(c, _)| c).collect();
        assert_eq!(coords, vec![Coord2::new(1, 0), Coord2::new(1, 7), Coord2::new(3, 2)]);
    }

    #[test]
    fn work_limit_stops_huge_operations() {
        let mut s = Space2D::build(100_000, 100_000).unwrap();
        s.set_work_limit(Some(1_000));
        let big = Dim2::new(1_000, 1_000).unwrap();
        assert!(matches!(s.put(big, &red(), Coord2::new(0, 0)), Err(SpaceError::WorkLimit { .. })));
        assert!(s.is_empty());
        // Clipped-away placements cost nothing.
        assert_eq!(s.put(big, &red(), Coord2::new(-5_000, 0)).unwrap(), 0);
    }

    #[test]
    fn negative_radius_is_rejected() {
        let mut s = Space2D::build(4, 4).unwrap();
        assert!(matches!(s.circle(-1, &red(), Coord2::new(0, 0)), Err(SpaceError::NegativeRadius(-1))));
        assert!(matches!(s.ring(-2, &red(), Coord2::new(0, 0)), Err(SpaceError::NegativeRadius(-2))));
    }
}
