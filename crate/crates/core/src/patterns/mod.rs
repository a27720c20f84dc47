//! Deterministic generators for fractal, curve, surface and tiling artifacts.

mod lace;
mod menger;
mod moebius;
mod pentomino;
mod sierpinski;
mod wunderlich;

use std::collections::BTreeSet;

use thiserror::Error;

use crate::palette::BrickName;
use crate::space::{Cell, CellBox, Coord2, Extent, Space, SpaceError};

pub use lace::{lace, lace_layout, stamp_arithmetic, Direction, LaceLayout, LaceSpec, Stamp};
pub use menger::{menger_dual, menger_sponge, MAX_MENGER_LEVEL};
pub use moebius::{moebius, moebius_cells, MoebiusSpec};
pub use pentomino::Pentomino;
pub use sierpinski::{sierpinski_pyramid, MAX_SIERPINSKI_LEVEL};
pub use wunderlich::{wunderlich_curve, wunderlich_path, MAX_WUNDERLICH_LEVEL, MIN_WUNDERLICH_LEVEL};

/// Upper bound on the number of cells a lace or stamp generator may emit.
pub const MAX_GENERATED_CELLS: u64 = 16_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PatternError {
    #[error("{kind} level {level} out of range {min}..={max}")]
    Level { kind: &'static str, level: i64, min: u32, max: u32 },
    #[error("invalid {kind} parameters: {reason}")]
    Spec { kind: &'static str, reason: String },
    #[error("unknown pentomino `{0}` (expected one of FILNPTUVWXYZ)")]
    UnknownPentomino(String),
    #[error("artifact bounding box {needed} does not fit the requested space {available}")]
    Overflow { needed: String, available: String },
    #[error(transparent)]
    Space(#[from] SpaceError),
}

pub(crate) fn check_level(kind: &'static str, level: i64, min: u32, max: u32) -> Result<u32, PatternError> {
    if level < i64::from(min) || level > i64::from(max) {
        return Err(PatternError::Level { kind, level, min, max });
    }
    Ok(level as u32)
}

pub(crate) fn spec_error(kind: &'static str, reason: impl Into<String>) -> PatternError {
    PatternError::Spec { kind, reason: reason.into() }
}

/// Smallest box containing every cell, or `None` for an empty set.
pub fn bounding_box<C: Cell>(cells: impl IntoIterator<Item = C>) -> Option<CellBox<C>> {
    let mut iter = cells.into_iter();
    let first = iter.next()?;
    let (lo, hi) = iter.fold((first, first), |(lo, hi), c| {
        (C::from_axes(|i| lo.axis(i).min(c.axis(i))), C::from_axes(|i| hi.axis(i).max(c.axis(i))))
    });
    Some(CellBox::inclusive(lo, hi))
}

/// Paints `cells` into a space sized to fit them exactly (cells are
/// expected to be non-negative already).
pub(crate) fn space_from_cells<C: Cell>(
    cells: &BTreeSet<C>,
    brick: &BrickName,
) -> Result<Space<C>, PatternError> {
    let hi = bounding_box(cells.iter().copied()).map_or_else(|| C::from_axes(|_| 1), |b| b.hi);
    let dims = C::Dims::try_from_axes(|i| hi.axis(i).max(1))?;
    let mut space = Space::new(dims);
    for &c in cells {
        space.put_cell(c, brick)?;
    }
    Ok(space)
}

/// Translates a cell set so its minimum corner sits at the origin.
pub(crate) fn normalize<C: Cell>(cells: BTreeSet<C>) -> BTreeSet<C> {
    match bounding_box(cells.iter().copied()) {
        Some(b) => cells.into_iter().map(|c| C::from_axes(|i| c.axis(i) - b.lo.axis(i))).collect(),
        None => cells,
    }
}

/// An `n × n` board alternating `even` and `odd` by coordinate parity.
pub fn checkerboard(n: i64, even: &BrickName, odd: &BrickName) -> Result<Space<Coord2>, PatternError> {
    let mut space = Space::<Coord2>::build(n, n)?;
    space.traverse_within::<SpaceError, _>(Coord2::new(0, 0), Coord2::new(n - 1, n - 1), |c| {
        Ok(Some(if (c.x + c.y).rem_euclid(2) == 0 { even.clone() } else { odd.clone() }))
    })?;
    Ok(space)
}
