//! Arithmetic (constant-size) and geometric (lace) stamping patterns.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use super::{bounding_box, normalize, space_from_cells, spec_error, PatternError, MAX_GENERATED_CELLS};
use crate::palette::BrickName;
use crate::space::{CellBox, Coord2, Space2D};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    N,
    S,
    E,
    W,
    NE,
    NW,
    SE,
    SW,
}

impl Direction {
    pub const ALL: [Direction; 8] = [Self::N, Self::S, Self::E, Self::W, Self::NE, Self::NW, Self::SE, Self::SW];

    /// Unit step; north is +y.
    pub fn step(self) -> (i64, i64) {
        match self {
            Self::N => (0, 1),
            Self::S => (0, -1),
            Self::E => (1, 0),
            Self::W => (-1, 0),
            Self::NE => (1, 1),
            Self::NW => (-1, 1),
            Self::SE => (1, -1),
            Self::SW => (-1, -1),
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl FromStr for Direction {
    type Err = PatternError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|d| d.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| spec_error("lace", format!("unknown direction `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaceSpec {
    pub seed: BTreeSet<Coord2>,
    pub anchors: Vec<Direction>,
    pub growth: u32,
    pub depth: u32,
}

/// One scaled copy of the seed placed during growth step `step`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Stamp {
    pub step: u32,
    pub direction: Direction,
    pub bounds: CellBox<Coord2>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaceLayout {
    pub cells: BTreeSet<Coord2>,
    /// Stamps in placement order; the seed itself is not listed.
    pub stamps: Vec<Stamp>,
}

fn is_8_connected(cells: &BTreeSet<Coord2>) -> bool {
    let Some(&start) = cells.iter().next() else { return true };
    let mut seen = BTreeSet::from([start]);
    let mut stack = vec![start];
    while let Some(c) = stack.pop() {
        for dx in -1..=1 {
            for dy in -1..=1 {
                let n = Coord2::new(c.x + dx, c.y + dy);
                if cells.contains(&n) && seen.insert(n) {
                    stack.push(n);
                }
            }
        }
    }
    seen.len() == cells.len()
}

impl LaceSpec {
    fn validate(&self) -> Result<(), PatternError> {
        if self.seed.is_empty() {
            return Err(spec_error("lace", "seed is empty"));
        }
        if self.seed.iter().any(|c| c.x < 0 || c.y < 0) {
            return Err(spec_error("lace", "seed cells must be non-negative"));
        }
        if !is_8_connected(&self.seed) {
            return Err(spec_error("lace", "seed must be 8-connected"));
        }
        if self.anchors.is_empty() {
            return Err(spec_error("lace", "at least one anchor direction is required"));
        }
        if self.growth < 2 {
            return Err(spec_error("lace", "growth must be at least 2"));
        }
        let anchors = self.anchors.iter().collect::<BTreeSet<_>>().len() as u64;
        let mut total = self.seed.len() as u64;
        for k in 1..=self.depth {
            let per_stamp = u64::from(self.growth)
                .checked_pow(2 * k)
                .and_then(|a| a.checked_mul(self.seed.len() as u64 * anchors));
            total = match per_stamp.and_then(|a| total.checked_add(a)) {
                Some(t) if t <= MAX_GENERATED_CELLS => t,
                _ => return Err(spec_error("lace", format!("more than {MAX_GENERATED_CELLS} cells"))),
            };
        }
        Ok(())
    }
}

/// The cell that is furthest along (or, with `furthest == false`, least far
/// along) `dir`, choosing the median of any ties across the direction.
fn extremal(cells: &BTreeSet<Coord2>, dir: Direction, furthest: bool) -> Coord2 {
    let (sx, sy) = dir.step();
    let score = |c: &Coord2| sx * c.x + sy * c.y;
    let best = if furthest { cells.iter().map(score).max() } else { cells.iter().map(score).min() }
        .expect("non-empty cell set");
    let mut ties: Vec<Coord2> = cells.iter().copied().filter(|c| score(c) == best).collect();
    ties.sort_by_key(|c| (sx * c.y - sy * c.x, c.x, c.y));
    ties[(ties.len() - 1) / 2]
}

fn scaled(seed: &BTreeSet<Coord2>, scale: i64) -> BTreeSet<Coord2> {
    seed.iter()
        .flat_map(|c| {
            (0..scale).flat_map(move |a| (0..scale).map(move |b| Coord2::new(c.x * scale + a, c.y * scale + b)))
        })
        .collect()
}

/// Grows a lace from `spec`.
///
/// At step `k` every anchor direction receives a copy of the seed scaled by
/// `growth^k`. The copy is placed so that its least-advanced cell in that
/// direction is the diagonal (or edge) neighbour of the most-advanced cell
/// of the pattern built so far. Each copy therefore touches the pattern
/// without overlapping it, and the whole figure stays 8-connected.
pub fn lace_layout(spec: &LaceSpec) -> Result<LaceLayout, PatternError> {
    spec.validate()?;
    let seed = normalize(spec.seed.clone());
    let mut anchors = Vec::new();
    for &a in &spec.anchors {
        if !anchors.contains(&a) {
            anchors.push(a);
        }
    }
    let mut cells = spec.seed.clone();
    let mut stamps = Vec::new();
    let mut scale = 1i64;
    for step in 1..=spec.depth {
        scale *= i64::from(spec.growth);
        let copy = scaled(&seed, scale);
        let mut added = BTreeSet::new();
        for &dir in &anchors {
            let (sx, sy) = dir.step();
            let target = extremal(&cells, dir, true);
            let contact = extremal(&copy, dir, false);
            let (ox, oy) = (target.x + sx - contact.x, target.y + sy - contact.y);
            let placed: BTreeSet<Coord2> = copy.iter().map(|c| Coord2::new(c.x + ox, c.y + oy)).collect();
            let bounds = bounding_box(placed.iter().copied()).expect("non-empty stamp");
            stamps.push(Stamp { step, direction: dir, bounds });
            added.extend(placed);
        }
        cells.extend(added);
    }
    let lo = bounding_box(cells.iter().copied()).expect("non-empty lace").lo;
    let shift = |c: Coord2| Coord2::new(c.x - lo.x, c.y - lo.y);
    Ok(LaceLayout {
        cells: cells.into_iter().map(shift).collect(),
        stamps: stamps
            .into_iter()
            .map(|s| Stamp { bounds: CellBox::new(shift(s.bounds.lo), shift(s.bounds.hi)), ..s })
            .collect(),
    })
}

pub fn lace(spec: &LaceSpec, brick: &BrickName) -> Result<Space2D, PatternError> {
    space_from_cells(&lace_layout(spec)?.cells, brick)
}

/// `count` copies of `seed` at offsets `k * stride`, `k = 0..count`.
///
/// Coordinates stay as given unless a copy would land at a negative
/// coordinate, in which case the whole pattern shifts back into range.
pub fn stamp_arithmetic(
    seed: &BTreeSet<Coord2>,
    stride: (i64, i64),
    count: i64,
    brick: &BrickName,
) -> Result<Space2D, PatternError> {
    if seed.is_empty() {
        return Err(spec_error("stamp", "seed is empty"));
    }
    if stride == (0, 0) {
        return Err(spec_error("stamp", "stride must be non-zero"));
    }
    if count < 1 {
        return Err(spec_error("stamp", format!("count must be at least 1, got {count}")));
    }
    if (count as u64).saturating_mul(seed.len() as u64) > MAX_GENERATED_CELLS {
        return Err(spec_error("stamp", format!("more than {MAX_GENERATED_CELLS} cells")));
    }
    let cells: BTreeSet<Coord2> = (0..count)
        .flat_map(|k| seed.iter().map(move |c| Coord2::new(c.x + k * stride.0, c.y + k * stride.1)))
        .collect();
    let lo = bounding_box(cells.iter().copied()).expect("non-empty").lo;
    let (dx, dy) = (lo.x.min(0), lo.y.min(0));
    let cells = cells.into_iter().map(|c| Coord2::new(c.x - dx, c.y - dy)).collect();
    space_from_cells(&cells, brick)
}
