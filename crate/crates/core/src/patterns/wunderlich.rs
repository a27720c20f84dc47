//! Serpentine Peano curve through a `3^n` cube.
//!
//! The curve index is written in base 3 with `3n` digits, most significant
//! first, and the digits are dealt to the axes x, y, z in turn. A digit is
//! reflected (`d -> 2 - d`) when the digits already dealt to the *other*
//! axes sum to an odd number. The reflections are what make each sub-cube
//! enter where the previous one left off, so consecutive cells always share
//! a face.

use super::{check_level, PatternError};
use crate::palette::BrickName;
use crate::space::{Coord3, Dim3, Space3D};

pub const MIN_WUNDERLICH_LEVEL: u32 = 1;
pub const MAX_WUNDERLICH_LEVEL: u32 = 4;

fn cell_at(index: u64, level: u32) -> Coord3 {
    let digits = 3 * level;
    let mut axis_sum = [0u64; 3];
    let mut coord = [0i64; 3];
    for p in 0..digits {
        let digit = (index / 3u64.pow(digits - 1 - p)) % 3;
        let axis = (p % 3) as usize;
        let others: u64 = axis_sum.iter().sum::<u64>() - axis_sum[axis];
        let d = if others % 2 == 1 { 2 - digit } else { digit };
        coord[axis] = coord[axis] * 3 + d as i64;
        axis_sum[axis] += digit;
    }
    Coord3::new(coord[0], coord[1], coord[2])
}

/// Ordered Hamiltonian path through every cell of the `3^level` cube.
pub fn wunderlich_path(level: i64) -> Result<Vec<Coord3>, PatternError> {
    let level = check_level("wunderlich", level, MIN_WUNDERLICH_LEVEL, MAX_WUNDERLICH_LEVEL)?;
    let cells = 27u64.pow(level);
    Ok((0..cells).map(|i| cell_at(i, level)).collect())
}

pub fn wunderlich_curve(level: i64, brick: &BrickName) -> Result<(Vec<Coord3>, Space3D), PatternError> {
    let path = wunderlich_path(level)?;
    let side = 3i64.pow(level as u32);
    let mut space = Space3D::new(Dim3::new(side, side, side)?);
    for &c in &path {
        space.put_cell(c, brick)?;
    }
    Ok((path, space))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn face_adjacent(a: Coord3, b: Coord3) -> bool {
        (a.x - b.x).abs() + (a.y - b.y).abs() + (a.z - b.z).abs() == 1
    }

    #[test]
    fn hamiltonian_levels_one_and_two() {
        for (level, n) in [(1, 27usize), (2, 729)] {
            let path = wunderlich_path(level).unwrap();
            assert_eq!(path.len(), n);
            let side = 3i64.pow(level as u32);
            let distinct: HashSet<_> = path.iter().copied().collect();
            assert_eq!(distinct.len(), n);
            assert!(path.iter().all(|c| [c.x, c.y, c.z].iter().all(|v| (0..side).contains(v))));
            assert!(path.windows(2).all(|w| face_adjacent(w[0], w[1])));
        }
    }

    #[test]
    fn level_three_is_connected() {
        let path = wunderlich_path(3).unwrap();
        assert_eq!(path.len(), 19_683);
        assert!(path.windows(2).all(|w| face_adjacent(w[0], w[1])));
    }

    #[test]
    fn starts_at_origin() {
        assert_eq!(wunderlich_path(2).unwrap()[0], Coord3::new(0, 0, 0));
    }

    #[test]
    fn curve_marks_every_cell() {
        let (path, space) = wunderlich_curve(1, &BrickName::from("BLUE")).unwrap();
        assert_eq!(space.len(), path.len());
    }

    #[test]
    fn level_range() {
        assert!(matches!(wunderlich_path(0), Err(PatternError::Level { .. })));
        assert!(matches!(wunderlich_path(5), Err(PatternError::Level { .. })));
    }
}
