use std::collections::BTreeSet;

use super::{check_level, PatternError};
use crate::palette::BrickName;
use crate::space::{Coord3, Dim3, Space3D};

/// Level 5 is a 243-cell cube side, about 3.2 million bricks.
pub const MAX_MENGER_LEVEL: u32 = 5;

fn sponge_cells(level: u32, origin: Coord3, out: &mut BTreeSet<Coord3>) {
    if level == 0 {
        out.insert(origin);
        return;
    }
    let side = 3i64.pow(level - 1);
    for a in 0..3i64 {
        for b in 0..3i64 {
            for c in 0..3i64 {
                // Drop the six face centres and the body centre.
                let middles = [a, b, c].iter().filter(|&&d| d == 1).count();
                if middles < 2 {
                    let sub = Coord3::new(origin.x + a * side, origin.y + b * side, origin.z + c * side);
                    sponge_cells(level - 1, sub, out);
                }
            }
        }
    }
}

fn cube(level: u32) -> Result<Space3D, PatternError> {
    let side = 3i64.pow(level);
    Ok(Space3D::new(Dim3::new(side, side, side)?))
}

/// Menger sponge of the given level in a `3^level` cube: `20^level` cells.
pub fn menger_sponge(level: i64, brick: &BrickName) -> Result<Space3D, PatternError> {
    let level = check_level("menger", level, 0, MAX_MENGER_LEVEL)?;
    let mut cells = BTreeSet::new();
    sponge_cells(level, Coord3::new(0, 0, 0), &mut cells);
    let mut space = cube(level)?;
    for c in cells {
        space.put_cell(c, brick)?;
    }
    Ok(space)
}

/// Complement of the sponge within its cube: `27^level - 20^level` cells.
pub fn menger_dual(level: i64, brick: &BrickName) -> Result<Space3D, PatternError> {
    let level = check_level("menger-dual", level, 0, MAX_MENGER_LEVEL)?;
    let mut sponge = BTreeSet::new();
    sponge_cells(level, Coord3::new(0, 0, 0), &mut sponge);
    let mut space = cube(level)?;
    let dual: Vec<Coord3> = space.bounds().cells().filter(|c| !sponge.contains(c)).collect();
    for c in dual {
        space.put_cell(c, brick)?;
    }
    Ok(space)
}
