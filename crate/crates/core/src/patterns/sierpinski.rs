use std::collections::BTreeSet;

use super::{check_level, PatternError};
use crate::palette::BrickName;
use crate::space::{Coord3, Dim3, Space3D};

pub const MAX_SIERPINSKI_LEVEL: u32 = 6;

/// Level `n` has footprint side `2^(n+1) - 1`, height `2^n` and `5^n` cells.
///
/// Four copies of the previous level sit on the corners of the footprint
/// with a one-cell gap between them, and a fifth is centred on top at the
/// previous level's height.
fn pyramid_cells(level: u32) -> BTreeSet<Coord3> {
    let mut cells = BTreeSet::from([Coord3::new(0, 0, 0)]);
    for n in 1..=level {
        let prev_side = (1i64 << n) - 1;
        let prev_height = 1i64 << (n - 1);
        let step = prev_side + 1;
        let half = step / 2;
        let offsets = [
            Coord3::new(0, 0, 0),
            Coord3::new(step, 0, 0),
            Coord3::new(0, 0, step),
            Coord3::new(step, 0, step),
            Coord3::new(half, prev_height, half),
        ];
        cells = offsets
            .iter()
            .flat_map(|o| cells.iter().map(move |c| Coord3::new(c.x + o.x, c.y + o.y, c.z + o.z)))
            .collect();
    }
    cells
}

pub fn sierpinski_pyramid(level: i64, brick: &BrickName) -> Result<Space3D, PatternError> {
    let level = check_level("sierpinski", level, 0, MAX_SIERPINSKI_LEVEL)?;
    let side = (1i64 << (level + 1)) - 1;
    let height = 1i64 << level;
    let mut space = Space3D::new(Dim3::new(side, height, side)?);
    for c in pyramid_cells(level) {
        space.put_cell(c, brick)?;
    }
    Ok(space)
}
