use std::fmt::Write;

use super::{ExportError, VoxelSource};
use crate::palette::Palette;

/// Brick count above which LDraw viewers become unreliable.
pub const LDRAW_SOFT_LIMIT: usize = 250_000;

// A 1x1 brick spans 20 LDU horizontally and 24 LDU vertically; LDraw -y is up.
const LDU_HORIZONTAL: i64 = 20;
const LDU_VERTICAL: i64 = -24;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LDrawExport {
    pub text: String,
    pub warnings: Vec<String>,
}

/// One type-1 part line per occupied cell, in coordinate order.
pub fn to_ldraw<S: VoxelSource + ?Sized>(space: &S, palette: &Palette) -> Result<LDrawExport, ExportError> {
    let mut warnings = Vec::new();
    let count = space.voxel_count();
    if count > LDRAW_SOFT_LIMIT {
        warnings.push(format!("{count} bricks exceeds the {LDRAW_SOFT_LIMIT} that LDraw viewers handle well"));
    }
    let mut text = String::with_capacity(64 * (count + 1));
    text.push_str("0 brickforge export\n");
    for (c, brick) in space.voxels() {
        let def = palette.lookup(brick.as_str())?;
        writeln!(
            text,
            "1 {} {} {} {} 1 0 0 0 1 0 0 0 1 {}",
            def.ldraw_colour,
            LDU_HORIZONTAL * c.x,
            LDU_VERTICAL * c.y,
            LDU_HORIZONTAL * c.z,
            def.ldraw_part
        )
        .expect("writing to a String cannot fail");
    }
    Ok(LDrawExport { text, warnings })
}
