//! Serialization of artifacts.
//!
//! Every exporter reads voxels through [`VoxelSource`], which presents 2D
//! spaces as a one-cell-thick slab: `(x, y)` in 2D becomes `(x, 0, y)`.

pub mod binvox;
pub mod ldraw;
pub mod minecraft;
pub mod stl;

use thiserror::Error;

use crate::palette::{BrickName, PaletteError};
use crate::space::{Coord3, Dim3, Space2D, Space3D};

pub use binvox::{from_binvox, to_binvox, BinvoxError, BinvoxGrid, MAX_BINVOX_SIDE};
pub use ldraw::{to_ldraw, LDrawExport, LDRAW_SOFT_LIMIT};
pub use minecraft::{build_commands, erase_commands, CommandList, McCommand, McPlacement, MC_MAX_PIECES};
pub use stl::{stl_triangles, to_stl, StlMode, Triangle};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExportError {
    #[error(transparent)]
    Palette(#[from] PaletteError),
    #[error("cannot export an empty model")]
    EmptyModel,
    #[error("{format} export supports at most {limit} {unit}, artifact needs {needed}")]
    Capacity { format: &'static str, needed: u64, limit: u64, unit: &'static str },
    #[error("bounding box corner {lo} exceeds {hi}")]
    BoundingBox { lo: Coord3, hi: Coord3 },
}

/// Read access to an artifact's occupied cells in 3D coordinates.
pub trait VoxelSource {
    fn extent(&self) -> Dim3;

    fn voxel_count(&self) -> usize;

    /// Occupied cells in lexicographic coordinate order.
    fn voxels(&self) -> Box<dyn Iterator<Item = (Coord3, &BrickName)> + '_>;
}

impl VoxelSource for Space3D {
    fn extent(&self) -> Dim3 {
        self.dims()
    }

    fn voxel_count(&self) -> usize {
        self.len()
    }

    fn voxels(&self) -> Box<dyn Iterator<Item = (Coord3, &BrickName)> + '_> {
        Box::new(self.iter())
    }
}

impl VoxelSource for Space2D {
    fn extent(&self) -> Dim3 {
        let d = self.dims();
        Dim3::new(i64::from(d.width()), 1, i64::from(d.depth())).expect("2D dims are positive")
    }

    fn voxel_count(&self) -> usize {
        self.len()
    }

    fn voxels(&self) -> Box<dyn Iterator<Item = (Coord3, &BrickName)> + '_> {
        Box::new(self.iter().map(|(c, b)| (Coord3::new(c.x, 0, c.y), b)))
    }
}

/// The product of evaluating a program: either kind of space.
#[derive(Debug, Clone, PartialEq)]
pub enum Artifact {
    Flat(Space2D),
    Solid(Space3D),
}

impl Artifact {
    pub fn is_flat(&self) -> bool {
        matches!(self, Self::Flat(_))
    }

    fn source(&self) -> &dyn VoxelSource {
        match self {
            Self::Flat(s) => s,
            Self::Solid(s) => s,
        }
    }

    /// Inclusive bounds of the occupied cells, if any.
    pub fn occupied_bounds(&self) -> Option<(Coord3, Coord3)> {
        crate::patterns::bounding_box(self.voxels().map(|(c, _)| c))
            .map(|b| (b.lo, Coord3::new(b.hi.x - 1, b.hi.y - 1, b.hi.z - 1)))
    }
}

impl VoxelSource for Artifact {
    fn extent(&self) -> Dim3 {
        self.source().extent()
    }

    fn voxel_count(&self) -> usize {
        self.source().voxel_count()
    }

    fn voxels(&self) -> Box<dyn Iterator<Item = (Coord3, &BrickName)> + '_> {
        self.source().voxels()
    }
}

impl From<Space2D> for Artifact {
    fn from(s: Space2D) -> Self {
        Self::Flat(s)
    }
}

impl From<Space3D> for Artifact {
    fn from(s: Space3D) -> Self {
        Self::Solid(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::Coord2;

    #[test]
    fn flat_spaces_embed_as_slab() {
        let mut s = Space2D::build(5, 7).unwrap();
        s.put_cell(Coord2::new(3, 4), &BrickName::from("RED")).unwrap();
        assert_eq!(s.extent(), Dim3::new(5, 1, 7).unwrap());
        let v: Vec<_> = s.voxels().map(|(c, _)| c).collect();
        assert_eq!(v, vec![Coord3::new(3, 0, 4)]);
        let a = Artifact::from(s);
        assert_eq!(a.occupied_bounds(), Some((Coord3::new(3, 0, 4), Coord3::new(3, 0, 4))));
    }
}
