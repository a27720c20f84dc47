//! Voxel artifact construction.
//!
//! Artifacts live in bounded 2D or 3D [`space`]s of unit bricks. They are
//! produced by programs in a small ML-style language ([`dsl`]) or by the
//! built-in [`patterns`] generators, and serialized by [`export`] to LDraw,
//! STL, binvox, or Minecraft command lists that [`mc_client`] can replay
//! against a live world.

pub mod dsl;
pub mod export;
pub mod mc_client;
pub mod palette;
pub mod patterns;
pub mod space;

pub use export::{Artifact, ExportError, VoxelSource};
pub use palette::{BrickDef, BrickName, McBlock, MappingOverride, Palette, PaletteError};
pub use space::{Coord2, Coord3, Dim2, Dim3, Region2, Region3, Space2D, Space3D, SpaceError};
