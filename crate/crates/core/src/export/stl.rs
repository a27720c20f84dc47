//! STL output: every occupied cell is a unit cube, and faces shared by two
//! occupied cells are dropped so the result is a closed surface.

use std::collections::HashSet;
use std::fmt::Write as _;

use super::{ExportError, VoxelSource};
use crate::space::Coord3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StlMode {
    Ascii,
    Binary,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Triangle {
    pub normal: [f32; 3],
    /// Counter-clockwise when viewed from outside.
    pub vertices: [[f32; 3]; 3],
}

const HEADER: &[u8] = b"brickforge binary STL";

fn axis_unit(axis: usize) -> [i64; 3] {
    let mut u = [0; 3];
    u[axis] = 1;
    u
}

/// Two outward-facing triangles for every exposed cube face.
pub fn stl_triangles<S: VoxelSource + ?Sized>(space: &S) -> Vec<Triangle> {
    let occupied: HashSet<Coord3> = space.voxels().map(|(c, _)| c).collect();
    let mut triangles = Vec::new();
    for (cell, _) in space.voxels() {
        let base = [cell.x, cell.y, cell.z];
        for axis in 0..3 {
            for sign in [1i64, -1] {
                let mut n = base;
                n[axis] += sign;
                if occupied.contains(&Coord3::new(n[0], n[1], n[2])) {
                    continue;
                }
                // (u, v, axis) is a right-handed frame, so walking the face
                // corners (0,0) (1,0) (1,1) (0,1) winds around +axis.
                let (u, v) = ((axis + 1) % 3, (axis + 2) % 3);
                let plane = base[axis] + i64::from(sign > 0);
                let corner = |du: i64, dv: i64| {
                    let mut p = [0f32; 3];
                    p[axis] = plane as f32;
                    p[u] = (base[u] + du) as f32;
                    p[v] = (base[v] + dv) as f32;
                    p
                };
                let mut quad = [corner(0, 0), corner(1, 0), corner(1, 1), corner(0, 1)];
                if sign < 0 {
                    quad.reverse();
                }
                let normal = axis_unit(axis).map(|c| (c * sign) as f32);
                triangles.push(Triangle { normal, vertices: [quad[0], quad[1], quad[2]] });
                triangles.push(Triangle { normal, vertices: [quad[0], quad[2], quad[3]] });
            }
        }
    }
    triangles
}

pub fn to_stl<S: VoxelSource + ?Sized>(space: &S, mode: StlMode) -> Result<Vec<u8>, ExportError> {
    if space.voxel_count() == 0 {
        return Err(ExportError::EmptyModel);
    }
    let triangles = stl_triangles(space);
    Ok(match mode {
        StlMode::Binary => binary(&triangles)?,
        StlMode::Ascii => ascii(&triangles).into_bytes(),
    })
}

fn binary(triangles: &[Triangle]) -> Result<Vec<u8>, ExportError> {
    let count = u32::try_from(triangles.len()).map_err(|_| ExportError::Capacity {
        format: "STL",
        needed: triangles.len() as u64,
        limit: u64::from(u32::MAX),
        unit: "triangles",
    })?;
    let mut out = Vec::with_capacity(84 + 50 * triangles.len());
    out.extend_from_slice(HEADER);
    out.resize(80, 0);
    out.extend_from_slice(&count.to_le_bytes());
    for t in triangles {
        for f in t.normal.iter().chain(t.vertices.iter().flatten()) {
            out.extend_from_slice(&f.to_le_bytes());
        }
        out.extend_from_slice(&0u16.to_le_bytes());
    }
    Ok(out)
}

fn ascii(triangles: &[Triangle]) -> String {
    let mut out = String::from("solid brickforge\n");
    for t in triangles {
        let [nx, ny, nz] = t.normal;
        writeln!(out, "  facet normal {nx} {ny} {nz}").unwrap();
        out.push_str("    outer loop\n");
        for [x, y, z] in t.vertices {
            writeln!(out, "      vertex {x} {y} {z}").unwrap();
        }
        out.push_str("    endloop\n  endfacet\n");
    }
    out.push_str("endsolid brickforge\n");
    out
}
