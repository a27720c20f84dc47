//! binvox run-length encoded voxel files.
//!
//! Voxels are linearized with y varying fastest, then z, then x, and stored
//! as `(value, count)` byte pairs with `count` in `1..=255`.

use std::collections::BTreeSet;

use thiserror::Error;

use super::{ExportError, VoxelSource};
use crate::space::Coord3;

pub const MAX_BINVOX_SIDE: u32 = 1024;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BinvoxError {
    #[error("bad header: {0}")]
    Header(String),
    #[error("voxel data ends after {decoded} of {expected} voxels")]
    Underflow { decoded: u64, expected: u64 },
    #[error("voxel data runs past the {expected} voxels declared")]
    Overflow { expected: u64 },
    #[error("invalid run at byte {offset}: {reason}")]
    Run { offset: usize, reason: &'static str },
}

/// Occupancy read back from a binvox file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinvoxGrid {
    /// The three values of the `dim` header line.
    pub dims: [u64; 3],
    pub occupied: BTreeSet<Coord3>,
}

fn push_runs(out: &mut Vec<u8>, value: u8, mut count: u64) {
    while count > 0 {
        let n = count.min(255);
        out.push(value);
        out.push(n as u8);
        count -= n;
    }
}

pub fn to_binvox<S: VoxelSource + ?Sized>(space: &S) -> Result<Vec<u8>, ExportError> {
    let side = space.extent().max_side();
    if side > MAX_BINVOX_SIDE {
        return Err(ExportError::Capacity {
            format: "binvox",
            needed: u64::from(side),
            limit: u64::from(MAX_BINVOX_SIDE),
            unit: "cells per side",
        });
    }
    let d = u64::from(side);
    let mut indices: Vec<u64> =
        space.voxels().map(|(c, _)| c.x as u64 * d * d + c.z as u64 * d + c.y as u64).collect();
    indices.sort_unstable();

    let mut out = format!("#binvox 1\ndim {side} {side} {side}\ntranslate 0 0 0\nscale 1\ndata\n").into_bytes();
    let mut cursor = 0u64;
    let mut i = 0;
    while i < indices.len() {
        let start = indices[i];
        let mut end = start + 1;
        i += 1;
        while i < indices.len() && indices[i] == end {
            end += 1;
            i += 1;
        }
        push_runs(&mut out, 0, start - cursor);
        push_runs(&mut out, 1, end - start);
        cursor = end;
    }
    push_runs(&mut out, 0, d * d * d - cursor);
    Ok(out)
}

fn header_line<'a>(bytes: &'a [u8], pos: &mut usize) -> Result<&'a str, BinvoxError> {
    let rest = &bytes[*pos..];
    let len = rest.iter().position(|&b| b == b'\n').ok_or_else(|| BinvoxError::Header("missing data line".into()))?;
    *pos += len + 1;
    let line = std::str::from_utf8(&rest[..len]).map_err(|_| BinvoxError::Header("header is not text".into()))?;
    Ok(line.trim_end_matches('\r'))
}

pub fn from_binvox(bytes: &[u8]) -> Result<BinvoxGrid, BinvoxError> {
    let mut pos = 0;
    let magic = header_line(bytes, &mut pos)?;
    let version = magic.strip_prefix("#binvox ").ok_or_else(|| BinvoxError::Header(format!("bad magic `{magic}`")))?;
    version.trim().parse::<u32>().map_err(|_| BinvoxError::Header(format!("bad version `{version}`")))?;

    let mut dims = None;
    loop {
        let line = header_line(bytes, &mut pos)?;
        let mut words = line.split_whitespace();
        match words.next() {
            Some("data") => break,
            Some("dim") => {
                let values: Vec<u64> = words
                    .map(|w| w.parse().map_err(|_| BinvoxError::Header(format!("bad dim `{line}`"))))
                    .collect::<Result<_, _>>()?;
                let [a, b, c] = values[..] else {
                    return Err(BinvoxError::Header(format!("bad dim `{line}`")));
                };
                if [a, b, c].iter().any(|&v| v == 0 || v > u64::from(MAX_BINVOX_SIDE)) {
                    return Err(BinvoxError::Header(format!("dim out of range `{line}`")));
                }
                dims = Some([a, b, c]);
            }
            Some("translate") | Some("scale") => {}
            _ => return Err(BinvoxError::Header(format!("unexpected line `{line}`"))),
        }
    }
    let dims = dims.ok_or_else(|| BinvoxError::Header("missing dim line".into()))?;
    let [_, h, w] = dims;
    let expected = dims.iter().product::<u64>();

    let data = &bytes[pos..];
    let mut occupied = BTreeSet::new();
    let mut index = 0u64;
    for (k, pair) in data.chunks_exact(2).enumerate() {
        let (value, count) = (pair[0], u64::from(pair[1]));
        if count == 0 {
            return Err(BinvoxError::Run { offset: pos + 2 * k + 1, reason: "zero-length run" });
        }
        if value > 1 {
            return Err(BinvoxError::Run { offset: pos + 2 * k, reason: "voxel value must be 0 or 1" });
        }
        if index + count > expected {
            return Err(BinvoxError::Overflow { expected });
        }
        if value == 1 {
            for i in index..index + count {
                let (x, rem) = (i / (w * h), i % (w * h));
                occupied.insert(Coord3::new(x as i64, (rem % w) as i64, (rem / w) as i64));
            }
        }
        index += count;
    }
    if index < expected {
        return Err(BinvoxError::Underflow { decoded: index, expected });
    }
    if !data.len().is_multiple_of(2) {
        return Err(BinvoxError::Overflow { expected });
    }
    Ok(BinvoxGrid { dims, occupied })
}

/// Run-length pairs of an encoded file, for inspecting the data section.
pub fn runs(bytes: &[u8]) -> Result<Vec<(u8, u8)>, BinvoxError> {
    let mut pos = 0;
    loop {
        if header_line(bytes, &mut pos)? == "data" {
            break;
        }
    }
    Ok(bytes[pos..].chunks_exact(2).map(|p| (p[0], p[1])).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::palette::BrickName;
    use crate::space::{Dim3, Space3D};

    fn filled(dims: (i64, i64, i64), cells: &[(i64, i64, i64)]) -> Space3D {
        let mut s = Space3D::new(Dim3::new(dims.0, dims.1, dims.2).unwrap());
        for &c in cells {
            s.put_cell(Coord3::from(c), &BrickName::from("RED")).unwrap();
        }
        s
    }

    #[test]
    fn empty_cube_is_one_zero_run() {
        let bytes = to_binvox(&filled((2, 2, 2), &[])).unwrap();
        assert!(bytes.starts_with(b"#binvox 1\ndim 2 2 2\ntranslate 0 0 0\nscale 1\ndata\n"));
        assert_eq!(runs(&bytes).unwrap(), vec![(0, 8)]);
    }

    #[test]
    fn single_full_voxel() {
        let bytes = to_binvox(&filled((1, 1, 1), &[(0, 0, 0)])).unwrap();
        assert_eq!(runs(&bytes).unwrap(), vec![(1, 1)]);
    }

    #[test]
    fn y_varies_fastest() {
        // (0,1,0) is linear index 1; (0,0,1) is index 2 in a 2-cube.
        let bytes = to_binvox(&filled((2, 2, 2), &[(0, 1, 0)])).unwrap();
        assert_eq!(runs(&bytes).unwrap(), vec![(0, 1), (1, 1), (0, 6)]);
        let bytes = to_binvox(&filled((2, 2, 2), &[(0, 0, 1)])).unwrap();
        assert_eq!(runs(&bytes).unwrap(), vec![(0, 2), (1, 1), (0, 5)]);
    }

    #[test]
    fn long_runs_split_at_255() {
        let bytes = to_binvox(&filled((7, 7, 7), &[])).unwrap();
        assert_eq!(runs(&bytes).unwrap(), vec![(0, 255), (0, 88)]);
    }

    #[test]
    fn non_cubic_spaces_are_padded() {
        let s = filled((3, 1, 2), &[(2, 0, 1)]);
        let grid = from_binvox(&to_binvox(&s).unwrap()).unwrap();
        assert_eq!(grid.dims, [3, 3, 3]);
        assert_eq!(grid.occupied, BTreeSet::from([Coord3::new(2, 0, 1)]));
    }

    #[test]
    fn truncated_data_underflows() {
        let mut bytes = to_binvox(&filled((4, 4, 4), &[(1, 1, 1)])).unwrap();
        bytes.truncate(bytes.len() - 2);
        assert!(matches!(from_binvox(&bytes), Err(BinvoxError::Underflow { .. })));
        bytes.pop();
        assert!(matches!(from_binvox(&bytes), Err(BinvoxError::Underflow { .. })));
    }

    #[test]
    fn extra_data_overflows() {
        let mut bytes = to_binvox(&filled((2, 2, 2), &[])).unwrap();
        bytes.extend_from_slice(&[1, 1]);
        assert_eq!(from_binvox(&bytes), Err(BinvoxError::Overflow { expected: 8 }));
    }

    #[test]
    fn bad_headers() {
        assert!(matches!(from_binvox(b"#voxbin 1\ndim 1 1 1\ndata\n\x01\x01"), Err(BinvoxError::Header(_))));
        assert!(matches!(from_binvox(b"#binvox 1\ndata\n\x01\x01"), Err(BinvoxError::Header(_))));
        assert!(matches!(from_binvox(b"#binvox 1\ndim 1 1\ndata\n"), Err(BinvoxError::Header(_))));
        assert!(matches!(from_binvox(b"#binvox 1\nbogus\ndata\n"), Err(BinvoxError::Header(_))));
        assert!(matches!(from_binvox(b"#binvox 1\ndim 1 1 1\n"), Err(BinvoxError::Header(_))));
    }

    #[test]
    fn oversized_side_is_rejected() {
        let s = Space3D::new(Dim3::new(1025, 1, 1).unwrap());
        assert!(matches!(to_binvox(&s), Err(ExportError::Capacity { format: "binvox", .. })));
    }
}
