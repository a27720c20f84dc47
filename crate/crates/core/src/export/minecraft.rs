//! Minecraft Pi API command lists.
//!
//! A command list is the exact sequence of protocol lines sent to a
//! RaspberryJuice server; written to disk one per line it forms a `.mcmd`
//! file that can be replayed later.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use super::{ExportError, VoxelSource};
use crate::palette::{MappingOverride, McBlock, Palette};
use crate::space::{Coord3, Dim3};

/// Largest artifact that can be built in a live world.
pub const MC_MAX_PIECES: usize = 450_000;

/// Where an artifact lands in the world and where the player is put.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct McPlacement {
    pub world_origin: Coord3,
    pub player_pos: Coord3,
    /// Negate artifact z before offsetting.
    pub mirror_z: bool,
}

impl McPlacement {
    /// Player positioned just above an artifact of the given extent.
    pub fn above(world_origin: Coord3, extent: Dim3) -> Self {
        let player_pos = Coord3::new(world_origin.x, world_origin.y + i64::from(extent.height()) + 1, world_origin.z);
        Self { world_origin, player_pos, mirror_z: false }
    }

    pub fn to_world(&self, c: Coord3) -> Coord3 {
        let z = if self.mirror_z { -c.z } else { c.z };
        Coord3::new(self.world_origin.x + c.x, self.world_origin.y + c.y, self.world_origin.z + z)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum McCommand {
    SetPos(Coord3),
    SetBlock(Coord3, McBlock),
    SetBlocks(Coord3, Coord3, McBlock),
}

impl fmt::Display for McCommand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::SetPos(p) => write!(f, "player.setPos({},{},{})", p.x, p.y, p.z),
            Self::SetBlock(p, b) => write!(f, "world.setBlock({},{},{},{},{})", p.x, p.y, p.z, b.id, b.data),
            Self::SetBlocks(a, c, b) => {
                write!(f, "world.setBlocks({},{},{},{},{},{},{},{})", a.x, a.y, a.z, c.x, c.y, c.z, b.id, b.data)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct CommandParseError {
    pub line: usize,
    pub message: String,
}

fn args<const N: usize>(body: &str) -> Option<[i64; N]> {
    let inner = body.strip_prefix('(')?.strip_suffix(')')?;
    let parsed: Vec<i64> = inner
        .split(',')
        .map(|s| {
            let digits = s.strip_prefix('-').unwrap_or(s);
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                None
            } else {
                s.parse().ok()
            }
        })
        .collect::<Option<_>>()?;
    parsed.try_into().ok()
}

fn block(id: i64, data: i64) -> Option<McBlock> {
    McBlock::new(u8::try_from(id).ok()?, u8::try_from(data).ok()?).ok()
}

impl FromStr for McCommand {
    type Err = String;

    fn from_str(line: &str) -> Result<Self, Self::Err> {
        let bad = || format!("malformed command `{line}`");
        if let Some(rest) = line.strip_prefix("player.setPos") {
            let [x, y, z] = args::<3>(rest).ok_or_else(bad)?;
            Ok(Self::SetPos(Coord3::new(x, y, z)))
        } else if let Some(rest) = line.strip_prefix("world.setBlocks") {
            let [x1, y1, z1, x2, y2, z2, id, data] = args::<8>(rest).ok_or_else(bad)?;
            Ok(Self::SetBlocks(Coord3::new(x1, y1, z1), Coord3::new(x2, y2, z2), block(id, data).ok_or_else(bad)?))
        } else if let Some(rest) = line.strip_prefix("world.setBlock") {
            let [x, y, z, id, data] = args::<5>(rest).ok_or_else(bad)?;
            Ok(Self::SetBlock(Coord3::new(x, y, z), block(id, data).ok_or_else(bad)?))
        } else {
            Err(format!("unknown command `{line}`"))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CommandList(pub Vec<McCommand>);

impl CommandList {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &McCommand> {
        self.0.iter()
    }

    /// Contents of a `.mcmd` file: each command followed by LF.
    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(32 * self.0.len());
        for c in &self.0 {
            out.push_str(&c.to_string());
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, CommandParseError> {
        text.lines()
            .enumerate()
            .filter(|(_, l)| !l.is_empty())
            .map(|(i, l)| l.parse().map_err(|message| CommandParseError { line: i + 1, message }))
            .collect::<Result<_, _>>()
            .map(Self)
    }
}

/// One `setPos` followed by a `setBlock` per occupied cell, in cell order.
pub fn build_commands<S: VoxelSource + ?Sized>(
    space: &S,
    palette: &Palette,
    mapping: Option<&MappingOverride>,
    placement: &McPlacement,
) -> Result<CommandList, ExportError> {
    let count = space.voxel_count();
    if count > MC_MAX_PIECES {
        return Err(ExportError::Capacity {
            format: "Minecraft",
            needed: count as u64,
            limit: MC_MAX_PIECES as u64,
            unit: "pieces",
        });
    }
    let mut commands = Vec::with_capacity(count + 1);
    commands.push(McCommand::SetPos(placement.player_pos));
    for (c, brick) in space.voxels() {
        let block = palette.resolve_mc(brick.as_str(), mapping)?;
        commands.push(McCommand::SetBlock(placement.to_world(c), block));
    }
    Ok(CommandList(commands))
}

/// A single `setBlocks` filling the translated box with air.
pub fn erase_commands(lo: Coord3, hi: Coord3, placement: &McPlacement) -> Result<CommandList, ExportError> {
    if lo.x > hi.x || lo.y > hi.y || lo.z > hi.z {
        return Err(ExportError::BoundingBox { lo, hi });
    }
    let (a, b) = (placement.to_world(lo), placement.to_world(hi));
    let min = Coord3::new(a.x.min(b.x), a.y.min(b.y), a.z.min(b.z));
    let max = Coord3::new(a.x.max(b.x), a.y.max(b.y), a.z.max(b.z));
    Ok(CommandList(vec![McCommand::SetBlocks(min, max, McBlock::AIR)]))
}
