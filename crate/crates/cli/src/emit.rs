use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use brickforge::dsl::ShowTarget;
use brickforge::export::{build_commands, to_binvox, to_ldraw, to_stl, McPlacement, StlMode, VoxelSource};
use brickforge::palette::{MappingOverride, Palette};
use brickforge::Coord3;
use clap::{Args, ValueEnum};

use crate::failure::{CliResult, Failure};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    Ldraw,
    StlAscii,
    StlBin,
    Binvox,
    Mcmd,
    None,
}

impl Emit {
    pub fn for_target(target: ShowTarget) -> Self {
        match target {
            ShowTarget::Show2D | ShowTarget::Show3D | ShowTarget::LDraw => Self::Ldraw,
            ShowTarget::Stl => Self::StlBin,
            ShowTarget::Binvox => Self::Binvox,
            ShowTarget::Minecraft => Self::Mcmd,
        }
    }

    pub fn extension(self) -> Option<&'static str> {
        match self {
            Self::Ldraw => Some("ldr"),
            Self::StlAscii | Self::StlBin => Some("stl"),
            Self::Binvox => Some("binvox"),
            Self::Mcmd => Some("mcmd"),
            Self::None => None,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct PlacementArgs {
    /// World coordinate of the artifact's (0,0,0) cell, as x,y,z
    #[arg(long, value_parser = parse_coord3, default_value = "0,0,0")]
    pub origin: Coord3,
    /// Player position, as x,y,z [default: just above the artifact]
    #[arg(long, value_parser = parse_coord3)]
    pub player: Option<Coord3>,
    /// Negate artifact z coordinates
    #[arg(long)]
    pub mirror_z: bool,
}

impl PlacementArgs {
    pub fn placement<S: VoxelSource + ?Sized>(&self, artifact: &S) -> McPlacement {
        let mut p = McPlacement::above(self.origin, artifact.extent());
        if let Some(player) = self.player {
            p.player_pos = player;
        }
        p.mirror_z = self.mirror_z;
        p
    }
}

pub fn parse_coord3(s: &str) -> Result<Coord3, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [x, y, z] = parts[..] else {
        return Err(format!("expected x,y,z, found `{s}`"));
    };
    let n = |t: &str| t.parse::<i64>().map_err(|_| format!("`{t}` is not an integer"));
    Ok(Coord3::new(n(x)?, n(y)?, n(z)?))
}

pub struct ExportContext<'a> {
    pub palette: &'a Palette,
    pub mapping: Option<&'a MappingOverride>,
    pub placement: &'a PlacementArgs,
}

/// Serializes `artifact` in the given format. Warnings go to stderr.
pub fn render<S: VoxelSource + ?Sized>(artifact: &S, emit: Emit, ctx: &ExportContext<'_>) -> CliResult<Vec<u8>> {
    let bytes = match emit {
        Emit::Ldraw => {
            let out = to_ldraw(artifact, ctx.palette).map_err(Failure::export)?;
            for w in &out.warnings {
                eprintln!("warning: {w}");
            }
            out.text.into_bytes()
        }
        Emit::StlAscii => to_stl(artifact, StlMode::Ascii).map_err(Failure::export)?,
        Emit::StlBin => to_stl(artifact, StlMode::Binary).map_err(Failure::export)?,
        Emit::Binvox => to_binvox(artifact).map_err(Failure::export)?,
        Emit::Mcmd => {
            let placement = ctx.placement.placement(artifact);
            build_commands(artifact, ctx.palette, ctx.mapping, &placement)
                .map_err(Failure::export)?
                .to_text()
                .into_bytes()
        }
        Emit::None => Vec::new(),
    };
    Ok(bytes)
}

/// Tracks written paths so a second write to the same file is reported.
#[derive(Default)]
pub struct Writer {
    written: BTreeSet<PathBuf>,
}

impl Writer {
    pub fn write(&mut self, path: &Path, bytes: &[u8]) -> CliResult {
        if !self.written.insert(path.to_owned()) {
            eprintln!("warning: overwriting {} written earlier in this run", path.display());
        }
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir).map_err(|e| Failure::io(dir, e))?;
        }
        std::fs::write(path, bytes).map_err(|e| Failure::io(path, e))?;
        eprintln!("wrote {} ({} bytes)", path.display(), bytes.len());
        Ok(())
    }
}
