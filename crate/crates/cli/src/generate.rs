use std::collections::BTreeSet;

use brickforge::patterns::{
    checkerboard, lace, menger_dual, menger_sponge, moebius, sierpinski_pyramid, stamp_arithmetic, wunderlich_curve,
    Direction, LaceSpec, MoebiusSpec, Pentomino,
};
use brickforge::{Artifact, BrickName, Coord2, Palette};
use clap::{Args, ValueEnum};

use crate::failure::{CliResult, Failure};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GenKind {
    Menger,
    MengerDual,
    Sierpinski,
    Wunderlich,
    Moebius,
    Lace,
    Checkerboard,
    PentominoStamp,
}

impl GenKind {
    pub fn stem(self) -> &'static str {
        match self {
            Self::Menger => "menger",
            Self::MengerDual => "menger-dual",
            Self::Sierpinski => "sierpinski",
            Self::Wunderlich => "wunderlich",
            Self::Moebius => "moebius",
            Self::Lace => "lace",
            Self::Checkerboard => "checkerboard",
            Self::PentominoStamp => "pentomino-stamp",
        }
    }
}

/// Seed shape for lace and stamp patterns: a pentomino letter or `dot`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Seed {
    Dot,
    Pentomino(Pentomino),
}

impl Seed {
    fn cells(self) -> BTreeSet<Coord2> {
        match self {
            Self::Dot => BTreeSet::from([Coord2::new(0, 0)]),
            Self::Pentomino(p) => p.cells(),
        }
    }
}

fn parse_seed(s: &str) -> Result<Seed, String> {
    if s.eq_ignore_ascii_case("dot") {
        return Ok(Seed::Dot);
    }
    s.parse().map(Seed::Pentomino).map_err(|e| e.to_string())
}

fn parse_direction(s: &str) -> Result<Direction, String> {
    s.parse().map_err(|e: brickforge::patterns::PatternError| e.to_string())
}

fn parse_stride(s: &str) -> Result<(i64, i64), String> {
    let (dx, dy) = s.split_once(',').ok_or_else(|| format!("expected dx,dy, found `{s}`"))?;
    let n = |t: &str| t.trim().parse::<i64>().map_err(|_| format!("`{t}` is not an integer"));
    Ok((n(dx)?, n(dy)?))
}

#[derive(Debug, Clone, Args)]
pub struct GenParams {
    /// Recursion level (menger, menger-dual, sierpinski, wunderlich)
    #[arg(long, allow_negative_numbers = true)]
    pub level: Option<i64>,
    /// Brick used for generated cells
    #[arg(long, default_value = "RED")]
    pub brick: String,
    /// Second brick (checkerboard odd squares)
    #[arg(long, default_value = "WHITE")]
    pub alt_brick: String,
    /// Moebius major radius
    #[arg(long, default_value_t = 12)]
    pub radius: u32,
    /// Moebius strip half width
    #[arg(long, default_value_t = 4)]
    pub width: u32,
    /// Moebius strip thickness
    #[arg(long, default_value_t = 2)]
    pub thickness: u32,
    /// Seed shape for lace and pentomino-stamp: a pentomino letter or `dot`
    #[arg(long, value_parser = parse_seed, default_value = "dot")]
    pub seed: Seed,
    /// Lace anchor directions, comma separated
    #[arg(long, value_parser = parse_direction, value_delimiter = ',', default_value = "NE")]
    pub anchors: Vec<Direction>,
    /// Lace scale factor per step
    #[arg(long, default_value_t = 2)]
    pub growth: u32,
    /// Lace step count
    #[arg(long, default_value_t = 2)]
    pub depth: u32,
    /// Checkerboard side length
    #[arg(long, default_value_t = 8, allow_negative_numbers = true)]
    pub size: i64,
    /// Offset between stamped copies, as dx,dy
    #[arg(long, value_parser = parse_stride, default_value = "4,0", allow_negative_numbers = true)]
    pub stride: (i64, i64),
    /// Number of stamped copies
    #[arg(long, default_value_t = 5, allow_negative_numbers = true)]
    pub count: i64,
}

impl GenParams {
    fn brick(&self, name: &str, palette: &Palette) -> CliResult<BrickName> {
        palette.lookup(name).map_err(Failure::invalid)?;
        Ok(BrickName::from(name))
    }

    fn level(&self, kind: GenKind) -> CliResult<i64> {
        self.level.ok_or_else(|| Failure::invalid(format!("{} needs --level", kind.stem())))
    }
}

pub fn generate(kind: GenKind, params: &GenParams, palette: &Palette) -> CliResult<Artifact> {
    let brick = params.brick(&params.brick, palette)?;
    let artifact = match kind {
        GenKind::Menger => menger_sponge(params.level(kind)?, &brick).map(Artifact::from),
        GenKind::MengerDual => menger_dual(params.level(kind)?, &brick).map(Artifact::from),
        GenKind::Sierpinski => sierpinski_pyramid(params.level(kind)?, &brick).map(Artifact::from),
        GenKind::Wunderlich => wunderlich_curve(params.level(kind)?, &brick).map(|(_, s)| Artifact::from(s)),
        GenKind::Moebius => {
            let spec = MoebiusSpec::new(params.radius, params.width, params.thickness);
            moebius(&spec, &brick).map(Artifact::from)
        }
        GenKind::Lace => {
            let spec = LaceSpec {
                seed: params.seed.cells(),
                anchors: params.anchors.clone(),
                growth: params.growth,
                depth: params.depth,
            };
            lace(&spec, &brick).map(Artifact::from)
        }
        GenKind::Checkerboard => {
            let alt = params.brick(&params.alt_brick, palette)?;
            checkerboard(params.size, &brick, &alt).map(Artifact::from)
        }
        GenKind::PentominoStamp => {
            stamp_arithmetic(&params.seed.cells(), params.stride, params.count, &brick).map(Artifact::from)
        }
    };
    artifact.map_err(Failure::invalid)
}
