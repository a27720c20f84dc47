//! Brick definitions and the LEGO to Minecraft block mapping.
//!
//! Palette files are ASCII, one entry per line:
//!
//! ```text
//! # name,ldraw_colour,ldraw_part,mc_id,mc_data
//! RED,4,3005.dat,35,14
//! ```
//!
//! Override files remap only the Minecraft side: `NAME,mc_id,mc_data`.

use std::borrow::Borrow;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::path::{Path, PathBuf};
use std::sync::{Arc, OnceLock};

use thiserror::Error;

/// Environment variable naming a palette file that replaces the built-in one.
pub const PALETTE_ENV: &str = "BRICKFORGE_PALETTE";

/// LDraw part used for every brick: the 1x1 brick.
pub const UNIT_BRICK_PART: &str = "3005.dat";

/// Name of a brick, e.g. `RED`. Cheap to clone.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BrickName(Arc<str>);

impl BrickName {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Brick names are uppercase identifiers: `[A-Z][A-Z0-9_]*`.
    pub fn is_valid(name: &str) -> bool {
        let mut chars = name.chars();
        matches!(chars.next(), Some(c) if c.is_ascii_uppercase())
            && chars.all(|c| c.is_ascii_uppercase() || c.is_ascii_digit() || c == '_')
    }
}

impl From<&str> for BrickName {
    fn from(s: &str) -> Self {
        Self(Arc::from(s))
    }
}

impl From<String> for BrickName {
    fn from(s: String) -> Self {
        Self(Arc::from(s))
    }
}

impl Borrow<str> for BrickName {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for BrickName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct McBlock {
    pub id: u8,
    pub data: u8,
}

impl McBlock {
    pub const AIR: Self = Self { id: 0, data: 0 };

    pub fn new(id: u8, data: u8) -> Result<Self, PaletteError> {
        if data > 15 {
            return Err(PaletteError::Range { line: 0, field: "mc_data", value: i64::from(data) });
        }
        Ok(Self { id, data })
    }
}

impl fmt::Display for McBlock {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.id, self.data)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BrickDef {
    pub name: BrickName,
    pub ldraw_colour: u32,
    pub ldraw_part: String,
    pub mc: McBlock,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PaletteError {
    #[error("unknown brick `{0}`")]
    UnknownBrick(String),
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: duplicate brick `{name}`")]
    Duplicate { line: usize, name: String },
    #[error("line {line}: {field} value {value} out of range")]
    Range { line: usize, field: &'static str, value: i64 },
    #[error("palette has no entries")]
    Empty,
}

impl PaletteError {
    /// Source line the error refers to, when it came from a file.
    pub fn line(&self) -> Option<usize> {
        match self {
            Self::Syntax { line, .. } | Self::Duplicate { line, .. } | Self::Range { line, .. } => Some(*line),
            _ => None,
        }
    }
}

#[derive(Debug, Error)]
pub enum PaletteFileError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Invalid { path: PathBuf, source: PaletteError },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Palette {
    bricks: Vec<BrickDef>,
    index: HashMap<BrickName, usize>,
}

// (name, LDraw colour code, wool data value)
const DEFAULT_COLOURS: [(&str, u32, u8); 16] = [
    ("WHITE", 15, 0),
    ("ORANGE", 25, 1),
    ("MAGENTA", 26, 2),
    ("LIGHT_BLUE", 9, 3),
    ("YELLOW", 14, 4),
    ("LIME", 27, 5),
    ("PINK", 13, 6),
    ("GRAY", 8, 7),
    ("LIGHT_GRAY", 7, 8),
    ("CYAN", 3, 9),
    ("PURPLE", 22, 10),
    ("BLUE", 1, 11),
    ("BROWN", 6, 12),
    ("GREEN", 2, 13),
    ("RED", 4, 14),
    ("BLACK", 0, 15),
];

const WOOL: u8 = 35;

impl Palette {
    pub fn new(bricks: Vec<BrickDef>) -> Result<Self, PaletteError> {
        if bricks.is_empty() {
            return Err(PaletteError::Empty);
        }
        let mut index = HashMap::with_capacity(bricks.len());
        for (i, def) in bricks.iter().enumerate() {
            if index.insert(def.name.clone(), i).is_some() {
                return Err(PaletteError::Duplicate { line: i + 1, name: def.name.to_string() });
            }
        }
        Ok(Self { bricks, index })
    }

    /// The 16 wool colours, all rendered as 1x1 bricks.
    pub fn default_palette() -> Self {
        let bricks = DEFAULT_COLOURS
            .iter()
            .map(|&(name, colour, data)| BrickDef {
                name: BrickName::from(name),
                ldraw_colour: colour,
                ldraw_part: UNIT_BRICK_PART.to_owned(),
                mc: McBlock { id: WOOL, data },
            })
            .collect();
        Self::new(bricks).expect("built-in palette is well formed")
    }

    pub fn shared_default() -> Arc<Self> {
        static DEFAULT: OnceLock<Arc<Palette>> = OnceLock::new();
        DEFAULT.get_or_init(|| Arc::new(Self::default_palette())).clone()
    }

    pub fn lookup(&self, name: &str) -> Result<&BrickDef, PaletteError> {
        self.index
            .get(name)
            .map(|&i| &self.bricks[i])
            .ok_or_else(|| PaletteError::UnknownBrick(name.to_owned()))
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index.contains_key(name)
    }

    pub fn bricks(&self) -> &[BrickDef] {
        &self.bricks
    }

    pub fn len(&self) -> usize {
        self.bricks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bricks.is_empty()
    }

    pub fn parse(text: &str) -> Result<Self, PaletteError> {
        let mut bricks = Vec::new();
        let mut seen = HashMap::new();
        for (line, fields) in records(text) {
            let [name, colour, part, id, data] = fields_n::<5>(line, &fields)?;
            let name = parse_name(line, name)?;
            if seen.insert(name.clone(), line).is_some() {
                return Err(PaletteError::Duplicate { line, name: name.to_string() });
            }
            let ldraw_colour = parse_int(line, "ldraw_colour", colour, 0, i64::from(u32::MAX))? as u32;
            if part.is_empty() || !part.is_ascii() {
                return Err(PaletteError::Syntax { line, message: "ldraw_part must be a non-empty file name".into() });
            }
            let mc = parse_block(line, id, data)?;
            bricks.push(BrickDef { name, ldraw_colour, ldraw_part: part.to_owned(), mc });
        }
        Self::new(bricks)
    }

    pub fn render(&self) -> String {
        let mut out = String::from("# name,ldraw_colour,ldraw_part,mc_id,mc_data\n");
        for b in &self.bricks {
            out.push_str(&format!("{},{},{},{},{}\n", b.name, b.ldraw_colour, b.ldraw_part, b.mc.id, b.mc.data));
        }
        out
    }

    pub fn load(path: &Path) -> Result<Self, PaletteFileError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| PaletteFileError::Io { path: path.to_owned(), source })?;
        Self::parse(&text).map_err(|source| PaletteFileError::Invalid { path: path.to_owned(), source })
    }

    /// The palette named by `BRICKFORGE_PALETTE`, or the built-in one.
    pub fn from_env() -> Result<Self, PaletteFileError> {
        match std::env::var_os(PALETTE_ENV) {
            Some(path) if !path.is_empty() => Self::load(Path::new(&path)),
            _ => Ok(Self::default_palette()),
        }
    }

    /// Minecraft block for `brick`; an override entry wins over the palette default.
    pub fn resolve_mc(&self, brick: &str, mapping: Option<&MappingOverride>) -> Result<McBlock, PaletteError> {
        let def = self.lookup(brick)?;
        Ok(mapping.and_then(|m| m.get(brick)).unwrap_or(def.mc))
    }
}

impl Default for Palette {
    fn default() -> Self {
        Self::default_palette()
    }
}

/// Per-brick replacement of the Minecraft block a LEGO brick maps to.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MappingOverride {
    entries: BTreeMap<BrickName, McBlock>,
}

impl MappingOverride {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, palette: &Palette, brick: &str, block: McBlock) -> Result<(), PaletteError> {
        let def = palette.lookup(brick)?;
        self.entries.insert(def.name.clone(), block);
        Ok(())
    }

    pub fn get(&self, brick: &str) -> Option<McBlock> {
        self.entries.get(brick).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Parses `NAME,mc_id,mc_data` lines; every name must exist in `palette`.
    pub fn parse(text: &str, palette: &Palette) -> Result<Self, PaletteError> {
        let mut out = Self::new();
        for (line, fields) in records(text) {
            let [name, id, data] = fields_n::<3>(line, &fields)?;
            let name = parse_name(line, name)?;
            if !palette.contains(name.as_str()) {
                return Err(PaletteError::Syntax { line, message: format!("unknown brick `{name}`") });
            }
            if out.entries.contains_key(&name) {
                return Err(PaletteError::Duplicate { line, name: name.to_string() });
            }
            out.entries.insert(name, parse_block(line, id, data)?);
        }
        Ok(out)
    }

    pub fn load(path: &Path, palette: &Palette) -> Result<Self, PaletteFileError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| PaletteFileError::Io { path: path.to_owned(), source })?;
        Self::parse(&text, palette).map_err(|source| PaletteFileError::Invalid { path: path.to_owned(), source })
    }
}

/// Non-comment, non-blank lines split on commas, with 1-based line numbers.
fn records(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.split('\n').enumerate().filter_map(|(i, raw)| {
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        if line.is_empty() || line.starts_with('#') {
            None
        } else {
            Some((i + 1, line.split(',').collect()))
        }
    })
}

fn fields_n<'a, const N: usize>(line: usize, fields: &[&'a str]) -> Result<[&'a str; N], PaletteError> {
    if let Some(f) = fields.iter().find(|f| f.chars().any(char::is_whitespace)) {
        return Err(PaletteError::Syntax { line, message: format!("whitespace in field `{f}`") });
    }
    <[&str; N]>::try_from(fields)
        .map_err(|_| PaletteError::Syntax { line, message: format!("expected {N} fields, found {}", fields.len()) })
}

fn parse_name(line: usize, name: &str) -> Result<BrickName, PaletteError> {
    if !BrickName::is_valid(name) || name == "EMPTY" {
        return Err(PaletteError::Syntax { line, message: format!("invalid brick name `{name}`") });
    }
    Ok(BrickName::from(name))
}

fn parse_int(line: usize, field: &'static str, s: &str, min: i64, max: i64) -> Result<i64, PaletteError> {
    let looks_numeric = !s.is_empty() && s.strip_prefix('-').unwrap_or(s).bytes().all(|b| b.is_ascii_digit());
    if !looks_numeric {
        return Err(PaletteError::Syntax { line, message: format!("{field} is not an integer: `{s}`") });
    }
    let value: i64 = s.parse().map_err(|_| PaletteError::Range { line, field, value: i64::MAX })?;
    if !(min..=max).contains(&value) {
        return Err(PaletteError::Range { line, field, value });
    }
    Ok(value)
}

fn parse_block(line: usize, id: &str, data: &str) -> Result<McBlock, PaletteError> {
    let id = parse_int(line, "mc_id", id, 0, 255)? as u8;
    let data = parse_int(line, "mc_data", data, 0, 15)? as u8;
    Ok(McBlock { id, data })
}
