//! `brickforge`: run brick programs, generate patterns, export models, and
//! build them in a Minecraft world.
//!
//! All diagnostics go to stderr; artifacts are only ever written to files.

mod emit;
mod failure;
mod generate;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Duration;

use brickforge::dsl::{self, DslError};
use brickforge::export::{build_commands, erase_commands, CommandList, McPlacement};
use brickforge::mc_client::{McConnection, McError, DEFAULT_PORT};
use brickforge::palette::PALETTE_ENV;
use brickforge::{Artifact, Coord3, MappingOverride, Palette};
use clap::{Args, Parser, Subcommand};

use emit::{parse_coord3, render, Emit, ExportContext, PlacementArgs, Writer};
use failure::{CliResult, Failure, Status};
use generate::{generate, GenKind, GenParams};

#[derive(Debug, Parser)]
#[command(name = "brickforge", version, about = "Build voxel artifacts from brick programs and pattern generators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate a brick program and export its show directives
    Run(RunArgs),
    /// Generate a pattern and export it
    Gen(GenArgs),
    /// Build or erase artifacts on a Minecraft Pi API server
    #[command(subcommand)]
    Mc(McCommand),
    /// Inspect or validate palettes
    #[command(subcommand)]
    Palette(PaletteCommand),
}

#[derive(Debug, Clone, Args)]
struct PaletteArgs {
    /// Palette file [default: $BRICKFORGE_PALETTE, else the built-in palette]
    #[arg(long)]
    palette: Option<PathBuf>,
    /// Brick to Minecraft block override file
    #[arg(long)]
    mapping: Option<PathBuf>,
}

impl PaletteArgs {
    fn load(&self) -> CliResult<(Arc<Palette>, Option<MappingOverride>)> {
        let palette = match &self.palette {
            Some(path) => Palette::load(path)?,
            None => Palette::from_env()?,
        };
        let mapping = self.mapping.as_deref().map(|p| MappingOverride::load(p, &palette)).transpose()?;
        Ok((Arc::new(palette), mapping))
    }
}

#[derive(Debug, Clone, Args)]
struct OutputArgs {
    /// Output format; overrides the program's show directives
    #[arg(long, value_enum)]
    emit: Option<Emit>,
    /// Output file (only when exactly one file is produced)
    #[arg(long, conflicts_with = "out_dir")]
    out: Option<PathBuf>,
    /// Directory for output files named after each artifact
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

impl OutputArgs {
    fn path_for(&self, stem: &str, emit: Emit, total: usize) -> CliResult<Option<PathBuf>> {
        let Some(ext) = emit.extension() else {
            return Ok(None);
        };
        if let Some(out) = &self.out {
            if total > 1 {
                return Err(Failure::invalid(format!(
                    "--out names a single file but {total} outputs were requested; use --out-dir"
                )));
            }
            return Ok(Some(out.clone()));
        }
        let dir = self.out_dir.clone().unwrap_or_else(|| PathBuf::from("."));
        Ok(Some(dir.join(format!("{}.{ext}", file_stem(stem)))))
    }
}

/// Artifact names become file names; anything outside a safe set is replaced.
fn file_stem(name: &str) -> String {
    let stem: String =
        name.chars().map(|c| if c.is_ascii_alphanumeric() || "-_.".contains(c) { c } else { '_' }).collect();
    if stem.is_empty() || stem.chars().all(|c| c == '.') {
        "artifact".into()
    } else {
        stem
    }
}

#[derive(Debug, Args)]
struct RunArgs {
    /// Brick program (.bl)
    file: PathBuf,
    #[command(flatten)]
    output: OutputArgs,
    #[command(flatten)]
    palette: PaletteArgs,
    #[command(flatten)]
    placement: PlacementArgs,
}

#[derive(Debug, Args)]
struct GenArgs {
    kind: GenKind,
    #[command(flatten)]
    params: GenParams,
    #[command(flatten)]
    output: OutputArgs,
    #[command(flatten)]
    palette: PaletteArgs,
    #[command(flatten)]
    placement: PlacementArgs,
}

#[derive(Debug, Subcommand)]
enum McCommand {
    /// Send an artifact block by block
    Build(McBuildArgs),
    /// Replace an artifact's bounding box with air
    Erase(McEraseArgs),
}

#[derive(Debug, Clone, Args)]
struct ConnArgs {
    #[arg(long, default_value = "localhost")]
    host: String,
    #[arg(long, default_value_t = DEFAULT_PORT)]
    port: u16,
    /// Connect and write timeout in seconds
    #[arg(long, default_value_t = 10)]
    timeout: u64,
}

impl ConnArgs {
    fn connect(&self) -> CliResult<McConnection> {
        McConnection::connect_timeout(&self.host, self.port, Duration::from_secs(self.timeout.max(1)))
            .map_err(|e| Failure::new(Status::Connect, e))
    }
}

#[derive(Debug, Clone, Args)]
struct SourceArgs {
    /// Brick program (.bl) or command file (.mcmd)
    #[arg(long, conflicts_with = "gen")]
    file: Option<PathBuf>,
    /// Generate the artifact instead of reading a file
    #[arg(long, value_enum)]
    gen: Option<GenKind>,
    #[command(flatten)]
    params: GenParams,
}

#[derive(Debug, Args)]
struct McBuildArgs {
    #[command(flatten)]
    conn: ConnArgs,
    #[command(flatten)]
    source: SourceArgs,
    #[command(flatten)]
    placement: PlacementArgs,
    #[command(flatten)]
    palette: PaletteArgs,
    /// Skip this many leading lines, continuing an interrupted build
    #[arg(long, default_value_t = 0)]
    resume_from: usize,
}

#[derive(Debug, Args)]
struct McEraseArgs {
    #[command(flatten)]
    conn: ConnArgs,
    /// Box to clear in artifact coordinates, as x1,y1,z1:x2,y2,z2
    #[arg(long, value_parser = parse_bbox)]
    bbox: Option<(Coord3, Coord3)>,
    #[command(flatten)]
    source: SourceArgs,
    #[command(flatten)]
    placement: PlacementArgs,
    #[command(flatten)]
    palette: PaletteArgs,
}

fn parse_bbox(s: &str) -> Result<(Coord3, Coord3), String> {
    let (lo, hi) = s.split_once(':').ok_or_else(|| format!("expected x1,y1,z1:x2,y2,z2, found `{s}`"))?;
    Ok((parse_coord3(lo)?, parse_coord3(hi)?))
}

#[derive(Debug, Subcommand)]
enum PaletteCommand {
    /// Print every brick with its LDraw colour and Minecraft block
    List {
        /// Palette file [default: $BRICKFORGE_PALETTE, else the built-in palette]
        path: Option<PathBuf>,
    },
    /// Validate a palette file and report its size
    Check { path: Option<PathBuf> },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => cmd_run(&args),
        Command::Gen(args) => cmd_gen(&args),
        Command::Mc(McCommand::Build(args)) => cmd_mc_build(&args),
        Command::Mc(McCommand::Erase(args)) => cmd_mc_erase(&args),
        Command::Palette(PaletteCommand::List { path }) => cmd_palette_list(path.as_deref()),
        Command::Palette(PaletteCommand::Check { path }) => cmd_palette_check(path.as_deref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("brickforge: {}", f.message);
            f.exit_code()
        }
    }
}

fn read_source(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| Failure::io(path, e))
}

fn dsl_failure(path: &Path, e: DslError) -> Failure {
    let status = if e.is_syntax() { Status::Syntax } else { Status::Invalid };
    Failure::new(status, format!("{}: {e}", path.display()))
}

fn evaluate_file(path: &Path, palette: &Arc<Palette>) -> CliResult<dsl::EvalResult> {
    let src = read_source(path)?;
    dsl::run(&src, palette.clone()).map_err(|e| dsl_failure(path, e))
}

fn input_stem(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "artifact".into())
}

fn cmd_run(args: &RunArgs) -> CliResult {
    let (palette, mapping) = args.palette.load()?;
    let result = evaluate_file(&args.file, &palette)?;

    let outputs: Vec<(Emit, String)> = match args.output.emit {
        Some(Emit::None) => Vec::new(),
        Some(emit) => {
            let stem = result.directives.first().map(|d| d.name.clone()).unwrap_or_else(|| input_stem(&args.file));
            vec![(emit, stem)]
        }
        None => result.directives.iter().map(|d| (Emit::for_target(d.target), d.name.clone())).collect(),
    };
    if outputs.is_empty() {
        eprintln!("{}: nothing to export", args.file.display());
        return Ok(());
    }
    let artifact = result
        .space
        .as_ref()
        .ok_or_else(|| Failure::invalid(format!("{}: the program never builds a space", args.file.display())))?;

    let ctx = ExportContext { palette: &palette, mapping: mapping.as_ref(), placement: &args.placement };
    let mut writer = Writer::default();
    for (emit, stem) in &outputs {
        let Some(path) = args.output.path_for(stem, *emit, outputs.len())? else {
            continue;
        };
        let bytes = render(artifact, *emit, &ctx)?;
        writer.write(&path, &bytes)?;
    }
    Ok(())
}

fn cmd_gen(args: &GenArgs) -> CliResult {
    let (palette, mapping) = args.palette.load()?;
    let artifact = generate(args.kind, &args.params, &palette)?;
    eprintln!("{}: {} cells", args.kind.stem(), artifact_len(&artifact));
    let emit = args.output.emit.unwrap_or(Emit::Ldraw);
    let Some(path) = args.output.path_for(args.kind.stem(), emit, 1)? else {
        return Ok(());
    };
    let ctx = ExportContext { palette: &palette, mapping: mapping.as_ref(), placement: &args.placement };
    let bytes = render(&artifact, emit, &ctx)?;
    Writer::default().write(&path, &bytes)
}

fn artifact_len(a: &Artifact) -> usize {
    match a {
        Artifact::Flat(s) => s.len(),
        Artifact::Solid(s) => s.len(),
    }
}

enum Source {
    Artifact(Artifact),
    Commands(CommandList),
}

fn load_source(source: &SourceArgs, palette: &Arc<Palette>) -> CliResult<Option<Source>> {
    if let Some(kind) = source.gen {
        return Ok(Some(Source::Artifact(generate(kind, &source.params, palette)?)));
    }
    let Some(path) = &source.file else {
        return Ok(None);
    };
    if path.extension().is_some_and(|e| e == "mcmd") {
        let text = read_source(path)?;
        let commands = CommandList::parse(&text).map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))?;
        return Ok(Some(Source::Commands(commands)));
    }
    let result = evaluate_file(path, palette)?;
    let space = result
        .space
        .ok_or_else(|| Failure::invalid(format!("{}: the program never builds a space", path.display())))?;
    Ok(Some(Source::Artifact(space)))
}

fn send(conn_args: &ConnArgs, commands: &CommandList, skip: usize) -> CliResult {
    if skip > commands.len() {
        return Err(Failure::invalid(format!("--resume-from {skip} is past the end of {} lines", commands.len())));
    }
    let remaining = CommandList(commands.0[skip..].to_vec());
    let mut conn = conn_args.connect()?;
    match conn.send_commands(&remaining) {
        Ok(n) => {
            eprintln!("sent {n} lines to {}", conn.endpoint());
            Ok(())
        }
        Err(e @ McError::PartialSend { .. }) => {
            let resume = skip + e.sent();
            Err(Failure::new(Status::PartialSend, format!("{e}; resume with --resume-from {resume}")))
        }
        Err(e) => Err(Failure::new(Status::Connect, e)),
    }
}

fn cmd_mc_build(args: &McBuildArgs) -> CliResult {
    let (palette, mapping) = args.palette.load()?;
    let commands = match load_source(&args.source, &palette)? {
        Some(Source::Commands(c)) => c,
        Some(Source::Artifact(a)) => {
            let placement = args.placement.placement(&a);
            build_commands(&a, &palette, mapping.as_ref(), &placement).map_err(Failure::export)?
        }
        None => return Err(Failure::invalid("mc build needs --file or --gen")),
    };
    send(&args.conn, &commands, args.resume_from)
}

fn cmd_mc_erase(args: &McEraseArgs) -> CliResult {
    let placement = McPlacement {
        world_origin: args.placement.origin,
        mirror_z: args.placement.mirror_z,
        ..McPlacement::default()
    };
    let (lo, hi) = match args.bbox {
        Some(b) => b,
        None => {
            let (palette, _) = args.palette.load()?;
            match load_source(&args.source, &palette)? {
                Some(Source::Artifact(a)) => a
                    .occupied_bounds()
                    .ok_or_else(|| Failure::invalid("the artifact is empty; nothing to erase"))?,
                Some(Source::Commands(_)) => {
                    return Err(Failure::invalid("erase needs --bbox when replaying a command file"))
                }
                None => return Err(Failure::invalid("mc erase needs --bbox, --file or --gen")),
            }
        }
    };
    let commands = erase_commands(lo, hi, &placement).map_err(Failure::invalid)?;
    send(&args.conn, &commands, 0)
}

fn palette_at(path: Option<&Path>) -> CliResult<(Palette, String)> {
    match path {
        Some(p) => Ok((Palette::load(p)?, p.display().to_string())),
        None => {
            let origin = std::env::var(PALETTE_ENV).ok().filter(|v| !v.is_empty());
            Ok((Palette::from_env()?, origin.unwrap_or_else(|| "built-in palette".into())))
        }
    }
}

fn cmd_palette_list(path: Option<&Path>) -> CliResult {
    let (palette, _) = palette_at(path)?;
    let width = palette.bricks().iter().map(|b| b.name.as_str().len()).max().unwrap_or(0);
    for b in palette.bricks() {
        eprintln!("{:<width$}  {:>3}  {}:{}", b.name.as_str(), b.ldraw_colour, b.mc.id, b.mc.data);
    }
    Ok(())
}

fn cmd_palette_check(path: Option<&Path>) -> CliResult {
    let (palette, origin) = palette_at(path)?;
    eprintln!("{origin}: {} entries OK", palette.len());
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stems_are_sanitized() {
        assert_eq!(file_stem("flag"), "flag");
        assert_eq!(file_stem("../etc/x"), ".._etc_x");
        assert_eq!(file_stem(""), "artifact");
        assert_eq!(file_stem(".."), "artifact");
    }

    #[test]
    fn bbox_parses() {
        let (lo, hi) = parse_bbox("0,64,0:36,64,27").unwrap();
        assert_eq!((lo, hi), (Coord3::new(0, 64, 0), Coord3::new(36, 64, 27)));
        assert!(parse_bbox("0,0,0").is_err());
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
