use std::fmt;
use std::path::Path;
use std::process::ExitCode;

use brickforge::palette::PaletteFileError;

/// Process exit statuses. The numbering is stable so scripts can rely on it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Syntax = 1,
    Invalid = 2,
    Export = 3,
    Io = 4,
    Connect = 5,
    PartialSend = 6,
}

#[derive(Debug)]
pub struct Failure {
    pub status: Status,
    pub message: String,
}

impl Failure {
    pub fn new(status: Status, message: impl fmt::Display) -> Self {
        Self { status, message: message.to_string() }
    }

    pub fn invalid(message: impl fmt::Display) -> Self {
        Self::new(Status::Invalid, message)
    }

    pub fn export(message: impl fmt::Display) -> Self {
        Self::new(Status::Export, message)
    }

    pub fn io(path: &Path, err: impl fmt::Display) -> Self {
        Self::new(Status::Io, format!("{}: {err}", path.display()))
    }

    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(self.status as u8)
    }
}

impl From<PaletteFileError> for Failure {
    fn from(e: PaletteFileError) -> Self {
        match e {
            PaletteFileError::Io { .. } => Self::new(Status::Io, e),
            PaletteFileError::Invalid { .. } => Self::invalid(e),
        }
    }
}

pub type CliResult<T = ()> = Result<T, Failure>;
