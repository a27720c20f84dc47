//! Client for the RaspberryJuice (Minecraft Pi API) text protocol.
//!
//! The commands used here produce no replies, so the client only writes.

pub mod mock;

use std::io::{self, Write};
use std::net::{TcpStream, ToSocketAddrs};
use std::time::Duration;

use thiserror::Error;

use crate::export::{build_commands, erase_commands, CommandList, ExportError, McPlacement, VoxelSource};
use crate::palette::{MappingOverride, Palette};
use crate::space::Coord3;

pub const DEFAULT_PORT: u16 = 4711;
pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(10);
/// Lines written between flushes.
pub const BATCH_LINES: usize = 1000;

#[derive(Debug, Error)]
pub enum McError {
    #[error("cannot connect to {endpoint}: {source}")]
    Connect { endpoint: String, source: io::Error },
    #[error("connection lost after {sent} lines: {source}")]
    PartialSend { sent: usize, source: io::Error },
    #[error(transparent)]
    Export(#[from] ExportError),
}

impl McError {
    /// Lines delivered before the failure, for resuming.
    pub fn sent(&self) -> usize {
        match self {
            Self::PartialSend { sent, .. } => *sent,
            _ => 0,
        }
    }
}

pub struct McConnection<W: Write = TcpStream> {
    writer: W,
    endpoint: String,
    batch_lines: usize,
}

impl McConnection<TcpStream> {
    pub fn connect(host: &str, port: u16) -> Result<Self, McError> {
        Self::connect_timeout(host, port, DEFAULT_TIMEOUT)
    }

    pub fn connect_timeout(host: &str, port: u16, timeout: Duration) -> Result<Self, McError> {
        let endpoint = format!("{host}:{port}");
        let fail = |source| McError::Connect { endpoint: endpoint.clone(), source };
        let addrs = (host, port).to_socket_addrs().map_err(fail)?;
        let mut last = io::Error::new(io::ErrorKind::AddrNotAvailable, "host resolved to no addresses");
        for addr in addrs {
            match TcpStream::connect_timeout(&addr, timeout) {
                Ok(stream) => {
                    stream.set_write_timeout(Some(timeout)).map_err(fail)?;
                    stream.set_nodelay(true).map_err(fail)?;
                    return Ok(Self { writer: stream, endpoint, batch_lines: BATCH_LINES });
                }
                Err(e) => last = e,
            }
        }
        Err(fail(last))
    }
}

impl<W: Write> McConnection<W> {
    pub fn from_writer(writer: W) -> Self {
        Self { writer, endpoint: "<writer>".into(), batch_lines: BATCH_LINES }
    }

    pub fn with_batch_lines(mut self, lines: usize) -> Self {
        self.batch_lines = lines.max(1);
        self
    }

    pub fn endpoint(&self) -> &str {
        &self.endpoint
    }

    pub fn into_inner(self) -> W {
        self.writer
    }

    /// Writes every command in order and returns the number of lines sent.
    pub fn send_commands(&mut self, commands: &CommandList) -> Result<usize, McError> {
        let lines: Vec<String> = commands.iter().map(ToString::to_string).collect();
        self.send_lines(&lines)
    }

    /// Writes raw protocol lines, each followed by LF.
    pub fn send_lines<S: AsRef<str>>(&mut self, lines: &[S]) -> Result<usize, McError> {
        let mut sent = 0;
        let mut buf = Vec::new();
        let mut ends = Vec::new();
        for batch in lines.chunks(self.batch_lines) {
            buf.clear();
            ends.clear();
            for line in batch {
                buf.extend_from_slice(line.as_ref().as_bytes());
                buf.push(b'\n');
                ends.push(buf.len());
            }
            let mut written = 0;
            let failure = loop {
                if written == buf.len() {
                    break self.writer.flush().err();
                }
                match self.writer.write(&buf[written..]) {
                    Ok(0) => break Some(io::Error::new(io::ErrorKind::WriteZero, "connection accepted no more data")),
                    Ok(n) => written += n,
                    Err(e) if e.kind() == io::ErrorKind::Interrupted => {}
                    Err(e) => break Some(e),
                }
            };
            if let Some(source) = failure {
                let complete = ends.iter().take_while(|&&end| end <= written).count();
                return Err(McError::PartialSend { sent: sent + complete, source });
            }
            sent += batch.len();
        }
        Ok(sent)
    }

    pub fn build_artifact<S: VoxelSource + ?Sized>(
        &mut self,
        space: &S,
        palette: &Palette,
        mapping: Option<&MappingOverride>,
        placement: &McPlacement,
    ) -> Result<usize, McError> {
        let commands = build_commands(space, palette, mapping, placement)?;
        self.send_commands(&commands)
    }

    pub fn erase_artifact(&mut self, lo: Coord3, hi: Coord3, placement: &McPlacement) -> Result<usize, McError> {
        let commands = erase_commands(lo, hi, placement)?;
        self.send_commands(&commands)
    }
}
