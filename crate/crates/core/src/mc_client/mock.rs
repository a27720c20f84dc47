//! A loopback stand-in for a RaspberryJuice server, for tests and dry runs.

use std::collections::BTreeMap;
use std::io::{BufRead, BufReader};
use std::net::{Shutdown, TcpListener, TcpStream};
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::{Arc, Condvar, Mutex};
use std::thread::JoinHandle;
use std::time::{Duration, Instant};

use crate::export::{CommandList, McCommand};
use crate::palette::McBlock;
use crate::space::Coord3;

#[derive(Default)]
struct Log {
    bytes: Vec<u8>,
    lines: Vec<String>,
    connections: usize,
    closed: usize,
}

#[derive(Default)]
struct Shared {
    log: Mutex<Log>,
    changed: Condvar,
}

/// Records every byte and line it receives. Connections are served one at a
/// time, in arrival order.
pub struct MockServer {
    port: u16,
    shared: Arc<Shared>,
    stop: Arc<AtomicBool>,
    thread: Option<JoinHandle<()>>,
}

impl MockServer {
    pub fn start() -> std::io::Result<Self> {
        Self::start_with(None)
    }

    /// A server that hangs up on each connection after `lines` lines.
    pub fn closing_after(lines: usize) -> std::io::Result<Self> {
        Self::start_with(Some(lines))
    }

    fn start_with(close_after: Option<usize>) -> std::io::Result<Self> {
        let listener = TcpListener::bind("127.0.0.1:0")?;
        let port = listener.local_addr()?.port();
        let shared = Arc::new(Shared::default());
        let stop = Arc::new(AtomicBool::new(false));
        let thread = {
            let (shared, stop) = (shared.clone(), stop.clone());
            std::thread::spawn(move || {
                for stream in listener.incoming() {
                    if stop.load(Ordering::SeqCst) {
                        break;
                    }
                    if let Ok(stream) = stream {
                        serve(stream, &shared, close_after);
                    }
                }
            })
        };
        Ok(Self { port, shared, stop, thread: Some(thread) })
    }

    pub fn port(&self) -> u16 {
        self.port
    }

    pub fn lines(&self) -> Vec<String> {
        self.shared.log.lock().unwrap().lines.clone()
    }

    pub fn bytes(&self) -> Vec<u8> {
        self.shared.log.lock().unwrap().bytes.clone()
    }

    pub fn connections(&self) -> usize {
        self.shared.log.lock().unwrap().connections
    }

    fn wait(&self, timeout: Duration, done: impl Fn(&Log) -> bool) -> bool {
        let deadline = Instant::now() + timeout;
        let mut log = self.shared.log.lock().unwrap();
        while !done(&log) {
            let now = Instant::now();
            if now >= deadline {
                return false;
            }
            log = self.shared.changed.wait_timeout(log, deadline - now).unwrap().0;
        }
        true
    }

    /// Blocks until at least `n` lines have arrived.
    pub fn wait_for_lines(&self, n: usize, timeout: Duration) -> bool {
        self.wait(timeout, |log| log.lines.len() >= n)
    }

    /// Blocks until `n` connections have been fully read and closed.
    pub fn wait_for_closed(&self, n: usize, timeout: Duration) -> bool {
        self.wait(timeout, |log| log.closed >= n)
    }
}

fn serve(stream: TcpStream, shared: &Shared, close_after: Option<usize>) {
    shared.log.lock().unwrap().connections += 1;
    let mut reader = BufReader::new(&stream);
    let mut received = 0;
    let mut line = Vec::new();
    loop {
        if close_after.is_some_and(|n| received >= n) {
            break;
        }
        line.clear();
        match reader.read_until(b'\n', &mut line) {
            Ok(0) | Err(_) => break,
            Ok(_) => {}
        }
        let mut log = shared.log.lock().unwrap();
        log.bytes.extend_from_slice(&line);
        if line.last() == Some(&b'\n') {
            log.lines.push(String::from_utf8_lossy(&line[..line.len() - 1]).into_owned());
            received += 1;
        }
        shared.changed.notify_all();
    }
    let _ = stream.shutdown(Shutdown::Both);
    shared.log.lock().unwrap().closed += 1;
    shared.changed.notify_all();
}

impl Drop for MockServer {
    fn drop(&mut self) {
        self.stop.store(true, Ordering::SeqCst);
        // Wake the accept loop so the thread can exit; it is not joined
        // because a client may still hold a connection open.
        let _ = TcpStream::connect(("127.0.0.1", self.port));
        self.thread.take();
    }
}

/// World state obtained by replaying commands; air blocks are absent.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MockWorld {
    pub blocks: BTreeMap<Coord3, McBlock>,
    pub player: Option<Coord3>,
}

impl MockWorld {
    pub fn apply(&mut self, command: &McCommand) {
        match *command {
            McCommand::SetPos(p) => self.player = Some(p),
            McCommand::SetBlock(p, b) => self.set(p, b),
            McCommand::SetBlocks(a, c, b) => {
                for x in a.x.min(c.x)..=a.x.max(c.x) {
                    for y in a.y.min(c.y)..=a.y.max(c.y) {
                        for z in a.z.min(c.z)..=a.z.max(c.z) {
                            self.set(Coord3::new(x, y, z), b);
                        }
                    }
                }
            }
        }
    }

    fn set(&mut self, p: Coord3, b: McBlock) {
        if b == McBlock::AIR {
            self.blocks.remove(&p);
        } else {
            self.blocks.insert(p, b);
        }
    }

    pub fn apply_all(&mut self, commands: &CommandList) {
        for c in commands.iter() {
            self.apply(c);
        }
    }

    /// Replays a line transcript such as [`MockServer::lines`].
    pub fn from_lines<S: AsRef<str>>(lines: &[S]) -> Result<Self, String> {
        let mut world = Self::default();
        for line in lines {
            world.apply(&line.as_ref().parse()?);
        }
        Ok(world)
    }
}
