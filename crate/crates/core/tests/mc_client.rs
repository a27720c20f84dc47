use std::time::Duration;

use brickforge::export::{build_commands, McCommand, McPlacement, MC_MAX_PIECES};
use brickforge::mc_client::mock::{MockServer, MockWorld};
use brickforge::mc_client::{McConnection, McError};
use brickforge::{BrickName, Coord3, Dim3, ExportError, Palette, Space3D};

const WAIT: Duration = Duration::from_secs(10);

fn five_cells() -> Space3D {
    let mut s = Space3D::build(5, 1, 1).unwrap();
    s.put(Dim3::new(5, 1, 1).unwrap(), &BrickName::from("RED"), Coord3::new(0, 0, 0)).unwrap();
    s
}

fn connect(server: &MockServer) -> McConnection {
    McConnection::connect("127.0.0.1", server.port()).unwrap()
}

#[test]
fn five_cells_make_six_lines() {
    let server = MockServer::start().unwrap();
    let mut conn = connect(&server);
    let palette = Palette::default_palette();
    let placement = McPlacement::above(Coord3::new(0, 64, 0), Dim3::new(5, 1, 1).unwrap());
    assert_eq!(conn.build_artifact(&five_cells(), &palette, None, &placement).unwrap(), 6);
    drop(conn);
    assert!(server.wait_for_closed(1, WAIT));
    let lines = server.lines();
    assert_eq!(lines.len(), 6);
    assert!(lines[0].starts_with("player.setPos("));
    assert!(lines[1..].iter().all(|l| l.starts_with("world.setBlock(")));
    let expected = build_commands(&five_cells(), &palette, None, &placement).unwrap().to_text();
    assert_eq!(server.bytes(), expected.into_bytes());
}

#[test]
fn erase_follows_build() {
    let server = MockServer::start().unwrap();
    let mut conn = connect(&server);
    let placement = McPlacement::default();
    conn.build_artifact(&five_cells(), &Palette::default_palette(), None, &placement).unwrap();
    assert_eq!(conn.erase_artifact(Coord3::new(0, 0, 0), Coord3::new(9, 9, 9), &placement).unwrap(), 1);
    assert!(server.wait_for_lines(7, WAIT));
    assert_eq!(server.lines().last().unwrap(), "world.setBlocks(0,0,0,9,9,9,0,0)");
    let world = MockWorld::from_lines(&server.lines()).unwrap();
    assert!(world.blocks.is_empty());
    assert!(matches!(
        conn.erase_artifact(Coord3::new(1, 1, 1), Coord3::new(0, 1, 1), &placement),
        Err(McError::Export(ExportError::BoundingBox { .. }))
    ));
}

#[test]
fn replay_is_idempotent() {
    let server = MockServer::start().unwrap();
    let mut conn = connect(&server);
    let commands = build_commands(&five_cells(), &Palette::default_palette(), None, &McPlacement::default()).unwrap();
    conn.send_commands(&commands).unwrap();
    assert!(server.wait_for_lines(6, WAIT));
    let once = MockWorld::from_lines(&server.lines()).unwrap();
    conn.send_commands(&commands).unwrap();
    assert!(server.wait_for_lines(12, WAIT));
    let twice = MockWorld::from_lines(&server.lines()).unwrap();
    assert_eq!(once, twice);
    assert_eq!(once.blocks.len(), 5);
}

#[test]
fn refused_connection_names_endpoint() {
    let port = {
        let l = std::net::TcpListener::bind("127.0.0.1:0").unwrap();
        l.local_addr().unwrap().port()
    };
    let err = McConnection::connect("127.0.0.1", port).err().unwrap();
    assert!(matches!(err, McError::Connect { .. }));
    assert!(err.to_string().contains(&format!("127.0.0.1:{port}")));
}

#[test]
fn server_hangup_is_a_partial_send() {
    let server = MockServer::closing_after(3).unwrap();
    let mut conn = connect(&server);
    let lines: Vec<String> = (0..200_000).map(|i| McCommand::SetPos(Coord3::new(i, 0, 0)).to_string()).collect();
    let err = conn.send_lines(&lines).unwrap_err();
    let McError::PartialSend { sent, .. } = err else { panic!("{err}") };
    assert!((3..lines.len()).contains(&sent));
    assert!(server.wait_for_closed(1, WAIT));
    assert_eq!(server.lines(), lines[..3]);
}

#[test]
fn oversized_artifact_sends_nothing() {
    let mut s = Space3D::build(100, 46, 100).unwrap();
    s.put(Dim3::new(100, 45, 100).unwrap(), &BrickName::from("GRAY"), Coord3::new(0, 0, 0)).unwrap();
    s.put_cell(Coord3::new(0, 45, 0), &BrickName::from("GRAY")).unwrap();
    assert_eq!(s.len(), MC_MAX_PIECES + 1);
    let server = MockServer::start().unwrap();
    let mut conn = connect(&server);
    let err = conn.build_artifact(&s, &Palette::default_palette(), None, &McPlacement::default()).unwrap_err();
    assert!(matches!(err, McError::Export(ExportError::Capacity { needed: 450_001, .. })));
    drop(conn);
    assert!(server.wait_for_closed(1, WAIT));
    assert!(server.bytes().is_empty());
}

#[test]
fn unknown_brick_sends_nothing() {
    let only_red = Palette::parse("RED,4,3005.dat,35,14\n").unwrap();
    let mut s = Space3D::build(2, 2, 2).unwrap();
    s.put_cell(Coord3::new(0, 0, 0), &BrickName::from("BLUE")).unwrap();
    let server = MockServer::start().unwrap();
    let mut conn = connect(&server);
    assert!(matches!(
        conn.build_artifact(&s, &only_red, None, &McPlacement::default()),
        Err(McError::Export(ExportError::Palette(_)))
    ));
    drop(conn);
    assert!(server.wait_for_closed(1, WAIT));
    assert!(server.bytes().is_empty());
}
