#![cfg(unix)]

use std::io::{BufRead, BufReader, Read, Write};
use std::net::{SocketAddr, TcpListener, TcpStream};
use std::path::Path;
use std::process::{Child, Command, Stdio};
use std::time::Duration;

use voxfeed_testkit::stub::{Route, StubServer};
use voxfeed_testkit::NEWS_FEED_RSS;

struct Server {
    child: Child,
    addr: SocketAddr,
}

fn spawn(args: &[&str], state: Option<&Path>) -> Server {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_voxfeed"));
    cmd.arg("serve").args(["--port", "0"]).args(args);
    match state {
        Some(p) => cmd.env("VOXFEED_STATE", p),
        None => cmd.env_remove("VOXFEED_STATE"),
    };
    let mut child = cmd.stdout(Stdio::null()).stderr(Stdio::piped()).spawn().unwrap();
    let mut stderr = BufReader::new(child.stderr.take().unwrap());
    let mut line = String::new();
    stderr.read_line(&mut line).unwrap();
    let addr = line
        .trim()
        .strip_prefix("listening on http://")
        .unwrap_or_else(|| panic!("unexpected first line {line:?}"))
        .parse()
        .unwrap();
    // Keep draining so the child never blocks on a full pipe.
    std::thread::spawn(move || std::io::copy(&mut stderr, &mut std::io::sink()));
    Server { child, addr }
}

impl Server {
    fn terminate(mut self) -> i32 {
        let status = Command::new("kill").args(["-TERM", &self.child.id().to_string()]).status().unwrap();
        assert!(status.success());
        let status = self.child.wait().unwrap();
        status.code().expect("clean exit, not killed by the signal")
    }
}

/// Minimal HTTP/1.1 client: returns (status, body).
fn http(addr: SocketAddr, method: &str, path: &str, body: Option<&str>) -> (u16, String) {
    let mut stream = TcpStream::connect(addr).unwrap();
    stream.set_read_timeout(Some(Duration::from_secs(30))).unwrap();
    let body = body.unwrap_or("");
    write!(
        stream,
        "{method} {path} HTTP/1.1\r\nHost: {addr}\r\nContent-Type: application/json\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{body}",
        body.len()
    )
    .unwrap();
    let mut raw = String::new();
    stream.read_to_string(&mut raw).unwrap();
    let (head, body) = raw.split_once("\r\n\r\n").unwrap();
    let status = head.split(' ').nth(1).unwrap().parse().unwrap();
    (status, body.to_string())
}

#[test]
fn fresh_state_lists_no_feeds() {
    let dir = tempfile::tempdir().unwrap();
    let state = dir.path().join("state.json");
    let server = spawn(&["--state-file", state.to_str().unwrap()], None);
    assert_eq!(http(server.addr, "GET", "/feeds", None), (200, "[]".to_string()));
    assert_eq!(server.terminate(), 0);
    assert!(state.exists());
}

#[test]
fn subscriptions_survive_a_restart() {
    let stub = StubServer::start();
    stub.route("/news.rss", Route::rss(NEWS_FEED_RSS).with_basic_auth("ann", "s3cret"));
    let dir = tempfile::tempdir().unwrap();
    let state = dir.path().join("portal.json");

    // State file from the environment variable.
    let server = spawn(&[], Some(&state));
    let body = format!(r#"{{"url": "{}", "username": "ann", "password": "s3cret"}}"#, stub.url("/news.rss"));
    let (status, created) = http(server.addr, "POST", "/feeds", Some(&body));
    assert_eq!(status, 201, "{created}");
    let feed_id = serde_json::from_str::<serde_json::Value>(&created).unwrap()["feed_id"].as_str().unwrap().to_string();
    let (_, session) = http(server.addr, "POST", "/sessions", Some(&format!(r#"{{"feed_id": "{feed_id}"}}"#)));
    let sid = serde_json::from_str::<serde_json::Value>(&session).unwrap()["session_id"].as_str().unwrap().to_string();
    let (status, _) = http(server.addr, "POST", &format!("/sessions/{sid}/input"), Some(r#"{"kind": "shortcut", "value": "senator"}"#));
    assert_eq!(status, 200);
    assert_eq!(server.terminate(), 0);

    let server = spawn(&["--state-file", state.to_str().unwrap()], Some(Path::new("/nonexistent/ignored.json")));
    let (status, feeds) = http(server.addr, "GET", "/feeds", None);
    assert_eq!(status, 200);
    let feeds: serde_json::Value = serde_json::from_str(&feeds).unwrap();
    assert_eq!(feeds.as_array().unwrap().len(), 1);
    assert_eq!(feeds[0]["feed_id"], feed_id.as_str());
    assert_eq!(feeds[0]["url"], stub.url("/news.rss"));
    // The document and history came back too, and the credential still works.
    let (status, _) = http(server.addr, "GET", &format!("/feeds/{feed_id}/dialog?format=xv"), None);
    assert_eq!(status, 200);
    let (_, history) = http(server.addr, "GET", &format!("/feeds/{feed_id}/history"), None);
    let history: serde_json::Value = serde_json::from_str(&history).unwrap();
    assert_eq!(history["ranked"][0]["path"], serde_json::json!([2]));
    stub.clear_log();
    let (status, _) = http(server.addr, "POST", &format!("/feeds/{feed_id}/refresh"), None);
    assert_eq!(status, 200);
    assert!(stub.requests_to("/news.rss").iter().any(|r| r.basic_credentials().as_deref() == Some("ann:s3cret")));
    assert_eq!(server.terminate(), 0);
}

#[test]
fn port_conflict_exits_20() {
    let taken = TcpListener::bind("127.0.0.1:0").unwrap();
    let port = taken.local_addr().unwrap().port().to_string();
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_voxfeed"))
        .args(["serve", "--port", &port, "--state-file"])
        .arg(dir.path().join("s.json"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(20), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn corrupt_state_is_refused() {
    let dir = tempfile::tempdir().unwrap();
    let state = dir.path().join("s.json");
    std::fs::write(&state, r#"{"version": 1, "subscriptions": ["#).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_voxfeed"))
        .args(["serve", "--port", "0", "--state-file"])
        .arg(&state)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    // The broken file is left for inspection.
    assert_eq!(std::fs::read_to_string(&state).unwrap(), r#"{"version": 1, "subscriptions": ["#);
}
