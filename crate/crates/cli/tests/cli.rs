use std::collections::BTreeMap;
use std::io::{BufRead, BufReader, Read, Write};
use std::net::{TcpListener, TcpStream};
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use tilegraph_core::testgen::{random_graph, LayoutSpec};
use tilegraph_core::tiler::PyramidStats;

fn tilegraph() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_tilegraph"));
    for (key, _) in std::env::vars() {
        if key.starts_with("TILEGRAPH_") {
            cmd.env_remove(key);
        }
    }
    cmd
}

fn run(cmd: &mut Command) -> Output {
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

/// Writes a seeded graph as a JSON input file.
fn graph_file(dir: &Path, nodes: usize, edges: usize, seed: u64) -> PathBuf {
    let g = random_graph(&LayoutSpec::desk(nodes, edges), seed);
    let path = dir.join(format!("g{seed}.json"));
    std::fs::write(&path, g.to_canonical_json()).unwrap();
    path
}

fn tree(dir: &Path) -> BTreeMap<PathBuf, Vec<u8>> {
    let mut out = BTreeMap::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for entry in std::fs::read_dir(&d).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                stack.push(path);
            } else {
                out.insert(path.strip_prefix(dir).unwrap().to_path_buf(), std::fs::read(&path).unwrap());
            }
        }
    }
    out
}

fn build(input: &Path, out: &Path, extra: &[&str]) -> Output {
    let o = run(tilegraph().arg("build").arg(input).arg("-o").arg(out).args(extra));
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    o
}

#[test]
fn build_writes_a_pyramid_that_stats_reads_back() {
    let tmp = tempfile::tempdir().unwrap();
    let input = graph_file(tmp.path(), 80, 200, 1);
    let out = tmp.path().join("out");
    let o = build(&input, &out, &["--capacity", "60"]);
    let text = stdout(&o);
    assert!(text.contains("80 nodes, 200 edges"));
    for stage in ["parse", "layout-ingest", "routing", "tiling", "total"] {
        assert!(text.lines().any(|l| l.starts_with(stage)), "missing stage {stage}");
    }
    assert!(out.join("manifest.json").is_file());
    assert!(out.join("tiles/0/0/0.json").is_file());

    let o = run(tilegraph().args(["stats", "--json"]).arg(&out));
    assert!(o.status.success());
    let stats: PyramidStats = serde_json::from_str(stdout(&o).trim()).unwrap();
    let manifest: serde_json::Value = serde_json::from_slice(&std::fs::read(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(serde_json::to_value(&stats).unwrap(), manifest["stats"]);
    assert!(stats.levels > 1);
    assert_eq!(manifest["yAxis"], "up");

    let o = run(tilegraph().arg("stats").arg(&out));
    assert!(o.status.success());
    assert!(stdout(&o).contains("max per tile"));
}

#[test]
fn output_does_not_depend_on_threads_or_runs() {
    let tmp = tempfile::tempdir().unwrap();
    let input = graph_file(tmp.path(), 120, 400, 2);
    let (a, b, c) = (tmp.path().join("a"), tmp.path().join("b"), tmp.path().join("c"));
    build(&input, &a, &["--capacity", "80", "--threads", "1"]);
    build(&input, &b, &["--capacity", "80", "--threads", "1"]);
    build(&input, &c, &["--capacity", "80", "--threads", "8"]);
    let ta = tree(&a);
    assert!(ta.len() > 4);
    assert_eq!(ta, tree(&b));
    assert_eq!(ta, tree(&c));
}

#[test]
fn environment_overrides_defaults() {
    let tmp = tempfile::tempdir().unwrap();
    let input = graph_file(tmp.path(), 60, 150, 3);
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    build(&input, &a, &[]);
    let o = run(
        tilegraph()
            .arg("build")
            .arg(&input)
            .env("TILEGRAPH_OUT", &b)
            .env("TILEGRAPH_CAPACITY", "30"),
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let levels = |dir: &Path| {
        let m: serde_json::Value = serde_json::from_slice(&std::fs::read(dir.join("manifest.json")).unwrap()).unwrap();
        (m["levels"].as_u64().unwrap(), m["capacity"].as_u64().unwrap())
    };
    assert_eq!(levels(&a).1, 500);
    assert_eq!(levels(&b).1, 30);
    assert!(levels(&b).0 > levels(&a).0);
}

#[test]
fn exit_codes_follow_the_failure_kind() {
    let tmp = tempfile::tempdir().unwrap();
    let o = run(tilegraph().arg("build").arg(tmp.path().join("nope.json")).arg("-o").arg(tmp.path().join("o")));
    assert_eq!(o.status.code(), Some(2));
    let o = run(tilegraph().arg("stats").arg(tmp.path().join("nothing")));
    assert_eq!(o.status.code(), Some(2));

    let input = graph_file(tmp.path(), 40, 90, 4);
    let out = tmp.path().join("out");
    build(&input, &out, &["--capacity", "40"]);
    std::fs::write(out.join("tiles/0/0/0.json"), b"{not json").unwrap();
    let o = run(tilegraph().arg("stats").arg(&out));
    assert_eq!(o.status.code(), Some(3));

    let bad = tmp.path().join("bad.json");
    std::fs::write(&bad, b"{\"nodes\": [").unwrap();
    let o = run(tilegraph().arg("route").arg(&bad));
    assert_eq!(o.status.code(), Some(1));
    let o = run(tilegraph().arg("build").arg(&input).arg("-o").arg(&out).args(["--capacity", "0"]));
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn route_prints_every_edge_and_compare_agrees() {
    let tmp = tempfile::tempdir().unwrap();
    let input = graph_file(tmp.path(), 30, 70, 5);
    let o = run(tilegraph().arg("route").arg(&input));
    assert!(o.status.success());
    let doc: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    let routes = doc["routes"].as_array().unwrap();
    assert_eq!(routes.len(), 70);
    assert!(routes.iter().all(|r| r["path"].as_array().unwrap().len() >= 2));
    assert_eq!(doc["mode"], "vc_dijkstra");

    let o = run(tilegraph().arg("route").arg(&input).arg("--compare"));
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("identical across modes: yes"), "{text}");
    for mode in ["astar", "dijkstra", "vc_dijkstra"] {
        assert!(text.lines().any(|l| l.starts_with(mode)));
    }
}

#[test]
fn bench_quality_stays_within_the_stretch_bound() {
    let tmp = tempfile::tempdir().unwrap();
    let report = tmp.path().join("q.json");
    let o = run(tilegraph().args(["bench-quality", "--instances", "8", "--seed", "3", "--json"]).arg(&report));
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let doc: serde_json::Value = serde_json::from_slice(&std::fs::read(&report).unwrap()).unwrap();
    assert_eq!(doc["over_bound"], 0);
    assert!(doc["max"].as_f64().unwrap() <= 2.42);
    assert!(doc["mean"].as_f64().unwrap() >= 1.0);
}

fn get(addr: &str, path: &str) -> (u16, String, String) {
    let mut s = TcpStream::connect(addr).unwrap();
    write!(s, "GET {path} HTTP/1.1\r\nHost: {addr}\r\nConnection: close\r\n\r\n").unwrap();
    let mut resp = String::new();
    s.read_to_string(&mut resp).unwrap();
    let status = resp[9..12].parse().unwrap();
    let (head, body) = resp.split_once("\r\n\r\n").unwrap_or((&resp, ""));
    (status, head.to_ascii_lowercase(), body.to_string())
}

#[test]
fn serve_exposes_manifest_and_tiles() {
    let tmp = tempfile::tempdir().unwrap();
    let input = graph_file(tmp.path(), 40, 90, 6);
    let out = tmp.path().join("out");
    build(&input, &out, &["--capacity", "40"]);

    let mut child = tilegraph()
        .arg("serve")
        .arg(&out)
        .args(["--port", "0"])
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    let mut line = String::new();
    BufReader::new(child.stdout.take().unwrap()).read_line(&mut line).unwrap();
    let addr = line.trim().rsplit("http://").next().unwrap().to_string();

    let (status, head, body) = get(&addr, "/manifest.json");
    assert_eq!(status, 200);
    assert!(head.contains("access-control-allow-origin: *"));
    assert_eq!(body.as_bytes(), std::fs::read(out.join("manifest.json")).unwrap());
    let (status, _, body) = get(&addr, "/tiles/0/0/0.json");
    assert_eq!(status, 200);
    assert_eq!(body.as_bytes(), std::fs::read(out.join("tiles/0/0/0.json")).unwrap());
    assert_eq!(get(&addr, "/tiles/9/511/3.json").0, 404);
    assert_eq!(get(&addr, "/tiles/0/0/..%2F..%2Fmanifest.json").0, 404);
    assert_eq!(get(&addr, "/elsewhere").0, 404);
    child.kill().unwrap();
    child.wait().unwrap();
}

#[test]
fn serve_reports_a_busy_port_and_a_missing_manifest() {
    let tmp = tempfile::tempdir().unwrap();
    let input = graph_file(tmp.path(), 10, 12, 7);
    let out = tmp.path().join("out");
    build(&input, &out, &[]);
    let busy = TcpListener::bind("127.0.0.1:0").unwrap();
    let port = busy.local_addr().unwrap().port().to_string();
    let o = run(tilegraph().arg("serve").arg(&out).args(["--port", &port]));
    assert_eq!(o.status.code(), Some(4));
    let o = run(tilegraph().arg("serve").arg(tmp.path().join("none")).args(["--port", "0"]));
    assert_eq!(o.status.code(), Some(2));
}
