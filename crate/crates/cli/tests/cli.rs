use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;
use tempfile::TempDir;

use matchstick_core::format::{write_graph, write_rotation};
use matchstick_core::gallery;
use matchstick_core::graph::Graph;
use matchstick_core::tr::sample_classes;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

impl Run {
    fn json(&self) -> Value {
        serde_json::from_str(&self.stdout).unwrap_or_else(|e| panic!("{e}: {}", self.stdout))
    }
}

fn matchstick(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_matchstick")).args(args).output().unwrap();
    Run {
        code: out.status.code().unwrap(),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn put(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn graph_file(dir: &TempDir, name: &str, g: &Graph) -> PathBuf {
    put(dir, name, &write_graph(g))
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn validate_exit_codes() {
    let dir = TempDir::new().unwrap();
    let ok = graph_file(&dir, "tri.txt", &gallery::triangle());
    assert_eq!(matchstick(&["validate", s(&ok)]).code, 0);

    let long =
        put(&dir, "long.txt", "matchstick v1\nv 0 0 0\nv 1 1.1 0\nv 2 0.5 0.8660254037844386\ne 0 1\ne 1 2\ne 2 0\n");
    let run = matchstick(&["--json", "validate", s(&long)]);
    assert_eq!(run.code, 2);
    let v = run.json();
    assert_eq!(v["result"]["valid"], false);
    let tags: Vec<&str> =
        v["result"]["violations"].as_array().unwrap().iter().map(|x| x["condition"].as_str().unwrap()).collect();
    assert!(tags.contains(&"unit-edge"), "{tags:?}");

    let bad = put(&dir, "bad.txt", "matchstick v1\nv 0 zero 0\n");
    let run = matchstick(&["validate", s(&bad)]);
    assert_eq!(run.code, 1);
    assert!(run.stderr.contains("line 2"), "{}", run.stderr);

    assert_eq!(matchstick(&["validate", "/nonexistent/graph.txt"]).code, 1);
}

#[test]
fn degree_options() {
    let dir = TempDir::new().unwrap();
    let star = graph_file(&dir, "star.txt", &gallery::star(6));
    assert_eq!(matchstick(&["validate", s(&star)]).code, 0);
    let run = matchstick(&["validate", "--max-degree", "5", s(&star)]);
    assert_eq!(run.code, 2);
    assert!(run.stdout.contains("degree"));
}

#[test]
fn argument_errors() {
    assert_eq!(matchstick(&["--help"]).code, 0);
    assert_eq!(matchstick(&["no-such-command"]).code, 1);
    assert_eq!(matchstick(&["--eps", "0", "facesets"]).code, 1);
    assert_eq!(matchstick(&["--eps", "-1e-9", "facesets"]).code, 1);
    assert_eq!(matchstick(&["enumerate", "--max-faces", "9"]).code, 1);
}

#[test]
fn faces_of_mixed_wheel() {
    let dir = TempDir::new().unwrap();
    let f = graph_file(&dir, "fig.txt", &gallery::mixed_wheel());
    let run = matchstick(&["faces", s(&f)]);
    assert_eq!(run.code, 0);
    for line in ["F3 = 3", "F4 = 2", "F7 = 1"] {
        assert!(run.stdout.contains(line), "{}", run.stdout);
    }
    let v = matchstick(&["--json", "faces", s(&f)]).json();
    assert_eq!(v["command"], "faces");
    assert_eq!(v["result"]["histogram"]["7"], 1);
}

#[test]
fn abstract_icosahedron_contributes_twenty() {
    let dir = TempDir::new().unwrap();
    let f = put(&dir, "ico.txt", &write_rotation(&gallery::icosahedron_rotation()));
    let v = matchstick(&["--json", "contribution", "--abstract", s(&f)]).json();
    assert_eq!(v["result"]["total"], "20");
    assert_eq!(v["result"]["euler_sum"], "20");
    assert_eq!(v["result"]["five_regular"], true);
    // coordinates are required without the flag
    assert_eq!(matchstick(&["contribution", s(&f)]).code, 1);
}

#[test]
fn strict_face_sets() {
    let v = matchstick(&["--json", "facesets", "--strict"]).json();
    let sets: Vec<String> =
        v["result"]["face_sets"].as_array().unwrap().iter().map(|r| r["face_set"].to_string()).collect();
    assert_eq!(sets.len(), 2);
    assert!(sets.contains(&"[3,3,3,3,4]".to_string()) && sets.contains(&"[3,3,3,3,5]".to_string()));
}

#[test]
fn lattice_class_descriptors() {
    let dir = TempDir::new().unwrap();
    let (_, cls) = sample_classes().pop().unwrap();
    let f = put(&dir, "cls.txt", &cls.to_text());
    let run = matchstick(&["tr", s(&f)]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    assert!(run.stdout.contains("residual: 0"));
    assert!(run.stdout.contains("σ=-4 k=8 τ=19 b1=1 b2=4"), "{}", run.stdout);
}

#[test]
fn weights_on_the_hexagonal_hole() {
    let dir = TempDir::new().unwrap();
    let f = graph_file(&dir, "ring.txt", &gallery::hexagon_ring());
    let run = matchstick(&["--json", "weights", s(&f)]);
    assert_eq!(run.code, 0, "{}", run.stdout);
    let v = run.json();
    let audited: Vec<&Value> =
        v["result"]["classes"].as_array().unwrap().iter().filter(|c| c["status"] == "audited").collect();
    assert_eq!(audited.len(), 1);
    let arcs = audited[0]["ledger"]["arcs"].as_array().unwrap();
    assert_eq!(arcs.iter().filter(|a| a["kind"] == "hole").count(), 6);
    let text = matchstick(&["weights", s(&f)]).stdout;
    assert!(text.contains("hole-6"), "{text}");
}

#[test]
fn refute_reports_invalid_input() {
    let dir = TempDir::new().unwrap();
    let f = graph_file(&dir, "star.txt", &gallery::triangle_star());
    let run = matchstick(&["--json", "refute", s(&f)]);
    assert_eq!(run.code, 2);
    assert_eq!(run.json()["result"]["verdict"], "input-invalid");
}

#[test]
fn patch_round_trip() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("patch.txt");
    let run = matchstick(&["patch", "--rows", "5", "--cols", "6", "--shift", "0,-2,0,2", "-o", s(&out)]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    assert_eq!(matchstick(&["validate", s(&out)]).code, 0);
    let tq = matchstick(&["--json", "tq", s(&out)]).json();
    assert!(!tq["result"]["classes"].as_array().unwrap().is_empty());
    assert_eq!(matchstick(&["patch", "--rows", "2", "--cols", "2"]).code, 1);
}

#[test]
fn render_writes_svg() {
    let dir = TempDir::new().unwrap();
    let f = graph_file(&dir, "ring.txt", &gallery::hexagon_ring());
    let out = dir.path().join("ring.svg");
    let run = matchstick(&["render", s(&f), "-o", s(&out)]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let svg = fs::read_to_string(&out).unwrap();
    assert!(svg.starts_with("<svg"));
    assert_eq!(svg.matches("<polygon").count(), 18);
    assert!(svg.contains("stroke-dasharray"));
    assert!(svg.trim_end().ends_with("</svg>"));
}

#[test]
fn generators_are_reproducible() {
    for args in [
        &["--json", "random", "--seed", "7", "--faces", "20"][..],
        &["--json", "enumerate", "--max-faces", "3"][..],
        &["--json", "pentagon"][..],
    ] {
        let a = matchstick(args);
        assert_eq!(a.code, 0, "{args:?}: {}", a.stderr);
        assert_eq!(a.stdout, matchstick(args).stdout);
    }
    let v = matchstick(&["--json", "pentagon"]).json();
    assert_eq!(v["result"]["counterexamples"].as_array().unwrap().len(), 0);
}
