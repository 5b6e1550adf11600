use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use prism_cactus::fixtures;
use prism_cactus::PlaneGraph;
use tempfile::TempDir;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_prismcactus"));
    c.env_remove("PRISMCACTUS_MAX_N").env_remove("PRISMCACTUS_SEED");
    c
}

fn write(dir: &Path, name: &str, g: &PlaneGraph) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, g.to_pgr()).unwrap();
    p
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn check_reports_structure() {
    let d = TempDir::new().unwrap();
    let oct = write(d.path(), "oct.pgr", &fixtures::octahedron());
    let o = bin().arg("check").arg(&oct).output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    for line in ["fact circuit yes", "fact internal_degree_at_least_4 yes", "fact euler yes", "fact three_connected yes"] {
        assert!(s.contains(line), "{line} missing in\n{s}");
    }
    let c5 = write(d.path(), "c5.pgr", &fixtures::cycle(5));
    let s = stdout(&bin().arg("check").arg(&c5).output().unwrap());
    assert!(s.contains("fact circuit yes") && s.contains("fact bipartite no"));
}

#[test]
fn malformed_input_exits_with_parse_code() {
    let d = TempDir::new().unwrap();
    let p = d.path().join("bad.pgr");
    std::fs::write(&p, "3\n0: 1 7\n").unwrap();
    let o = bin().arg("check").arg(&p).output().unwrap();
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("status error 3"));
}

#[test]
fn prism_ham_writes_artifacts() {
    let d = TempDir::new().unwrap();
    let c6 = write(d.path(), "c6.pgr", &fixtures::cycle(6));
    let out = d.path().join("out");
    let o = bin().arg("prism-ham").arg(&c6).arg("--out").arg(&out).output().unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let prism = std::fs::read_to_string(out.join("prism.txt")).unwrap();
    assert_eq!(prism.split_whitespace().count(), 12);
    assert_eq!(std::fs::read_to_string(out.join("verdict.txt")).unwrap(), "verified\n");
    let report = std::fs::read_to_string(out.join("report.txt")).unwrap();
    assert!(report.contains("fact vertical_edges 6"));

    // the written artifacts verify independently
    let o = bin()
        .args(["verify", c6.to_str().unwrap(), "--prism"])
        .arg(out.join("prism.txt"))
        .arg("--cactus")
        .arg(out.join("cactus.txt"))
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn cubic_internal_vertex_is_a_precondition_failure() {
    let d = TempDir::new().unwrap();
    let cube = write(d.path(), "cube.pgr", &fixtures::cube());
    let o = bin().arg("prism-ham").arg(&cube).output().unwrap();
    assert_eq!(o.status.code(), Some(4));
    assert!(stdout(&o).contains("degree 3 < 4"));
}

#[test]
fn bad_anchors_are_a_precondition_failure() {
    let d = TempDir::new().unwrap();
    let c5 = write(d.path(), "c5.pgr", &fixtures::cycle(5));
    let o = bin().args(["prism-ham", c5.to_str().unwrap(), "--anchors", "0,2"]).output().unwrap();
    assert_eq!(o.status.code(), Some(4));
    let o = bin().args(["oracle", c5.to_str().unwrap(), "--anchors", "0,2"]).output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("fact prism_cycle absent"));
}

#[test]
fn tampered_prism_cycle_fails_verification() {
    let d = TempDir::new().unwrap();
    let c4 = write(d.path(), "c4.pgr", &fixtures::cycle(4));
    let p = d.path().join("p.txt");
    std::fs::write(&p, "0/a 1/a 2/a 3/a 3/b 2/b 1/b 0/b\n").unwrap();
    let o = bin().args(["verify", c4.to_str().unwrap(), "--prism", p.to_str().unwrap()]).output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    std::fs::write(&p, "0/a 2/a 1/a 3/a 3/b 2/b 1/b 0/b\n").unwrap();
    let o = bin().args(["verify", c4.to_str().unwrap(), "--prism", p.to_str().unwrap()]).output().unwrap();
    assert_eq!(o.status.code(), Some(6));
}

#[test]
fn chains_and_decompose_run() {
    let d = TempDir::new().unwrap();
    let grid = write(d.path(), "grid.pgr", &fixtures::grid(3, 3));
    for op in ["rihta", "xyxy", "bip", "cycle-bip"] {
        let o = bin().args(["chains", grid.to_str().unwrap(), "--op", op, "--anchors", "0,1", "--marks", "5"]).output().unwrap();
        assert_eq!(o.status.code(), Some(0), "{op}: {}", stdout(&o));
    }
    let oct = write(d.path(), "oct.pgr", &fixtures::octahedron());
    for parity in ["odd", "even"] {
        let o = bin().args(["chains", oct.to_str().unwrap(), "--op", "nonbip", "--parity", parity, "--trace"]).output().unwrap();
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
        assert!(String::from_utf8_lossy(&o.stderr).contains("trace 0 main."));
    }
    let o = bin().args(["decompose", grid.to_str().unwrap()]).output().unwrap();
    assert!(stdout(&o).contains("block 1 "));
    let o = bin().args(["chains", grid.to_str().unwrap(), "--op", "nonsense"]).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn render_kinds() {
    let d = TempDir::new().unwrap();
    let c4 = write(d.path(), "c4.pgr", &fixtures::cycle(4));
    let out = d.path().join("out");
    assert!(bin().arg("prism-ham").arg(&c4).arg("--out").arg(&out).status().unwrap().success());
    let o = bin().args(["render", "--kind", "cactus"]).arg(out.join("cactus.txt")).output().unwrap();
    assert!(stdout(&o).contains("graph cactus"));
    let o = bin().args(["render", "--kind", "prism", "--graph", c4.to_str().unwrap()]).arg(out.join("prism.txt")).output().unwrap();
    assert!(stdout(&o).contains("color=red"));
    let a = stdout(&bin().args(["render", "--kind", "graph"]).arg(&c4).output().unwrap());
    let b = stdout(&bin().args(["render", "--kind", "graph"]).arg(&c4).output().unwrap());
    assert_eq!(a.split("--- ").nth(1), b.split("--- ").nth(1));
    let o = bin().args(["render", "--kind", "teapot"]).arg(&c4).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn environment_and_flag_precedence() {
    let d = TempDir::new().unwrap();
    let run = |env: Option<&str>, flag: Option<&str>| {
        let mut c = bin();
        c.args(["corpus", "--out"]).arg(d.path().join(format!("{env:?}{flag:?}")));
        if let Some(e) = env {
            c.env("PRISMCACTUS_MAX_N", e);
        }
        if let Some(f) = flag {
            c.args(["--max-n", f]);
        }
        let s = stdout(&c.output().unwrap());
        s.lines().find(|l| l.starts_with("fact entries")).unwrap().to_string()
    };
    let six = run(None, Some("6"));
    assert_eq!(run(Some("6"), None), six);
    assert_eq!(run(Some("9"), Some("6")), six);
    assert_ne!(run(Some("7"), None), six);
}

#[test]
fn corpus_round_trips_through_planar_code() {
    let d = TempDir::new().unwrap();
    let out = d.path().join("c");
    let o = bin().args(["corpus", "--max-n", "7", "--format", "planar_code", "--out"]).arg(&out).output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    let o = bin().args(["corpus", "--max-n", "6", "--ingest"]).arg(out.join("corpus.planar_code")).output().unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let back = prism_cactus::oracle::corpus::Corpus::read_dir(&out).unwrap();
    assert!(!back.entries.is_empty());
}
