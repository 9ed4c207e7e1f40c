use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn boxchi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_boxchi"))
        .args(args)
        .env_remove("BOXCHI_THREADS")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn gen(dir: &TempDir, name: &str, family: &str, n: usize, d: usize, seed: u64) -> PathBuf {
    let p = dir.path().join(name);
    let (n, d, seed) = (n.to_string(), d.to_string(), seed.to_string());
    let out = boxchi(&["gen", "--family", family, "--n", &n, "--d", &d, "--seed", &seed, "--out", s(&p)]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    p
}

#[test]
fn gen_writes_nine_boxes_deterministically() {
    let dir = TempDir::new().unwrap();
    let a = gen(&dir, "a.boxes", "grid-disjoint", 9, 2, 1);
    let b = gen(&dir, "b.boxes", "grid-disjoint", 9, 2, 1);
    let text = fs::read_to_string(&a).unwrap();
    assert_eq!(text, fs::read_to_string(&b).unwrap());
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("2 9"));
    assert_eq!(lines.count(), 9);
}

#[test]
fn gen_rejects_zero_dimension() {
    let out = boxchi(&["gen", "--family", "uniform-random", "--n", "3", "--d", "0"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("error"), "{}", stderr(&out));
}

#[test]
fn disjoint_grid_needs_one_colour() {
    let dir = TempDir::new().unwrap();
    let grid = gen(&dir, "g.boxes", "grid-disjoint", 9, 2, 1);
    let cert = dir.path().join("c.json");
    let out = boxchi(&["color", s(&grid), "--r", "1", "--k", "1", "--out", s(&cert)]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).starts_with("kind=coloring palette=1 "), "{}", stdout(&out));
}

#[test]
fn nested_chain_is_coloured() {
    let dir = TempDir::new().unwrap();
    let chain = gen(&dir, "n.boxes", "nested-chain", 5, 2, 0);
    let out = boxchi(&["color", s(&chain), "--r", "1", "--k", "2"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stderr(&out).starts_with("kind=coloring palette=5 omega=5"), "{}", stderr(&out));
    let json: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["kind"], "coloring");
}

#[test]
fn colour_then_verify_round_trip() {
    let dir = TempDir::new().unwrap();
    for seed in 0..5 {
        let boxes = gen(&dir, "r.boxes", "uniform-random", 16, 2, seed);
        let cert = dir.path().join("c.json");
        let out = boxchi(&["color", s(&boxes), "--r", "1", "--k", "2", "--out", s(&cert)]);
        assert!(matches!(code(&out), 0 | 3), "{}", stderr(&out));
        let out = boxchi(&["verify", s(&boxes), s(&cert)]);
        assert_eq!(code(&out), 0, "{}", stdout(&out));
        assert!(stdout(&out).starts_with("pass: "));
    }
}

// A big square over twelve small disjoint ones.
const STAR: &str = "2 13
0 100 0 100
1 5 1 5
11 15 1 5
21 25 1 5
31 35 1 5
1 5 11 15
11 15 11 15
21 25 11 15
31 35 11 15
1 5 21 25
11 15 21 25
21 25 21 25
31 35 21 25
";

#[test]
fn star_yields_a_tree_that_verifies() {
    let dir = TempDir::new().unwrap();
    let boxes = write(&dir, "star.boxes", STAR);
    let cert = dir.path().join("t.json");
    let out = boxchi(&["color", s(&boxes), "--r", "1", "--k", "2", "--out", s(&cert)]);
    assert_eq!(code(&out), 3, "{}", stderr(&out));
    assert!(stdout(&out).starts_with("kind=induced_tree tree_size=3 omega=2"), "{}", stdout(&out));
    let out = boxchi(&["verify", s(&boxes), s(&cert)]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));

    // plant a chord: make the two leaves overlap
    let json: Value = serde_json::from_str(&fs::read_to_string(&cert).unwrap()).unwrap();
    assert_eq!(json["map"]["0"], 0);
    let leaves = [json["map"]["1"].as_u64().unwrap(), json["map"]["2"].as_u64().unwrap()];
    let mut lines: Vec<String> = STAR.lines().map(String::from).collect();
    let first = lines[1 + leaves[0] as usize].clone();
    lines[1 + leaves[1] as usize] = first
        .split(' ')
        .map(|c| (c.parse::<i64>().unwrap() + 1).to_string())
        .collect::<Vec<_>>()
        .join(" ");
    let chorded = write(&dir, "chord.boxes", &(lines.join("\n") + "\n"));
    let out = boxchi(&["verify", s(&chorded), s(&cert)]);
    assert_eq!(code(&out), 5);
    let pair = format!("{},{}", leaves[0].min(leaves[1]), leaves[0].max(leaves[1]));
    assert!(stdout(&out).contains(&pair), "{}", stdout(&out));
}

#[test]
fn monochromatic_edge_is_named() {
    let dir = TempDir::new().unwrap();
    let chain = gen(&dir, "n.boxes", "nested-chain", 3, 1, 0);
    let cert = dir.path().join("c.json");
    let out = boxchi(&["color", s(&chain), "--r", "1", "--k", "1", "--out", s(&cert)]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let mut json: Value = serde_json::from_str(&fs::read_to_string(&cert).unwrap()).unwrap();
    json["colors"]["1"] = json["colors"]["0"].clone();
    let bad = write(&dir, "bad.json", &json.to_string());
    let out = boxchi(&["verify", s(&chain), s(&bad)]);
    assert_eq!(code(&out), 5);
    assert!(stdout(&out).contains("0-1"), "{}", stdout(&out));
}

#[test]
fn mismatched_vertex_sets_exit_two() {
    let dir = TempDir::new().unwrap();
    let three = gen(&dir, "3.boxes", "grid-disjoint", 3, 2, 0);
    let four = gen(&dir, "4.boxes", "grid-disjoint", 4, 2, 0);
    let cert = dir.path().join("c.json");
    let out = boxchi(&["color", s(&three), "--r", "1", "--k", "1", "--out", s(&cert)]);
    assert_eq!(code(&out), 0);
    let out = boxchi(&["verify", s(&four), s(&cert)]);
    assert_eq!(code(&out), 2, "{}", stderr(&out));
}

#[test]
fn parse_errors_exit_two() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.boxes", "2 1\n0 1 zero 1\n");
    let out = boxchi(&["oracle", s(&bad), "omega"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("line 2"), "{}", stderr(&out));
}

#[test]
fn oracles_on_small_instances() {
    let dir = TempDir::new().unwrap();
    let k5 = gen(&dir, "k5.boxes", "nested-chain", 5, 2, 0);
    let out = boxchi(&["oracle", s(&k5), "omega"]);
    assert_eq!((code(&out), stdout(&out).trim()), (0, "5"));
    let out = boxchi(&["oracle", s(&k5), "alpha"]);
    assert_eq!(stdout(&out).trim(), "1");

    let grid = gen(&dir, "g.boxes", "grid-disjoint", 9, 2, 0);
    let out = boxchi(&["oracle", s(&grid), "ehcheck"]);
    assert_eq!(code(&out), 0);
    let line = stdout(&out);
    assert!(line.contains("n=9 ") && line.contains("alpha^d*omega=81 ") && line.ends_with("pass\n"), "{line}");
}

#[test]
fn oracle_limit_refusal_exits_four() {
    let dir = TempDir::new().unwrap();
    let boxes = gen(&dir, "r.boxes", "uniform-random", 12, 2, 3);
    let out = boxchi(&["--chi-limit", "5", "oracle", s(&boxes), "chi"]);
    assert_eq!(code(&out), 4, "{}", stderr(&out));
    let out = boxchi(&["--clique-limit", "0", "oracle", s(&boxes), "omega"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn decompose_rows() {
    let dir = TempDir::new().unwrap();
    let crossing = write(&dir, "x.boxes", "1 2\n0 2\n1 3\n");
    let out = boxchi(&["decompose", s(&crossing)]);
    assert_eq!(code(&out), 0);
    let rows: Vec<String> = stdout(&out).lines().skip(1).map(String::from).collect();
    assert_eq!(rows.len(), 4);
    let busy: Vec<&String> = rows.iter().filter(|r| r.split('\t').nth(1) == Some("1")).collect();
    assert_eq!(busy.len(), 2);
    assert!(rows.iter().all(|r| r.ends_with("true\ttrue\ttrue")));

    let boxes = gen(&dir, "r3.boxes", "uniform-random", 10, 3, 4);
    let out = boxchi(&["decompose", s(&boxes)]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).lines().count(), 65);
}

#[test]
fn thread_count_does_not_change_certificates() {
    let dir = TempDir::new().unwrap();
    let star = write(&dir, "star.boxes", STAR);
    for boxes in [gen(&dir, "r.boxes", "uniform-random", 20, 2, 7), star] {
        let run = |threads: &str| {
            let out = boxchi(&["--threads", threads, "color", s(&boxes), "--r", "1", "--k", "2"]);
            assert!(matches!(code(&out), 0 | 3), "{}", stderr(&out));
            out.stdout
        };
        let one = run("1");
        assert_eq!(one, run("4"));
        assert_eq!(one, run("1"));
    }
}
