use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_curvmorse"))
        .current_dir(root())
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    serde_json::from_str(&stdout(args)).unwrap()
}

/// Splits a CSV artifact into its run-config line and data rows.
fn csv(args: &[&str]) -> (Value, Vec<Vec<String>>) {
    let text = stdout(args);
    let mut lines = text.lines();
    let config = lines
        .next()
        .unwrap()
        .strip_prefix("# run_config: ")
        .expect("config line");
    let rows = lines.map(|l| l.split(',').map(str::to_string).collect()).collect();
    (serde_json::from_str(config).unwrap(), rows)
}

fn golden(name: &str) -> String {
    std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)).unwrap()
}

#[test]
fn icosahedron_gauss_bonnet() {
    let v = json(&["verify", "data/icosahedron.off", "--suite", "gauss-bonnet"]);
    assert_eq!(v["chi"], 2);
    assert_eq!(v["holds"], true);
    assert!((v["total"].as_f64().unwrap() - 2.0).abs() <= 1e-9);
    assert_eq!(v["config"]["options"]["suite"], "gauss-bonnet");
}

#[test]
fn torus_forman_scalar_betti() {
    let (config, rows) = csv(&["ph", "data/csaszar-torus.off", "--filtration", "forman-scalar"]);
    assert_eq!(config["options"]["betti"], "1,2,1");
    assert_eq!(rows[0], ["dim", "birth", "death"]);
    let essential: Vec<&str> = rows[1..]
        .iter()
        .filter(|r| r[2] == "inf")
        .map(|r| r[0].as_str())
        .collect();
    assert_eq!(essential, ["0", "1", "1", "2"]);
}

#[test]
fn tetrahedron_random_indices_sum_to_two() {
    let v = json(&["index", "data/tetrahedron.off", "--random", "100", "--seed", "7"]);
    let reports = v["reports"].as_array().unwrap();
    assert_eq!(reports.len(), 100);
    for r in reports {
        assert_eq!(r["sum"], "2");
        assert_eq!(r["surface_agrees"], true);
    }
    assert_eq!(v["all_hold"], true);
}

#[test]
fn explicit_direction_on_octahedron() {
    let v = json(&["index", "data/octahedron.off", "--direction", "0.1,0.2,0.97"]);
    assert_eq!(v["reports"][0]["sum"], "2");
    let out = run(&["index", "data/octahedron.off", "--direction", "1,0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn stratify_book_matches_golden() {
    let text = stdout(&["stratify", "data/book.json"]);
    assert_eq!(text, golden("stratify_book.json"));
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["chi_s"], "2");
    let spine = v["strata"]
        .as_array()
        .unwrap()
        .iter()
        .find(|s| s["simplex"] == serde_json::json!([1, 2]))
        .unwrap();
    assert_eq!(spine["r"], 3);
}

#[test]
fn combinatorial_curvature_matches_golden() {
    let args = ["curvature", "data/icosahedron.off", "--kind", "combinatorial"];
    assert_eq!(stdout(&args), golden("curvature_icosahedron_combinatorial.csv"));
    let (_, rows) = csv(&args);
    assert_eq!(rows.len(), 13);
    // Every icosahedron vertex has degree 5.
    assert!(rows[1..].iter().all(|r| r[1] == "1/6"));
    let (_, rows) = csv(&[
        "curvature",
        "data/icosahedron.off",
        "--kind",
        "combinatorial",
        "--third",
    ]);
    assert!(rows[1..].iter().all(|r| r[1] == "1/3"));
}

#[test]
fn verify_suites_hold_on_corpus() {
    for (input, suite) in [
        ("data/octahedron.off", "cpt"),
        ("data/genus-two.off", "cpt"),
        ("data/octahedral-ball.json", "cpt"),
        ("data/icosahedron.off", "egregium"),
        ("data/book.json", "stratified-cpt"),
        ("data/two-triangles.json", "stratified-cpt"),
        ("data/octahedral-ball.json", "stratified-egregium"),
        ("data/cube-corner.json", "open-star"),
        ("data/csaszar-torus.off", "forman"),
    ] {
        let v = json(&["verify", input, "--suite", suite, "--samples", "2000"]);
        assert_eq!(v["holds"], true, "{input} {suite}");
    }
}

#[test]
fn stratified_euler_of_two_triangles_is_one() {
    let v = json(&["verify", "data/two-triangles.json", "--suite", "stratified-cpt"]);
    assert_eq!(v["chi_s"], "1");
    assert_eq!(v["checks"].as_array().unwrap().len(), 50);
}

#[test]
fn forman_report_shows_printed_gap() {
    let v = json(&["verify", "data/icosahedron.off", "--suite", "forman"]);
    assert_ne!(v["gap_report"]["max_vertex_printed_gap"], "0");
    assert_eq!(v["genus_relation"]["genus"], 0);
}

#[test]
fn compare_reports_distance() {
    let v = json(&["compare", "data/icosahedron.off", "--filtrations", "height,defect"]);
    assert_eq!(v["filtrations"], serde_json::json!(["height", "defect"]));
    assert_eq!(v["essential_count_mismatch"], false);
    assert!(v["distance"].as_f64().unwrap() >= 0.0);
    let same = json(&["compare", "data/icosahedron.off", "--filtrations", "defect,defect"]);
    assert_eq!(same["distance"], 0.0);
    let out = run(&["compare", "data/icosahedron.off", "--filtrations", "defect"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn subdivision_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sd.json");
    let path = path.to_str().unwrap();
    stdout(&["subdivide", "data/tetrahedron.json", "-o", path]);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(v["run_config"]["command"], "subdivide");
    // 14 barycenters, 36 edges, 24 triangles.
    assert_eq!(v["simplices"].as_array().unwrap().len(), 24);
    let gb = json(&["verify", path, "--suite", "gauss-bonnet"]);
    assert_eq!(gb["chi"], 2);
    assert_eq!(gb["holds"], true);
}

#[test]
fn graph_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let edges = dir.path().join("g.edges");
    std::fs::write(&edges, "a b 1.0\nb c 2.0\nc a 3.0\n").unwrap();
    let e = edges.to_str().unwrap();
    let (_, rows) = csv(&["ph", e, "--format", "edge-list", "--filtration", "forman-ricci"]);
    let essential = rows[1..].iter().filter(|r| r[2] == "inf").count();
    assert_eq!(essential, 2);
    let v = json(&["verify", e, "--format", "edge-list", "--suite", "open-star"]);
    assert_eq!(v["holds"], true);
    let hyper = dir.path().join("h.txt");
    std::fs::write(&hyper, "[[1, 2, 3], [3, 4]]\n").unwrap();
    let v = json(&[
        "verify",
        hyper.to_str().unwrap(),
        "--format",
        "hyperedge-list",
        "--suite",
        "open-star",
    ]);
    assert_eq!(v["lhs"], 1);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    assert_eq!(run(&["stratify", bad.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(run(&["stratify", "data/missing.json"]).status.code(), Some(2));
    assert_eq!(
        run(&["curvature", "data/path.json", "--kind", "nope"]).status.code(),
        Some(2)
    );
    // A path is not a surface.
    assert_eq!(
        run(&["verify", "data/path.json", "--suite", "gauss-bonnet"])
            .status
            .code(),
        Some(3)
    );
    // One Monte-Carlo draw per vertex cannot land within 4 sigma.
    let out = run(&[
        "verify",
        "data/icosahedron.off",
        "--suite",
        "egregium",
        "--samples",
        "1",
        "--seed",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(4));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["holds"], false);
}

#[test]
fn seed_changes_random_output() {
    let a = stdout(&["index", "data/csaszar-torus.off", "--random", "3", "--seed", "1"]);
    let b = stdout(&["index", "data/csaszar-torus.off", "--random", "3", "--seed", "2"]);
    assert_ne!(a, b);
}
