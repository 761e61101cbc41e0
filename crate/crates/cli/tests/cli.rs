use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name).display().to_string()
}

fn ptc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ptc")).args(args).output().expect("ptc runs")
}

fn stdout(args: &[&str]) -> String {
    let out = ptc(args);
    assert!(out.status.success(), "ptc {args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

/// Compares with `tests/golden/<name>.txt`; `UPDATE_GOLDEN=1` rewrites it.
fn golden(name: &str, actual: &str) {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(format!("{name}.txt"));
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        fs::write(&path, actual).unwrap();
    }
    let want = fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing golden file {}", path.display()));
    assert_eq!(actual, want, "golden {name}");
}

#[test]
fn degree_three_count_and_recursion() {
    let d3 = data("d3.json");
    let count = stdout(&["count", "--delta", &d3, "--laurent", "--normalize", "--seed", "7"]);
    assert_eq!(count.trim(), "y^-1 + 10 + y");
    golden("count_d3_laurent", &count);
    assert_eq!(stdout(&["recurse", "--delta", &d3, "--hbar", "0"]).trim(), "12");
    let recurse = stdout(&["recurse", "--delta", &d3, "--laurent"]);
    assert_eq!(recurse, count);
}

#[test]
fn low_degree_goldens() {
    for d in ["d1", "d2"] {
        let delta = data(&format!("{d}.json"));
        let count = stdout(&["count", "--delta", &delta, "--laurent", "--normalize", "--seed", "7"]);
        let recurse = stdout(&["recurse", "--delta", &delta, "--laurent"]);
        assert_eq!(count, recurse);
        golden(&format!("count_{d}_laurent"), &count);
    }
}

#[test]
fn real_delta_sets_agree_between_pipelines() {
    for name in ["real3", "real4", "real5"] {
        let delta = data(&format!("{name}.json"));
        let count = stdout(&["count", "--delta", &delta, "--hbar", "0", "--seed", "11"]);
        let recurse = stdout(&["recurse", "--delta", &delta, "--hbar", "0", "--no-normalize"]);
        assert_eq!(count, recurse, "{name}");
        golden(&format!("count_{name}_hbar0"), &count);
        let count: f64 = stdout(&["count", "--delta", &delta, "--hbar", "0.5", "--seed", "11"]).trim().parse().unwrap();
        let recurse: f64 =
            stdout(&["recurse", "--delta", &delta, "--hbar", "0.5", "--no-normalize"]).trim().parse().unwrap();
        assert!((count - recurse).abs() <= 1e-9 * count.abs().max(1.0), "{name}: {count} vs {recurse}");
    }
}

#[test]
fn realize_writes_svg_and_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("out.svg");
    let svg = svg.to_str().unwrap();
    stdout(&["realize", "--graph", &data("tripod.json"), "--delta", &data("d1.json"), "--svg", svg]);
    assert!(fs::read_to_string(svg).unwrap().starts_with("<svg"));

    let curve = stdout(&["--format", "json", "realize", "--graph", &data("h.json"), "--delta", &data("square.json")]);
    let path = dir.path().join("h.json");
    fs::write(&path, &curve).unwrap();
    let again = stdout(&["--format", "json", "dualize", "--curve", path.to_str().unwrap()]);
    let sub: Value = serde_json::from_str(&again).unwrap();
    assert_eq!(sub["area"], "1");
    assert_eq!(sub["cells"].as_array().unwrap().len(), 2);
    let direct = stdout(&["--format", "json", "dualize", "--graph", &data("h.json"), "--delta", &data("square.json")]);
    assert_eq!(direct, again);
}

#[test]
fn intersect_reports_bezout() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let tripod = data("tripod.json");
    let d1 = data("d1.json");
    fs::write(&a, stdout(&["--format", "json", "realize", "--graph", &tripod, "--delta", &d1])).unwrap();
    fs::write(&b, stdout(&["--format", "json", "realize", "--graph", &tripod, "--delta", &d1, "--at", "3,1"])).unwrap();
    let out = stdout(&["intersect", "--first", a.to_str().unwrap(), "--second", b.to_str().unwrap()]);
    golden("intersect_tripods", &out);
    let r: Value = serde_json::from_str(&stdout(&[
        "--format",
        "json",
        "intersect",
        "--first",
        a.to_str().unwrap(),
        "--second",
        b.to_str().unwrap(),
    ]))
    .unwrap();
    assert_eq!(r["total"], "1");
    assert_eq!(r["bezout"]["equality"], true);
    assert_eq!(r["bezout"]["homothetic"], true);
}

#[test]
fn types_through_jacobi_and_weight() {
    let types = stdout(&["types", "--n", "3"]);
    assert_eq!(types.lines().count(), 6);
    golden("types_n3", &types);
    let first = types.lines().next().unwrap();
    let w = stdout(&["weight", "--delta", &data("d1.json"), "--type", first, "--laurent"]);
    assert!(w.lines().nth(1).unwrap().starts_with("multiplicity"));
    let through = stdout(&["through", "--delta", &data("d1.json"), "--points", &data("p2.json")]);
    golden("through_d1", &through);
    let dims = stdout(&["jacobi", "--n", "4"]);
    assert!(dims.contains("dimension 2"), "{dims}");
    let lie = stdout(&["jacobi", "--delta", &data("real4.json"), "--hbar", "0.5"]);
    assert!(lie.starts_with("cycle verified"), "{lie}");
    let cat = stdout(&["jacobi", "--delta", &data("real4.json"), "--caterpillar", "0,1"]);
    assert!(cat.starts_with("cycle verified"), "{cat}");
}

#[test]
fn float_mode_and_json_output() {
    let exact = stdout(&["count", "--delta", &data("real4.json"), "--seed", "2"]);
    let float = stdout(&["--float", "count", "--delta", &data("real4.json"), "--seed", "2"]);
    let (x, y): (f64, f64) = (exact.trim().parse::<ptc_core::Rational>().unwrap().to_f64(), float.trim().parse().unwrap());
    assert!((x - y).abs() < 1e-9);
    let r: Value = serde_json::from_str(&stdout(&[
        "--format",
        "json",
        "count",
        "--delta",
        &data("d2.json"),
        "--laurent",
        "--normalize",
        "--seed",
        "1",
    ]))
    .unwrap();
    assert_eq!(r["value"], "1");
    assert_eq!(r["aut"], 8);
    for entry in r["ledger"].as_array().unwrap() {
        let sol = ptc_core::json::solution_from_json::<ptc_core::Rational>(&entry["solution"]).unwrap();
        assert_eq!(sol.ty.key_string(), entry["type"].as_str().unwrap());
    }
}

#[test]
fn errors_are_structured() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, r#"{"vectors": [[1, 0], [0, 1]]}"#).unwrap();
    let out = ptc(&["count", "--delta", bad.to_str().unwrap()]);
    assert!(!out.status.success());
    let diag: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(diag["subcommand"], "count");
    assert_eq!(diag["error"], "Unbalanced");
    let out = ptc(&["recurse", "--delta", &data("d1.json"), "--xi0", "1,1"]);
    let diag: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(diag["error"], "NonGenericDirection");
    let out = ptc(&["count", "--delta", &data("d1.json"), "--hbar", "2"]);
    let diag: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(diag["error"], "PoleAtHbar");
}

#[test]
fn version_names_the_schema() {
    let v = stdout(&["--version"]);
    assert!(v.contains(&format!("json schema {}", ptc_core::json::SCHEMA_VERSION)), "{v}");
}
