use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use setval_core::doc::{Document, EconomyDoc};
use setval_core::economy::{AbstractEconomy, Agent};
use setval_core::linear::Affine;
use setval_core::maps::PiecewiseMap;
use setval_core::{BoxSet, FlaggedBox, FlaggedInterval, Q};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn setval(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_setval")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn records(out: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap_or_else(|e| panic!("not a JSON line: {l}: {e}")))
        .collect()
}

fn unit() -> FlaggedInterval<Q> {
    FlaggedInterval::closed(Q::from_integer(0), Q::from_integer(1)).unwrap()
}

/// Two agents choosing in `[0, 1]` with no preferences and budgets from `b`.
fn write_economy(dir: &Path, b: impl Fn(&BoxSet<Q>, usize) -> PiecewiseMap<Q>) -> PathBuf {
    let choice = FlaggedBox::new(vec![unit()]);
    let domain = BoxSet::from_box(FlaggedBox::cube(2, unit()));
    let agents = (0..2)
        .map(|i| Agent {
            name: format!("{}", i + 1),
            choice: choice.clone(),
            d: BoxSet::from_box(choice.clone()),
            a: b(&domain, i),
            b: b(&domain, i),
            p: PiecewiseMap::constant(domain.clone(), &BoxSet::empty(1)),
        })
        .collect();
    let doc = Document::Economy(EconomyDoc { name: "trivial".into(), economy: AbstractEconomy::new(agents).unwrap() });
    let path = dir.join("trivial.econ");
    std::fs::write(&path, doc.to_text()).unwrap();
    path
}

#[test]
fn continuity_checks_on_the_first_example() {
    let map = data("ex2_1.map");
    let map = map.to_str().unwrap();
    assert_eq!(code(&setval(&["check-map", map, "--property", "w-usc"])), 0);
    let out = setval(&["check-map", map, "--property", "usc"]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stdout).contains("[confirmed]"));
}

#[test]
fn malformed_documents_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.map");
    std::fs::write(&path, "{\"kind\": \"map\", ").unwrap();
    let out = setval(&["check-map", path.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("broken.map"));
    assert_eq!(code(&setval(&["check-map", "/nonexistent/x.map"])), 2);
    // a pair is not a map
    assert_eq!(code(&setval(&["check-map", data("ex2_2.pair").to_str().unwrap(), "--property", "usc"])), 2);
}

#[test]
fn equilibria_of_the_two_agent_example() {
    let econ = data("ex4_1_n2.econ");
    let out = setval(&["find-equilibria", econ.to_str().unwrap(), "--step", "0.125", "--out", "records"]);
    assert_eq!(code(&out), 0);
    let recs = records(&out);
    assert_eq!(recs[0]["command"], "find-equilibria");
    assert_eq!(recs[0]["step"], "0.125");
    assert!(recs[1..].iter().any(|r| r["point"] == serde_json::json!([1.5, 1.5]) && r["valid"] == true));
}

#[test]
fn trivial_and_impossible_economies() {
    let dir = tempfile::tempdir().unwrap();
    let free = write_economy(dir.path(), |dom, _| PiecewiseMap::constant(dom.clone(), &BoxSet::from_intervals(vec![unit()])));
    let out = setval(&["find-equilibria", free.to_str().unwrap(), "--step", "0.25"]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stdout).contains("25 equilibria among 25 points"));

    // B_i(x) = {x_i + 2} never holds x_i
    let stuck = write_economy(dir.path(), |dom, i| {
        let shifted = Affine::constant(2, Q::from_integer(2)).add(&Affine::var(2, i, Q::from_integer(1), Q::from_integer(0)));
        PiecewiseMap::interval_map(dom.clone(), shifted.clone(), shifted).unwrap()
    });
    assert_eq!(code(&setval(&["find-equilibria", stuck.to_str().unwrap(), "--step", "0.25"])), 3);
}

#[test]
fn fixed_points_of_the_first_example() {
    let out = setval(&["find-fixed-points", data("ex2_1.map").to_str().unwrap(), "--step", "1/16"]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stdout).contains("(1) certified"));
}

#[test]
fn exact_and_float_runs_agree() {
    let map = data("ex2_1.map");
    for property in ["usc", "w-usc", "almost-w-usc"] {
        let float = setval(&["check-map", map.to_str().unwrap(), "--property", property, "--step", "1/16"]);
        let exact = setval(&["check-map", map.to_str().unwrap(), "--property", property, "--step", "1/16", "--exact"]);
        assert_eq!(code(&float), code(&exact), "{property}");
    }
}

#[test]
fn information_economy_pipeline() {
    let out = setval(&["build-radner", data("radner_toy.econ").to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("clause (1) holds"));
    assert!(!text.contains("FAILS"));
    assert_eq!(code(&setval(&["build-radner", data("radner_toy.econ").to_str().unwrap(), "--step", "0.3"])), 2);
}

#[test]
fn reproduce_paper_defaults_and_overrides() {
    assert_eq!(code(&setval(&["reproduce-paper"])), 0);
    assert_eq!(code(&setval(&["reproduce-paper", "--step", "0.5"])), 0);
    assert_eq!(code(&setval(&["reproduce-paper", "--step", "0.3"])), 2);
    assert_eq!(code(&setval(&["reproduce-paper", "--step", "-1"])), 2);

    let out = setval(&["reproduce-paper", "--step", "1/8", "--out", "records"]);
    assert_eq!(code(&out), 0);
    let recs = records(&out);
    assert_eq!(recs[0]["command"], "reproduce-paper");
    assert!(recs[1..].iter().filter(|r| r.get("check").is_some()).all(|r| r["passed"] == true));
}

#[test]
fn out_writes_to_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.jsonl");
    let out = setval(&["check-map", data("ex2_1.map").to_str().unwrap(), "--property", "w-usc", "--format", "records", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.lines().all(|l| serde_json::from_str::<Value>(l).is_ok()));
}
