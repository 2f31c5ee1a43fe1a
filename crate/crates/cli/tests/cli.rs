use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use gridcap::data::{write_system_inputs, CalendarSeries};
use gridcap::fixtures::{self, Toy};
use gridcap::scenario::{bundled, EmissionCap, ScenarioConfig};
use indexmap::IndexMap;

fn toy_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/toy")
}

fn gridcap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gridcap"))
        .args(args)
        .env_remove("GRIDCAP_SOLVER")
        .output()
        .unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Writes a one-zone toy with a flat hourly calendar so it can be loaded.
fn flat_calendar(toy: Toy, dir: &Path) {
    let mut ds = toy.dataset;
    let demand = toy.series.demand[0].iter().sum::<f64>() / toy.series.demand[0].len() as f64;
    let cfs = toy
        .series
        .capacity_factors
        .iter()
        .map(|(id, v)| (id.clone(), (0..8760).map(|h| v[h % v.len()]).collect()))
        .collect();
    ds.calendar = Some(CalendarSeries {
        demand: IndexMap::from([(ds.zones[0].id.clone(), vec![demand; 8760])]),
        capacity_factors: cfs,
    });
    write_system_inputs(&ds, dir).unwrap();
}

const QUICK: [&str; 6] = ["--layout", "months", "--months", "1,7", "--days", "median"];

#[test]
fn validate_prints_counts() {
    let o = gridcap(&["validate", "--dataset", s(&toy_dir()), "--scenario", "ze"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let out = String::from_utf8(o.stdout).unwrap();
    assert!(out.contains("zones,2\n") && out.contains("hours,8760\n"), "{out}");
    assert!(out.contains("scenario,ZE,"), "{out}");
}

#[test]
fn input_problems_exit_with_one() {
    let o = gridcap(&["validate", "--dataset", "/no/such/dir"]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("not found"));

    let o = gridcap(&["validate", "--dataset", s(&toy_dir()), "--scenario", "zz"]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("unknown scenario `zz`"));

    assert_eq!(code(&gridcap(&["plan", "--bogus"])), 1);

    let out = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_gridcap"))
        .args(["plan", "--dataset", s(&toy_dir()), "--scenario", "ref", "--out", s(out.path())])
        .env("GRIDCAP_SOLVER", "cplex")
        .output()
        .unwrap();
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("unknown solver"));
}

#[test]
fn duplicate_scenario_names_are_rejected() {
    let out = tempfile::tempdir().unwrap();
    let o = gridcap(&["plan", "--dataset", s(&toy_dir()), "--scenario", "ref", "--scenario", "ref", "--out", s(out.path())]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("given twice"));
}

#[test]
fn plan_report_compare_round() {
    let out = tempfile::tempdir().unwrap();
    let mut h2 = bundled("ze").unwrap();
    h2.name = "ZE-H2".into();
    h2.h2_demand.annual_twh = 0.2;
    let h2_file = out.path().join("ze_h2.toml");
    fs::write(&h2_file, h2.to_toml()).unwrap();

    let toy = toy_dir();
    let mut args = vec!["plan", "--dataset", s(&toy), "--out", s(out.path()), "--jobs", "2"];
    args.extend(QUICK);
    args.extend(["--scenario", "ze", "--scenario", s(&h2_file)]);
    let o = gridcap(&args);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    for name in ["ZE", "ZE-H2"] {
        let dir = out.path().join(name);
        let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.join("result.json")).unwrap()).unwrap();
        assert_eq!(json["scenario"], name);
        assert!(fs::read_to_string(dir.join("report.csv")).unwrap().starts_with("project,"));
        assert!(dir.join("scenario.toml").is_file());
    }

    let o = gridcap(&["compare", "--out", s(out.path()), "--scenario", "ze", "--scenario", s(&h2_file)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let table = fs::read_to_string(out.path().join("compare.csv")).unwrap();
    assert_eq!(table.lines().count(), 3, "{table}");

    let before = fs::read(out.path().join("ZE-H2/report.csv")).unwrap();
    let o = gridcap(&[
        "report", "--out", s(out.path()), "--scenario", s(&h2_file), "--baseline", "ze", "--dataset", s(&toy_dir()),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(fs::read(out.path().join("ZE-H2/report.csv")).unwrap() == before, "report changed on rewrite");
    let lcoh: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.path().join("ZE-H2/lcoh.json")).unwrap()).unwrap();
    assert!(lcoh["system"].as_f64().unwrap() > 0.0, "{lcoh}");
}

#[test]
fn report_without_plan_is_an_input_error() {
    let out = tempfile::tempdir().unwrap();
    let o = gridcap(&["report", "--out", s(out.path()), "--scenario", "ref"]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("gridcap plan"));
}

#[test]
fn infeasible_plan_exits_with_two() {
    let work = tempfile::tempdir().unwrap();
    let data = work.path().join("data");
    flat_calendar(fixtures::must_run_toy(false), &data);
    let mut cfg = ScenarioConfig::named("zero");
    cfg.emission_cap = EmissionCap::Absolute { tonnes: 0.0 };
    let file = work.path().join("zero.toml");
    fs::write(&file, cfg.to_toml()).unwrap();
    let o = gridcap(&["plan", "--dataset", s(&data), "--scenario", s(&file), "--out", s(&work.path().join("out"))]);
    assert_eq!(code(&o), 2, "{}", stderr(&o));
    assert!(stderr(&o).contains("co2_emissioncap"), "{}", stderr(&o));
}

#[test]
fn dispatch_after_plan() {
    let work = tempfile::tempdir().unwrap();
    let data = work.path().join("data");
    flat_calendar(fixtures::flat_toy(), &data);
    let cfg = work.path().join("flat.toml");
    fs::write(&cfg, ScenarioConfig::named("flat").to_toml()).unwrap();
    let out = work.path().join("out");
    let args = ["--dataset", s(&data), "--scenario", s(&cfg), "--out", s(&out)];

    let o = gridcap(&[&["dispatch"][..], &args].concat());
    assert_eq!(code(&o), 1, "dispatch needs a plan first");

    let o = gridcap(&[&["plan"][..], &args].concat());
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let o = gridcap(&[&["dispatch"][..], &args].concat());
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("flat/dispatch.json")).unwrap()).unwrap();
    assert_eq!(report["hours"], 8760);
    assert_eq!(report["unserved_mwh"], 0.0);
}

#[test]
fn export_mps_is_repeatable() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let toy = toy_dir();
    for dir in [&a, &b] {
        let mut args = vec!["export-mps", "--dataset", s(&toy), "--scenario", "r80", "--out", s(dir.path())];
        args.extend(QUICK);
        let o = gridcap(&args);
        assert_eq!(code(&o), 0, "{}", stderr(&o));
    }
    let mps = fs::read(a.path().join("80R.mps")).unwrap();
    assert!(mps.starts_with(b"NAME"));
    assert!(mps == fs::read(b.path().join("80R.mps")).unwrap(), "exports differ");
}
