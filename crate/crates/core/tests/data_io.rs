use std::fs;
use std::path::{Path, PathBuf};

use gridcap::data::{load_system_inputs, write_system_inputs, SystemDataset, MANDATORY_TABLES};
use gridcap::fixtures::regional_dataset;

fn shipped_toy() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/toy")
}

fn written_copy() -> (tempfile::TempDir, SystemDataset) {
    let dir = tempfile::tempdir().unwrap();
    let ds = regional_dataset();
    write_system_inputs(&ds, dir.path()).unwrap();
    (dir, ds)
}

/// Replaces the first line containing `needle` in a table.
fn edit_line(dir: &Path, file: &str, needle: &str, replacement: &str) -> usize {
    let path = dir.join(file);
    let text = fs::read_to_string(&path).unwrap();
    let mut lines: Vec<String> = text.lines().map(str::to_owned).collect();
    let at = lines.iter().position(|l| l.contains(needle)).unwrap_or_else(|| panic!("{needle} not in {file}"));
    lines[at] = replacement.to_owned();
    fs::write(&path, lines.join("\n") + "\n").unwrap();
    at + 1
}

fn remove_line(dir: &Path, file: &str, needle: &str) {
    let path = dir.join(file);
    let text = fs::read_to_string(&path).unwrap();
    let kept: Vec<&str> = text.lines().filter(|l| !l.starts_with(needle)).collect();
    fs::write(&path, kept.join("\n") + "\n").unwrap();
}

#[test]
fn written_dataset_reloads_identically() {
    let (dir, ds) = written_copy();
    let back = load_system_inputs(dir.path()).unwrap();
    assert_eq!(back, ds);
}

#[test]
fn writing_twice_gives_identical_bytes() {
    let (a, _) = written_copy();
    let (b, _) = written_copy();
    for entry in fs::read_dir(a.path()).unwrap() {
        let name = entry.unwrap().file_name();
        assert_eq!(fs::read(a.path().join(&name)).unwrap(), fs::read(b.path().join(&name)).unwrap(), "{name:?}");
    }
}

#[test]
fn shipped_toy_matches_fixture() {
    let ds = load_system_inputs(&shipped_toy()).unwrap();
    assert_eq!(ds, regional_dataset());
}

#[test]
fn missing_mandatory_table_is_named() {
    for table in MANDATORY_TABLES {
        let (dir, _) = written_copy();
        let path = dir.path().join(table);
        if path.exists() {
            fs::remove_file(&path).unwrap();
        }
        let err = load_system_inputs(dir.path()).unwrap_err();
        assert_eq!(err.file.as_deref(), Some(path.as_path()), "{table}: {err}");
        assert!(err.message.contains("missing table"), "{err}");
    }
}

#[test]
fn unknown_zone_points_at_project_row() {
    let (dir, _) = written_copy();
    let line = edit_line(
        dir.path(),
        "projects.csv",
        "solar_south,",
        "solar_south,east,vre_gen,solar,true,,,,0,,,,,,,0,,,",
    );
    let err = load_system_inputs(dir.path()).unwrap_err();
    assert_eq!(err.line, Some(line));
    assert!(err.to_string().contains("projects.csv"), "{err}");
    assert!(err.message.contains("unknown zone `east`"), "{err}");
}

#[test]
fn bad_number_points_at_cost_row() {
    let (dir, _) = written_copy();
    let line = edit_line(dir.path(), "costs.csv", "battery,", "battery,cheap,150,8,0,15");
    let err = load_system_inputs(dir.path()).unwrap_err();
    assert_eq!(err.line, Some(line), "{err}");
    assert!(err.message.contains("not a finite number"), "{err}");
}

#[test]
fn missing_hour_is_listed() {
    let (dir, _) = written_copy();
    remove_line(dir.path(), "demand.csv", "south,3,14,7,");
    let err = load_system_inputs(dir.path()).unwrap_err();
    assert!(err.to_string().contains("demand.csv"), "{err}");
    assert!(err.message.contains("south"), "{err}");
}

#[test]
fn duplicate_hour_names_both_lines() {
    let (dir, _) = written_copy();
    let path = dir.path().join("demand.csv");
    let mut text = fs::read_to_string(&path).unwrap();
    text.push_str("north,1,1,0,99\n");
    fs::write(&path, text).unwrap();
    let err = load_system_inputs(dir.path()).unwrap_err();
    assert!(err.message.contains("duplicate hour for `north` (first on line 2)"), "{err}");
}

#[test]
fn capacity_factors_only_for_variable_renewables() {
    let (dir, _) = written_copy();
    let path = dir.path().join("capacity_factors.csv");
    let mut text = fs::read_to_string(&path).unwrap();
    text.push_str("gas_north,1,1,0,0.5\n");
    fs::write(&path, &text).unwrap();
    let err = load_system_inputs(dir.path()).unwrap_err();
    assert!(err.message.contains("non-VRE project `gas_north`"), "{err}");
    assert_eq!(err.line, Some(text.lines().count()), "{err}");
}

#[test]
fn semantic_errors_are_located() {
    let (dir, _) = written_copy();
    // efficiency above one is caught by dataset validation, not parsing
    let line = edit_line(
        dir.path(),
        "projects.csv",
        "electrolyzer_north,",
        "electrolyzer_north,north,p2g,electrolyzer,true,1.4,,,0,,,,,,,0,,,",
    );
    let err = load_system_inputs(dir.path()).unwrap_err();
    assert_eq!(err.line, Some(line), "{err}");
    assert!(err.to_string().contains("projects.csv"), "{err}");
}

#[test]
fn comments_and_blank_cells_are_tolerated() {
    let (dir, ds) = written_copy();
    let path = dir.path().join("zones.csv");
    let text = fs::read_to_string(&path).unwrap();
    fs::write(&path, format!("# two zones\n{}", text.replace(',', " , "))).unwrap();
    assert_eq!(load_system_inputs(dir.path()).unwrap(), ds);
}

#[test]
fn not_a_directory() {
    let err = load_system_inputs(Path::new("/definitely/not/here")).unwrap_err();
    assert!(err.message.contains("not found"));
}
