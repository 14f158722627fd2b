use std::path::Path;
use std::process::{Command, Output};

use groupoid_cover::document::groupoid_to_json;
use groupoid_cover::fixtures;
use serde_json::{json, Value};
use tempfile::TempDir;

fn gcover(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gcover"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, v: &Value) {
    std::fs::write(dir.join(name), serde_json::to_string(v).unwrap()).unwrap();
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("JSON on stdout")
}

fn c4_workspace() -> TempDir {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "c4.json", &groupoid_to_json(&fixtures::c4()));
    write(
        dir.path(),
        "id.json",
        &json!({
            "source": "c4.json",
            "target": "c4.json",
            "objects": {"*": "*"},
            "arrows": {"0": "0", "1": "1", "2": "2", "3": "3"},
        }),
    );
    dir
}

#[test]
fn identity_is_a_one_sheeted_covering() {
    let dir = c4_workspace();
    let o = gcover(dir.path(), &["check-cover", "id.json"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout_json(&o), json!({"covering": true, "fold": 1}));
}

#[test]
fn collapsing_i2_is_rejected_at_x() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "i2.json", &groupoid_to_json(&fixtures::i2()));
    write(
        dir.path(),
        "collapse_i2.json",
        &json!({
            "source": "i2.json",
            "target": {"group_table": [[0]], "object": "*"},
            "objects": {"x": "*", "y": "*"},
            "arrows": {"1x": "0", "1y": "0", "a": "0", "a-": "0"},
        }),
    );
    let o = gcover(dir.path(), &["check-cover", "collapse_i2.json"]);
    assert_eq!(o.status.code(), Some(1));
    let r = stdout_json(&o);
    assert_eq!(r["covering"], json!(false));
    assert_eq!(r["object"], json!("x"));
    assert_eq!((r["total_star"].as_u64(), r["base_star"].as_u64()), (Some(2), Some(1)));
}

#[test]
fn s3_lattice_dot_has_six_nodes() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "s3.json", &groupoid_to_json(&fixtures::s3()));
    let o = gcover(dir.path(), &["lattice", "s3.json", "--dot"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.starts_with("digraph lattice {"));
    assert!(text.contains("rankdir=BT"));
    let nodes: Vec<&str> = text.lines().filter(|l| l.contains("[label=")).collect();
    assert_eq!(nodes.len(), 6);
    assert_eq!(nodes.iter().filter(|l| l.contains("regular=-")).count(), 3);
    assert_eq!(nodes.iter().filter(|l| l.contains("fold=3,")).count(), 3);
    assert_eq!(text.lines().filter(|l| l.contains("->")).count(), 8);
}

#[test]
fn output_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let a = gcover(dir.path(), &["universal", "S3"]);
    let b = gcover(dir.path(), &["universal", "S3"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert!(!a.stdout.contains(&b'\r'));
}

#[test]
fn built_covers_reload_and_report_their_fold() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("half.json");
    let o = gcover(dir.path(), &["build-cover", "C4", "--subgroup", "2", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let o = gcover(dir.path(), &["fold", "half.json"]);
    assert_eq!(stdout_json(&o), json!({"fold": 2}));
    let o = gcover(dir.path(), &["regular", "half.json"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn non_regular_cover_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t.json");
    gcover(dir.path(), &["build-cover", "S3", "--subgroup", "(12)", "--out", out.to_str().unwrap()]);
    let o = gcover(dir.path(), &["regular", "t.json"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout_json(&o), json!({"regular": false}));
}

#[test]
fn malformed_documents_exit_two_with_a_path() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.json"), "{not json").unwrap();
    let o = gcover(dir.path(), &["components", "bad.json"]);
    assert_eq!(o.status.code(), Some(2));
    write(
        dir.path(),
        "dangling.json",
        &json!({"objects": ["x"], "arrows": [{"name": "1", "dom": "x", "cod": "z"}], "compose": []}),
    );
    let o = gcover(dir.path(), &["components", "dangling.json"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("$.arrows[0].cod"), "{err}");
}

#[test]
fn validate_reports_violations() {
    let dir = tempfile::tempdir().unwrap();
    // C4 with 1∘1 changed to 3: inverses survive, associativity does not
    let mut bad = groupoid_to_json(&fixtures::c4());
    for row in bad["compose"].as_array_mut().unwrap() {
        if row[0] == json!("1") && row[1] == json!("1") {
            row[2] = json!("3");
        }
    }
    write(dir.path(), "bad.json", &bad);
    let o = gcover(dir.path(), &["validate", "bad.json"]);
    assert_eq!(o.status.code(), Some(1));
    let r = stdout_json(&o);
    assert_eq!(r["valid"], json!(false));
    assert!(!r["violations"].as_array().unwrap().is_empty());
    write(dir.path(), "c4.json", &groupoid_to_json(&fixtures::c4()));
    assert_eq!(gcover(dir.path(), &["validate", "c4.json"]).status.code(), Some(0));
}

#[test]
fn characteristic_map_needs_whole_components() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("omega.json");
    gcover(dir.path(), &["omega", "I2", "--out", out.to_str().unwrap()]);
    let o = gcover(dir.path(), &["char", "omega.json", "--sub", "t:x,t:y"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout_json(&o)["true_components"], json!([0]));
    let o = gcover(dir.path(), &["char", "omega.json", "--sub", "t:x"]);
    assert_eq!(o.status.code(), Some(1));
    let o = gcover(dir.path(), &["subobjects", "omega.json"]);
    assert_eq!(stdout_json(&o)["count"], json!(4));
}

#[test]
fn presheaf_round_trip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("u.json");
    let f = dir.path().join("f.json");
    gcover(dir.path(), &["universal", "C4", "--out", p.to_str().unwrap()]);
    let o = gcover(dir.path(), &["to-presheaf", "u.json", "--out", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let o = gcover(dir.path(), &["from-presheaf", "f.json"]);
    assert_eq!(o.status.code(), Some(0));
    write(dir.path(), "back.json", &stdout_json(&o));
    let o = gcover(dir.path(), &["equiv", "u.json", "back.json"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout_json(&o)["equivalent"], json!(true));
}

#[test]
fn pullback_of_universal_c4_has_four_components() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("u.json");
    gcover(dir.path(), &["universal", "C4", "--out", p.to_str().unwrap()]);
    let o = gcover(dir.path(), &["pullback", "u.json", "u.json"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout_json(&o)["components"], json!(4));
}

#[test]
fn selftest_passes() {
    let o = gcover(Path::new("."), &["selftest"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().filter(|l| l.contains(" PASS ")).count(), 10);
}
