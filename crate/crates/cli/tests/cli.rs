use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn fgc(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fgc")).args(args).current_dir(dir).output().unwrap()
}

fn group(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/groups").join(name).to_string_lossy().into_owned()
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

fn modular_cover(dir: &Path) {
    let o = fgc(&["domain", &group("modular.json"), "--center", "0", "2", "--out", "poly.json", "--svg", "poly.svg"], dir);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let o = fgc(&["cover", "build", "--polygon", "poly.json", "--construction", "truncated", "--out", "cover.json"], dir);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn modular_domain_file() {
    let dir = tempfile::tempdir().unwrap();
    let o = fgc(&["domain", &group("modular.json"), "--center", "0", "2", "--out", "poly.json", "--svg", "poly.svg"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let p = json(&dir.path().join("poly.json"));
    assert!((p["area"].as_f64().unwrap() - 1.047198).abs() < 1e-6);
    assert_eq!(p["sides"].as_array().unwrap().len(), 4);
    let svg = std::fs::read_to_string(dir.path().join("poly.svg")).unwrap();
    assert!(svg.starts_with("<svg") && svg.contains("<text"));
}

#[test]
fn cyclic_domain_has_two_free_sides() {
    let dir = tempfile::tempdir().unwrap();
    let o = fgc(&["domain", &group("cyclic4.json"), "--center", "0", "1"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let p = stdout_json(&o);
    let free = p["sides"].as_array().unwrap().iter().filter(|s| s["kind"] == "free").count();
    assert_eq!(free, 2);
    assert_eq!(p["area"], "inf");
}

#[test]
fn input_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"label":"bad","mode":"exact-int","generators":[[[2,1],[1,2]]],"torsion_free":true}"#).unwrap();
    let o = fgc(&["domain", bad.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("determinant"));
    let o = fgc(&["domain", "missing.json"], dir.path());
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn elliptic_center_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let o = fgc(&["domain", &group("modular.json"), "--center", "0", "1"], dir.path());
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn capped_enumeration_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_fgc"))
        .args(["domain", &group("gamma2.json"), "--center", "0", "2"])
        .env("FGC_MAX_ELEMENTS", "3")
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn build_verify_and_distances() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    modular_cover(d);
    let c = json(&d.join("cover.json"));
    assert!(c["elements"].as_array().unwrap().len() <= 10);
    assert_eq!(c["verification"][0]["verified"], true);
    let o = fgc(&["cover", "verify", "--polygon", "poly.json", "--cover", "cover.json", "--seed", "5"], d);
    assert_eq!(o.status.code(), Some(0));

    let o = fgc(&["dist", "--cover", "cover.json", "--p", "0", "2", "--q", "0.4", "2"], d);
    assert_eq!(o.status.code(), Some(0));
    let v = stdout_json(&o)["distance"].as_f64().unwrap();
    assert!((v - 1.02f64.acosh()).abs() < 1e-12);
    let o = fgc(&["dist", "--cover", "cover.json", "--p", "0.1", "1.5", "--q", "0.1", "1.5"], d);
    assert_eq!(stdout_json(&o)["distance"].as_f64().unwrap(), 0.0);

    std::fs::write(d.join("two.json"), "[[0, 2], [0.3, 1.4]]").unwrap();
    let o = fgc(&["ddist", "--cover", "cover.json", "--points", "two.json"], d);
    assert_eq!(o.status.code(), Some(0));
    let r = stdout_json(&o);
    assert_eq!(r["count"], 1);
    assert!(r["normalization"].as_str().unwrap().contains("c = 1"));

    let o = fgc(&["cover", "probe", "--polygon", "poly.json", "--cover", "cover.json", "--pairs", "500"], d);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout_json(&o).as_array().unwrap().len(), c["elements"].as_array().unwrap().len());
}

#[test]
fn identity_cover_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    modular_cover(d);
    let mut c = json(&d.join("cover.json"));
    c["elements"] = serde_json::json!([{"matrix": [1, 0, 0, 1], "provenance": "Manual"}]);
    c["verification"] = serde_json::json!([]);
    std::fs::write(d.join("id.json"), serde_json::to_string(&c).unwrap()).unwrap();
    let o = fgc(&["cover", "verify", "--polygon", "poly.json", "--cover", "id.json", "--pairs", "300"], d);
    assert_eq!(o.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&o.stderr).contains("first witness"));

    let o = fgc(&["dist", "--cover", "id.json", "--p", "0", "2", "--q", "0.4", "2"], d);
    assert_eq!(o.status.code(), Some(5));
    let o = fgc(&["dist", "--cover", "id.json", "--p", "0", "2", "--q", "0.4", "2", "--force"], d);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn lift_respects_bound() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert!(fgc(&["domain", &group("cyclic16.json"), "--center", "0", "1", "--out", "h.json"], d).status.success());
    let o = fgc(&["cover", "build", "--polygon", "h.json", "--construction", "basic", "--pairs", "500", "--out", "hc.json"], d);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let o = fgc(
        &["cover", "lift", "--cover", "hc.json", "--reps", &group("cyclic16_reps.json"), "--group", &group("cyclic4.json"), "--out", "lift.json"],
        d,
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let h = json(&d.join("hc.json"))["elements"].as_array().unwrap().len();
    let l = json(&d.join("lift.json"))["elements"].as_array().unwrap().len();
    assert!(l <= 2 * h);
    assert!(fgc(&["domain", &group("cyclic4.json"), "--center", "0", "1", "--out", "g.json"], d).status.success());
    let o = fgc(&["cover", "verify", "--polygon", "g.json", "--cover", "lift.json", "--pairs", "1000"], d);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn outputs_are_byte_identical_and_round_trip() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    modular_cover(a.path());
    modular_cover(b.path());
    for f in ["poly.json", "cover.json", "poly.svg"] {
        assert_eq!(std::fs::read(a.path().join(f)).unwrap(), std::fs::read(b.path().join(f)).unwrap(), "{f}");
    }
    use geocover::io::{from_json, to_json, CoverFile, PolygonFile};
    let text = std::fs::read_to_string(a.path().join("poly.json")).unwrap();
    assert_eq!(to_json(&from_json::<PolygonFile>(&text).unwrap()).unwrap(), text);
    let text = std::fs::read_to_string(a.path().join("cover.json")).unwrap();
    assert_eq!(to_json(&from_json::<CoverFile>(&text).unwrap()).unwrap(), text);
}

#[test]
fn second_kind_nielsen_build() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert!(fgc(&["domain", &group("second_kind.json"), "--center", "0", "2", "--out", "p.json"], d).status.success());
    let o = fgc(&["cover", "build", "--polygon", "p.json", "--construction", "nielsen", "--depth", "2", "--pairs", "1000"], d);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout_json(&o)["construction"], "nielsen");
}
