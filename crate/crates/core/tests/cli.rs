use std::process::{Command, Output};

use serde_json::Value;

fn univext(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_univext")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn vform_reports_dimensions() {
    let o = univext(&["vform", "sl2"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("dim V = 1"));
    let o = univext(&["vform", "abelian(3)"]);
    assert!(stdout(&o).contains("dim V = 6"));
}

#[test]
fn bad_json_names_the_jacobi_triple() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(
        &path,
        r#"{"dim": 3, "brackets": [
            {"i": 0, "j": 1, "coeffs": [[1, "1"]]},
            {"i": 0, "j": 2, "coeffs": [[0, "1"]]},
            {"i": 1, "j": 2, "coeffs": [[2, "1"]]}]}"#,
    )
    .unwrap();
    let o = univext(&["vform", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("Jacobi identity fails on basis triple (0, 1, 2)"), "{}", stderr(&o));
}

#[test]
fn malformed_json_reports_position() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    std::fs::write(&path, "{\n  \"dim\": 2,\n  \"brackets\": [\n").unwrap();
    let o = univext(&["h2", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line"), "{}", stderr(&o));
}

#[test]
fn json_algebra_file_is_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("heis.json");
    std::fs::write(&path, r#"{"dim": 3, "brackets": [{"i": 0, "j": 1, "coeffs": [[2, "1"]]}]}"#).unwrap();
    let o = univext(&["h2", path.to_str().unwrap()]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("dim Z2 = 3") && out.contains("dim B2 = 1") && out.contains("dim H2 = 2"), "{out}");
}

#[test]
fn h2_examples() {
    assert!(stdout(&univext(&["h2", "sl2"])).contains("dim H2 = 0"));
    assert!(stdout(&univext(&["h2", "abelian(2)"])).contains("dim H2 = 1"));
    assert!(stdout(&univext(&["h2", "heisenberg3"])).contains("dim H2 = 2"));
}

#[test]
fn json_report_has_the_versioned_schema() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let o = univext(&["verify", "kac-moody", "--window", "2", "--json", path.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stdout(&o));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["suite"], "kac-moody");
    let checks = v["checks"].as_array().unwrap();
    assert!(!checks.is_empty());
    for c in checks {
        assert_eq!(c["status"], "pass");
        assert!(c["check"].is_string() && c["dims"].is_object());
    }
}

#[test]
fn verify_bundles_is_deterministic_given_seed() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    for p in [&a, &b] {
        let o = Command::new(env!("CARGO_BIN_EXE_univext"))
            .args(["verify", "bundles", "--seed", "7", "--json", p.to_str().unwrap()])
            .env("UNIVEXT_THREADS", "2")
            .output()
            .unwrap();
        assert!(o.status.success(), "{}", stdout(&o));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn maier_extend_and_loop_commands() {
    let o = univext(&["maier", "sl2", "bivariate_truncated"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).contains("H2=1"));
    let o = univext(&["extend", "points(2)", "sl2"]);
    assert!(o.status.success(), "{}", stdout(&o));
    let o = univext(&["loop", "so3", "--window", "1"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).contains("sign=-1"));
}

#[test]
fn bundle_fixture_round_trip() {
    let b = univext::bundles::make_twisted_bundle(&univext::liealg::sl2(), 4, &univext::liealg::sl2_exp_ad_e()).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bundle.json");
    std::fs::write(&path, serde_json::to_string_pretty(&b.to_json()).unwrap()).unwrap();
    let o = univext(&["bundle", path.to_str().unwrap()]);
    assert!(o.status.success(), "{}{}", stdout(&o), stderr(&o));
    assert!(stdout(&o).contains("spans=true"));
}

#[test]
fn usage_errors() {
    assert_eq!(univext(&["verify", "everything"]).status.code(), Some(2));
    assert_eq!(univext(&["loop", "sl2", "--window", "0"]).status.code(), Some(2));
    assert_eq!(univext(&["vform", "nothing.json"]).status.code(), Some(2));
    let o = Command::new(env!("CARGO_BIN_EXE_univext")).args(["h2", "sl2"]).env("UNIVEXT_THREADS", "zero").output().unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("UNIVEXT_THREADS"));
}

#[test]
fn failing_check_exits_nonzero() {
    let o = univext(&["maier", "heisenberg3", "truncated_poly(2)"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("first failing check"));
}
