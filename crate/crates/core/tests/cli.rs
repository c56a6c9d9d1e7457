use std::process::{Command, Output};

use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sl2recog"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn path(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_str().unwrap().to_string()
}

fn construct(dir: &TempDir, name: &str, extra: &[&str]) -> String {
    let out = path(dir, name);
    let mut args = vec!["construct", "--out", &out];
    args.extend_from_slice(extra);
    let o = run(&args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    out
}

#[test]
fn construct_recognize_verify() {
    let dir = TempDir::new().unwrap();
    for (name, extra) in [
        ("nat.json", vec!["--type", "nat", "--p", "7", "--scramble", "3"]),
        ("sym2.json", vec!["--type", "sym2", "--p", "5", "--m", "2", "--scramble", "0x11"]),
        ("sym3.json", vec!["--type", "sym3", "--p", "11"]),
        ("tw.json", vec!["--type", "twist", "--p", "5", "--m", "3", "--twist-power", "1", "--scramble", "4"]),
    ] {
        let module = construct(&dir, name, &extra);
        let cert = path(&dir, &format!("{name}.cert"));
        let o = run(&["recognize", &module, "--out", &cert]);
        assert!(o.status.success(), "{name}: {}", String::from_utf8_lossy(&o.stderr));
        let printed = String::from_utf8(o.stdout).unwrap();
        assert_eq!(printed.trim_end(), std::fs::read_to_string(&cert).unwrap().trim_end());
        let v = run(&["verify", &module, &cert]);
        assert!(v.status.success(), "{name}: {}", String::from_utf8_lossy(&v.stdout));
        let report: serde_json::Value = serde_json::from_slice(&v.stdout).unwrap();
        assert_eq!(report["passed"], true);
    }
}

#[test]
fn certificates_are_reproducible() {
    let dir = TempDir::new().unwrap();
    let module = construct(&dir, "m.json", &["--type", "sym3", "--p", "7", "--m", "2", "--scramble", "9"]);
    let a = run(&["recognize", &module]);
    let b = run(&["recognize", &module]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn meta_does_not_change_the_certificate() {
    let dir = TempDir::new().unwrap();
    let module = construct(&dir, "m.json", &["--type", "sym2", "--p", "7", "--scramble", "2"]);
    let mut v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&module).unwrap()).unwrap();
    assert!(v.get("meta").is_some());
    v.as_object_mut().unwrap().remove("meta");
    let bare = path(&dir, "bare.json");
    std::fs::write(&bare, v.to_string()).unwrap();
    assert_eq!(run(&["recognize", &module]).stdout, run(&["recognize", &bare]).stdout);
}

#[test]
fn tampered_certificate_fails_verification() {
    let dir = TempDir::new().unwrap();
    let module = construct(&dir, "m.json", &["--type", "nat", "--p", "5", "--m", "2", "--scramble", "1"]);
    let cert = path(&dir, "c.json");
    assert!(run(&["recognize", &module, "--out", &cert]).status.success());
    let mut c: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&cert).unwrap()).unwrap();
    let iso = c["iso"].as_array_mut().unwrap();
    iso[0] = serde_json::json!((iso[0].as_u64().unwrap() + 1) % 5);
    std::fs::write(&cert, c.to_string()).unwrap();
    let o = run(&["verify", &module, &cert]);
    assert_eq!(o.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["passed"], false);
}

#[test]
fn rejection_is_json_on_stderr() {
    let dir = TempDir::new().unwrap();
    let module = construct(&dir, "m.json", &["--type", "twist", "--p", "5", "--m", "2"]);
    let o = run(&["recognize", &module]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(v["error"], "Reducible");
    assert!(v["witness"].is_array());
}

#[test]
fn missing_file_is_a_domain_error() {
    let o = run(&["recognize", "/nonexistent/module.json"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(v["error"], "Io");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&[]).status.code(), Some(2));
    assert_eq!(run(&["construct", "--type", "sym5", "--p", "7"]).status.code(), Some(2));
    assert_eq!(run(&["recognize", "x.json", "--seed", "0xZZ"]).status.code(), Some(2));
}

#[test]
fn fields_on_a_layer() {
    let dir = TempDir::new().unwrap();
    let module = construct(&dir, "m.json", &["--type", "sym3", "--p", "7", "--scramble", "5"]);
    let desc = path(&dir, "d.json");
    std::fs::write(&desc, r#"{"layer": 3}"#).unwrap();
    let o = run(&["fields", &module, &desc]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["torus_order"], 6);
    assert_eq!(v["ker_kappa"], 2);
    assert_eq!(v["f_km_order"], 7);
}

#[test]
fn analyze_reports_the_filtration() {
    let dir = TempDir::new().unwrap();
    let module = construct(&dir, "m.json", &["--type", "twist", "--p", "7", "--m", "3", "--scramble", "1"]);
    let o = run(&["analyze", &module, "--torus"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["filtration_dims"], serde_json::json!([0, 3, 9, 12]));
    assert_eq!(v["irreducibility"], "irreducible");
}

#[test]
fn selftest_subset() {
    let o = run(&["selftest", "--criteria", "6,7"]);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(o.status.success(), "{text}");
    assert!(text.contains("PASS"));
}
