use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn vlab(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vlab"))
        .args(args)
        .current_dir(cwd)
        .env_remove("VLAB_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap_or(-1)
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn read_json(p: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

fn bundled_catalog() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("catalog.json")
}

fn strip_timings(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("timings");
    v
}

#[test]
fn veldkamp_heisenberg_example() {
    let dir = tempfile::tempdir().unwrap();
    let o = vlab(&["--no-cache", "veldkamp", "--algebra", "heisenberg", "--prime", "3", "--degree", "4", "--out", "r.json"], dir.path());
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let r = read_json(&dir.path().join("r.json"));
    assert_eq!(r["holds_in_window"], Value::Bool(true));
    assert_eq!(r["dims"], serde_json::json!([9, 9]));
    assert_eq!(r["verdict"]["status"], "pass");
}

#[test]
fn counterexample_example() {
    let dir = tempfile::tempdir().unwrap();
    let o = vlab(&["counterexample", "--n", "1", "--m", "1", "--prime", "5", "--out", "c.json"], dir.path());
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("x*y^4"));
    let c = read_json(&dir.path().join("c.json"));
    assert_eq!(c["witness"], "x*y^4");
    assert_eq!(c["verdict"]["status"], "pass");

    // No witness below p: not confirmed, so the inverted convention gives 1.
    let o = vlab(&["counterexample", "--n", "1", "--m", "4", "--prime", "3"], dir.path());
    assert_eq!(code(&o), 1);
    let o = vlab(&["counterexample", "--n", "1", "--m", "5", "--prime", "5"], dir.path());
    assert_eq!(code(&o), 2);
}

#[test]
fn report_over_bundled_catalog() {
    let dir = tempfile::tempdir().unwrap();
    let cat = bundled_catalog();
    let o = vlab(
        &["--no-cache", "--catalog", cat.to_str().unwrap(), "report", "--primes", "3,5,7", "--out", "full.json"],
        dir.path(),
    );
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let md = std::fs::read_to_string(dir.path().join("full.md")).unwrap();
    assert!(md.starts_with("| algebra | p |"));
    assert_eq!(md, stdout(&o));
    let r = read_json(&dir.path().join("full.json"));
    assert_eq!(r["summary"]["unexpected_failures"], 0);
    let algebras = r["algebras"].as_array().unwrap();
    assert!(algebras.len() >= 8);
    for a in algebras {
        for rec in a["records"].as_array().unwrap() {
            for section in ["kw_proxy", "center_window", "veldkamp", "ci", "intersection", "kac_radul", "lift_independence", "m_mod_m2", "central_extension"] {
                let status = rec[section]["verdict"]["status"].as_str().unwrap_or_else(|| panic!("{section} missing"));
                assert!(["pass", "fail", "vacuous"].contains(&status));
            }
        }
    }
}

#[test]
fn second_run_is_served_from_cache() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["--cache-dir", "cache", "veldkamp", "--algebra", "sl2", "--prime", "5", "--out"];
    let first = vlab(&[&args[..], &["a.json"]].concat(), dir.path());
    let second = vlab(&[&args[..], &["b.json"]].concat(), dir.path());
    assert_eq!((code(&first), code(&second)), (0, 0));
    let a = read_json(&dir.path().join("a.json"));
    let b = read_json(&dir.path().join("b.json"));
    assert_eq!(a["timings"]["veldkamp"]["cached"], Value::Bool(false));
    assert_eq!(b["timings"]["veldkamp"]["cached"], Value::Bool(true));
    assert_eq!(strip_timings(a), strip_timings(b));
}

#[test]
fn cache_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_vlab"))
        .args(["veldkamp", "--algebra", "heisenberg", "--prime", "5"])
        .current_dir(dir.path())
        .env("VLAB_CACHE_DIR", "from-env")
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    assert!(std::fs::read_dir(dir.path().join("from-env")).unwrap().count() > 0);
    assert!(!dir.path().join(".vlab-cache").exists());
}

#[test]
fn corrupt_cache_entry_is_recomputed() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["--cache-dir", "cache", "veldkamp", "--algebra", "heisenberg", "--prime", "3", "--out"];
    assert_eq!(code(&vlab(&[&args[..], &["a.json"]].concat(), dir.path())), 0);
    for e in std::fs::read_dir(dir.path().join("cache")).unwrap() {
        std::fs::write(e.unwrap().path(), "{ truncated").unwrap();
    }
    let o = vlab(&[&args[..], &["b.json"]].concat(), dir.path());
    assert_eq!(code(&o), 0);
    assert!(stderr(&o).contains("corrupt"), "{}", stderr(&o));
    let a = read_json(&dir.path().join("a.json"));
    let b = read_json(&dir.path().join("b.json"));
    assert_eq!(b["timings"]["veldkamp"]["cached"], Value::Bool(false));
    assert_eq!(strip_timings(a), strip_timings(b));
}

#[test]
fn exit_codes_across_catalog() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(bundled_catalog()).unwrap();
    let names: Vec<String> = serde_json::from_str::<Value>(&text).unwrap()["entries"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["name"].as_str().unwrap().to_string())
        .collect();
    for name in &names {
        let o = vlab(&["--no-cache", "veldkamp", "--algebra", name, "--prime", "5"], dir.path());
        let out = stdout(&o);
        assert_eq!(code(&o), 0, "{name}: {out}");
        if name.starts_with("remark_solvable") {
            assert!(out.contains("fail"), "{name}: {out}");
        }
    }
    for bad in [
        vec!["veldkamp", "--algebra", "nope", "--prime", "5"],
        vec!["veldkamp", "--algebra", "sl2", "--prime", "9"],
        vec!["veldkamp", "--algebra", "sl2"],
        vec!["--catalog", "missing.json", "index", "--algebra", "sl2"],
        vec!["frobnicate"],
    ] {
        assert_eq!(code(&vlab(&bad, dir.path())), 2, "{bad:?}");
    }
    assert_eq!(code(&vlab(&["--help"], dir.path())), 0);
}

#[test]
fn malformed_catalog_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("bad.json"),
        r#"{"schema": 1, "entries": [{"name": "q", "dim": 2, "brackets": [{"i": 0, "j": 1, "terms": [{"k": 0, "coeff": "1/0"}]}]}]}"#,
    )
    .unwrap();
    let o = vlab(&["--catalog", "bad.json", "validate"], dir.path());
    assert_eq!(code(&o), 2);
    assert!(!stderr(&o).is_empty());
}
