use std::io::Write;
use std::process::{Command, Output, Stdio};

fn invlat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_invlat")).args(args).output().unwrap()
}

fn invlat_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_invlat"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn catalog_lists_groups_and_tori() {
    let o = invlat(&["catalog"]);
    assert!(o.status.success());
    let s = stdout(&o);
    for name in ["S3", "Q8", "G4", "C5", "example-non-generic"] {
        assert!(s.lines().any(|l| l.starts_with(name)), "{name} missing");
    }
    let j: serde_json::Value = serde_json::from_slice(&invlat(&["catalog", "--json"]).stdout).unwrap();
    assert!(j.as_array().unwrap().len() >= 10);
}

#[test]
fn analyze_json_is_byte_identical() {
    let a = invlat(&["analyze", "G4", "--json"]);
    let b = invlat(&["analyze", "G4", "--json"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["schema"], "torus-report/1");
}

#[test]
fn analyze_summaries() {
    let s = stdout(&invlat(&["analyze", "S3"]));
    assert!(s.contains("[main2]"));
    let s = stdout(&invlat(&["analyze", "Q8"]));
    assert!(s.contains("[ratL]"));
    let o = invlat(&["construct", "C5"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("no invariant lattice"));
}

#[test]
fn construct_with_recipe_and_scalar() {
    let o = invlat(&["construct", "A2", "--recipe", "ds", "--c", "zeta3", "--json"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 1);
}

#[test]
fn decompose_prints_graph() {
    let o = invlat(&["decompose", "B2"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("connected true"));
    assert!(s.contains("geom-i true"));
}

#[test]
fn invalid_input_exits_2() {
    assert_eq!(invlat(&["analyze", "no-such-group"]).status.code(), Some(2));
    assert_eq!(invlat(&["construct", "S3", "--recipe", "O"]).status.code(), Some(2));
    assert_eq!(invlat(&["construct", "S3", "--recipe", "bogus"]).status.code(), Some(2));
    let o = invlat_stdin(&["analyze", "-"], "{not json");
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));
}

#[test]
fn reducible_input_exits_2() {
    let diag = r#"{"name": "diag", "generators": [[[1, 0], [0, -1]]]}"#;
    assert_eq!(invlat_stdin(&["analyze", "-"], diag).status.code(), Some(2));
}

#[test]
fn group_json_from_stdin_and_file() {
    let s3 = r#"{"name": "s3", "generators": [[[0, 1], [1, 0]], [[0, -1], [1, -1]]]}"#;
    let a = invlat_stdin(&["analyze", "-", "--json"], s3);
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    let path = std::env::temp_dir().join(format!("invlat-cli-{}.json", std::process::id()));
    std::fs::write(&path, s3).unwrap();
    let b = invlat(&["analyze", path.to_str().unwrap(), "--json"]);
    std::fs::remove_file(&path).ok();
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["group"]["order"], 6);
}
