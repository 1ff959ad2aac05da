use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_dicyclic-frobenius"))
}

#[test]
fn n2_plus_json_matches_golden_fixture() {
    let out = bin().args(["--n", "2", "--branch", "plus", "--format", "json"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let golden = include_str!("fixtures/n2_plus.json");
    assert_eq!(String::from_utf8(out.stdout).unwrap(), golden);
}

#[test]
fn n_equal_one_is_a_usage_error() {
    let out = bin().args(["--n", "1"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("greater than 1"));
}

#[test]
fn bad_flags_are_usage_errors() {
    for args in [
        vec!["--n", "3", "--branch", "sideways"],
        vec!["--n", "3", "--format", "pdf"],
        vec!["--branch", "plus"],
        vec!["--n", "3", "--samples", "0"],
    ] {
        let out = bin().args(&args).output().unwrap();
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn text_mode_lists_stages() {
    let out = bin().args(["--n", "3", "--samples", "2"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let s = String::from_utf8(out.stdout).unwrap();
    for stage in ["group", "syzygy", "pencil", "normal_form"] {
        assert!(s.contains(&format!("[PASS] {stage}")), "{stage}");
    }
    assert!(s.contains("[FLAG] minus_charge"));
}

#[test]
fn latex_goes_to_out_file() {
    let dir = std::env::temp_dir().join(format!("dicyclic-frobenius-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("n2.tex");
    let out = bin()
        .args(["--n", "2", "--branch", "plus", "--format", "latex", "--samples", "1", "--out"])
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let tex = std::fs::read_to_string(&path).unwrap();
    assert!(tex.contains("\\begin{pmatrix} \\frac{4}{3} u_1 & \\frac{4}{3} u_2"));
    assert!(tex.contains("\\left(-t_1\\right)"));
    std::fs::remove_dir_all(&dir).unwrap();
}
