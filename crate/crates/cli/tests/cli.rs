use std::io::Write;
use std::process::{Command, Output};

fn dmon(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dmon"))
        .args(args)
        .output()
        .expect("spawn dmon")
}

#[test]
fn list_suites_prints_registry() {
    let out = dmon(&["list-suites"]);
    assert!(out.status.success());
    let names: Vec<String> = String::from_utf8(out.stdout)
        .unwrap()
        .lines()
        .map(String::from)
        .collect();
    assert!(names.len() >= 24);
    assert!(names.iter().any(|n| n == "symmetric-square"));
}

#[test]
fn monoid_json_is_an_array_of_reports() {
    let out = dmon(&["verify", "--suite", "monoid", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let arr = v.as_array().unwrap();
    assert!(!arr.is_empty());
    for r in arr {
        let keys: Vec<&str> = r.as_object().unwrap().keys().map(|k| k.as_str()).collect();
        for k in ["suite", "check", "trials", "failures", "verdict"] {
            assert!(keys.contains(&k), "missing {k} in {r}");
        }
        assert_eq!(r["suite"], "monoid");
    }
}

#[test]
fn text_output_has_one_line_per_check() {
    let out = dmon(&["verify", "--suite", "perm-laws", "--trials", "20"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let checks = text.lines().filter(|l| !l.starts_with(' ')).count();
    assert_eq!(checks, 8);
    assert!(text
        .lines()
        .filter(|l| !l.starts_with(' '))
        .all(|l| l.starts_with("PASS perm-laws/")));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(
        dmon(&["verify", "--suite", "no-such"]).status.code(),
        Some(2)
    );
    assert_eq!(dmon(&["verify", "--no-such-flag"]).status.code(), Some(2));
    assert_eq!(dmon(&["verify", "--format", "xml"]).status.code(), Some(2));
    assert_eq!(
        dmon(&["verify", "--stab-bound", "2"]).status.code(),
        Some(2)
    );
    assert_eq!(
        dmon(&["verify", "--complex", "/nonexistent.json"])
            .status
            .code(),
        Some(2)
    );
    let out = dmon(&["verify", "--suite", "no-such"]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("no-such"));
}

#[test]
fn expected_discrepancy_does_not_fail() {
    let out = dmon(&["verify", "--suite", "rho-sign"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("NOTE rho-sign/"));
}

#[test]
fn user_complex_joins_the_corpus() {
    let dir = std::env::temp_dir().join(format!("dmon-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("z3.json");
    let c = dmon::chain::multiplication_complex(1, 3);
    let mut f = std::fs::File::create(&path).unwrap();
    f.write_all(
        dmon::chain::ComplexFile::from_complex(&c)
            .to_json()
            .as_bytes(),
    )
    .unwrap();
    let p = path.to_str().unwrap();
    let out = dmon(&[
        "verify",
        "--complex",
        p,
        "--suite",
        "spectrum-validation",
        "--suite",
        "adjunction-triangles",
        "--format",
        "json",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let corpus = v
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["check"] == "corpus-validates")
        .unwrap();
    assert_eq!(corpus["trials"], 8);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn fail_fast_still_reports_clean_runs() {
    let out = dmon(&[
        "verify",
        "--fail-fast",
        "--suite",
        "monoid",
        "--suite",
        "perm-laws",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("monoid/") && text.contains("perm-laws/"));
}
