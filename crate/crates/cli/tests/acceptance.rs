//! Acceptance criteria 1-12, one PASS/FAIL line each, checked against the
//! `dmon` binary built alongside this test.

use std::process::Command;
use std::time::{Duration, Instant};

use serde_json::Value;

struct Run {
    reports: Vec<Value>,
    elapsed: Duration,
    code: i32,
}

fn run(args: &[&str]) -> Run {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_dmon"))
        .arg("verify")
        .args(["--format", "json"])
        .args(args)
        .output()
        .expect("spawn dmon");
    let elapsed = start.elapsed();
    let reports = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "bad JSON from {args:?}: {e}\n{}",
            String::from_utf8_lossy(&out.stderr)
        )
    });
    Run {
        reports,
        elapsed,
        code: out.status.code().unwrap_or(-1),
    }
}

fn suites(names: &[&str]) -> Run {
    let mut args = Vec::new();
    for n in names {
        args.extend(["--suite", n]);
    }
    run(&args)
}

fn check<'a>(run: &'a Run, id: &str) -> Result<&'a Value, String> {
    let (suite, name) = id.split_once('/').unwrap();
    run.reports
        .iter()
        .find(|r| r["suite"] == suite && r["check"] == name)
        .ok_or_else(|| format!("{id} missing"))
}

/// `id` passed with zero failures on at least `min` trials.
fn passed(run: &Run, id: &str, min: u64) -> Result<(), String> {
    let r = check(run, id)?;
    let trials = r["trials"].as_u64().unwrap_or(0);
    if r["verdict"] != "pass" || r["failures"] != 0 {
        return Err(format!("{id}: {} ({})", r["verdict"], r["witness"]));
    }
    if trials < min {
        return Err(format!("{id}: {trials} trials < {min}"));
    }
    Ok(())
}

fn within(run: &Run, limit: u64) -> Result<(), String> {
    if run.code != 0 {
        return Err(format!("exit code {}", run.code));
    }
    if run.elapsed > Duration::from_secs(limit) {
        return Err(format!("took {:?}, limit {limit}s", run.elapsed));
    }
    Ok(())
}

fn all(results: impl IntoIterator<Item = Result<(), String>>) -> Result<(), String> {
    results
        .into_iter()
        .collect::<Result<Vec<_>, _>>()
        .map(|_| ())
}

fn c1() -> Result<(), String> {
    let r = suites(&["perm-laws"]);
    all([within(&r, 1), passed(&r, "perm-laws/twist-signature", 49)])
}

fn c2() -> Result<(), String> {
    let r = suites(&["monoid"]);
    // 2^0 + ... + 2^6 generators with n + m <= 6
    all([within(&r, 5), passed(&r, "monoid/mu-twist", 127)])
}

fn c3() -> Result<(), String> {
    let r = suites(&["day-twist-naive"]);
    let w = check(&r, "day-twist-naive/counterexample-found")?["witness"]
        .as_str()
        .unwrap_or_default()
        .to_string();
    all([
        within(&r, 5),
        passed(&r, "day-twist-naive/counterexample-found", 1),
        passed(&r, "day-twist-naive/correct-twist-control", 1),
        w.contains("levels (2,1)")
            .then_some(())
            .ok_or(format!("witness: {w}")),
    ])
}

fn c4() -> Result<(), String> {
    let r = suites(&["d-well-defined", "d-functoriality"]);
    all([
        within(&r, 10),
        passed(&r, "d-well-defined/completion-independence", 500),
        passed(&r, "d-functoriality/composition", 500),
    ])
}

fn c5() -> Result<(), String> {
    let r = suites(&["phi-well-defined", "phi-chain-map"]);
    all([
        within(&r, 30),
        passed(&r, "phi-well-defined/sigma-equivariance", 300),
        passed(&r, "phi-well-defined/left-suspension", 300),
        passed(&r, "phi-well-defined/right-suspension", 300),
        passed(&r, "phi-chain-map/leibniz", 300),
    ])
}

fn c6() -> Result<(), String> {
    let r = suites(&["symmetric-square"]);
    all([
        within(&r, 60),
        passed(&r, "symmetric-square/square-commutes", 1),
        passed(&r, "symmetric-square/expected-sign", 1),
    ])
}

fn c7() -> Result<(), String> {
    let r = suites(&["psi-coequalizer", "psi-commutativity", "psi-associativity"]);
    all([
        within(&r, 30),
        passed(&r, "psi-coequalizer/descends", 300),
        passed(&r, "psi-commutativity/square", 300),
        passed(&r, "psi-commutativity/net-sign", 300),
        passed(&r, "psi-associativity/triples", 300),
    ])
}

fn c8() -> Result<(), String> {
    let r = suites(&["adjunction-triangles"]);
    all([
        within(&r, 10),
        passed(&r, "adjunction-triangles/r-epsilon-after-eta", 1),
        passed(&r, "adjunction-triangles/epsilon-after-d-eta", 1),
    ])
}

fn c9() -> Result<(), String> {
    let r = suites(&["chi-inverse", "chi-composite"]);
    all([
        within(&r, 30),
        passed(&r, "chi-inverse/chi-phi", 1),
        passed(&r, "chi-inverse/phi-chi", 1),
        passed(&r, "chi-composite/closed-formula", 100),
    ])
}

fn c10() -> Result<(), String> {
    let r = suites(&["lattice-oracle", "perm-laws"]);
    all([
        within(&r, 10),
        passed(&r, "lattice-oracle/in-lattice-brute-force", 200),
        passed(&r, "perm-laws/shuffle-decompose-oracle", 1),
    ])
}

fn c11() -> Result<(), String> {
    let raw = || {
        Command::new(env!("CARGO_BIN_EXE_dmon"))
            .args(["verify", "--seed", "7", "--format", "json"])
            .output()
            .expect("spawn dmon")
            .stdout
    };
    let (a, b) = (raw(), raw());
    if a.is_empty() {
        return Err("empty output".into());
    }
    (a == b)
        .then_some(())
        .ok_or_else(|| "outputs differ".into())
}

fn c12() -> Result<(), String> {
    let r = suites(&["rho-sign"]);
    within(&r, 10)?;
    let c = check(&r, "rho-sign/literal-vs-note")?;
    let w = c["witness"].as_str().unwrap_or_default();
    if c["verdict"] != "expected-discrepancy" {
        return Err(format!("verdict {}", c["verdict"]));
    }
    if !(w.contains("+1") && w.contains("(-1)^((m-n)n)") && w.contains("-1 in")) {
        return Err(format!("witness does not state both values: {w}"));
    }
    Ok(())
}

type Criterion = fn() -> Result<(), String>;

fn main() {
    let criteria: [(&str, Criterion); 12] = [
        ("twist signature", c1),
        ("monoid commutativity", c2),
        ("naive twist counterexample", c3),
        ("D well-defined and functorial", c4),
        ("phi identities and chain map", c5),
        ("symmetric monoidal square", c6),
        ("psi descent, commutativity, associativity", c7),
        ("adjunction triangles", c8),
        ("chi inverse and closed formula", c9),
        ("oracle cross-checks", c10),
        ("determinism", c11),
        ("rho diagnostic", c12),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(()) => println!("PASS criterion {}: {name}", i + 1),
            Err(e) => {
                failed += 1;
                println!("FAIL criterion {}: {name}: {e}", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
