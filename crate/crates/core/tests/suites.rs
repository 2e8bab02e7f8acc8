use dmon::verify::{run_suite, run_suites, suite_names, Context, SuiteConfig, Verdict};
use dmon::Error;

fn small(seed: u64) -> SuiteConfig {
    SuiteConfig {
        seed,
        trials: 40,
        ..SuiteConfig::default()
    }
}

#[test]
fn every_suite_is_clean_on_another_seed() {
    for name in suite_names() {
        for r in run_suite(name, &small(11)).unwrap() {
            assert!(!r.is_failure(), "{}/{}: {:?}", r.suite, r.check, r.witness);
        }
    }
}

#[test]
fn rho_sign_is_reported_as_discrepancy() {
    let r = run_suite("rho-sign", &small(0)).unwrap();
    assert_eq!(r.len(), 1);
    assert_eq!(r[0].verdict, Verdict::ExpectedDiscrepancy);
    let w = r[0].witness.as_deref().unwrap();
    assert!(w.contains("+1") && w.contains("-1"), "{w}");
}

#[test]
fn reports_are_sorted_and_reproducible() {
    let names: Vec<String> = ["monoid", "perm-laws", "d-functoriality"]
        .map(String::from)
        .to_vec();
    let a = run_suites(&names, &Context::new(small(3), &[]).unwrap()).unwrap();
    let b = run_suites(&names, &Context::new(small(3), &[]).unwrap()).unwrap();
    assert_eq!(a, b);
    let keys: Vec<_> = a
        .iter()
        .map(|r| (r.suite.clone(), r.check.clone()))
        .collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
}

#[test]
fn unknown_suite_is_a_usage_error() {
    assert!(matches!(
        run_suite("no-such", &small(0)),
        Err(Error::Usage(_))
    ));
}

#[test]
fn stabilization_below_level_is_rejected() {
    let cfg = SuiteConfig {
        stab_bound: 2,
        ..SuiteConfig::default()
    };
    assert!(matches!(Context::new(cfg, &[]), Err(Error::Usage(_))));
}
