use latval_core::suites::{run, SuiteUnknown};

fn assert_suite(name: &str) {
    for report in run(name, 7).unwrap() {
        for c in &report.checks {
            assert!(c.passed, "{}: {}: {:?}", report.suite, c.name, c.failure);
            assert!(c.cases > 0, "{}: {} examined nothing", report.suite, c.name);
        }
    }
}

#[test]
fn lattice_suite_passes() {
    assert_suite("lattice");
}

#[test]
fn pregeometry_suite_passes() {
    assert_suite("pregeometry");
}

#[test]
fn valuation_suite_passes() {
    assert_suite("valuation");
}

#[test]
fn ball_suite_passes() {
    assert_suite("ball");
}

#[test]
fn grid_suite_passes() {
    assert_suite("grid");
}

#[test]
fn unknown_suite_is_rejected() {
    assert_eq!(
        run("widgets", 1).unwrap_err(),
        SuiteUnknown("widgets".into())
    );
}

#[test]
fn reports_are_deterministic() {
    assert_eq!(run("grid", 3).unwrap(), run("grid", 3).unwrap());
}
