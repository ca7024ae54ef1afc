use latval_core::suites;
use serde_json::json;

use crate::report::{CliError, Outcome};

pub fn run(suite: &str, seed: u64) -> Result<Outcome, CliError> {
    let reports = suites::run(suite, seed)?;
    let mut out = Outcome::new(json!(null));
    let mut total = 0;
    let mut passed = 0;
    for r in &reports {
        let ok = r.checks.iter().filter(|c| c.passed).count();
        for c in &r.checks {
            let status = if c.passed { "PASS" } else { "FAIL" };
            let mut l = format!("{status}  {}/{} ({} cases)", r.suite, c.name, c.cases);
            if let Some(f) = &c.failure {
                l.push_str(&format!(": {f}"));
            }
            out = out.line(l);
        }
        out = out.line(format!(
            "{}: {ok}/{} checks passed",
            r.suite,
            r.checks.len()
        ));
        total += r.checks.len();
        passed += ok;
    }
    if reports.len() > 1 {
        let suites_ok = reports.iter().filter(|r| r.passed()).count();
        out = out.line(format!(
            "all: {suites_ok}/{} suites passed, {passed}/{total} checks",
            reports.len()
        ));
    }
    let all = passed == total;
    out.result = json!({
        "suite": suite,
        "seed": seed,
        "passed": all,
        "reports": reports,
    });
    Ok(out.success(all))
}
