//! Acceptance run: every criterion at its stated tolerance, one verdict line
//! each. Details for failing criteria follow the verdicts.

use cornerlab::verify::{run_suite, ALL_CRITERIA};

fn main() {
    let report = run_suite(&ALL_CRITERIA);
    for c in &report.criteria {
        let worst = c.checks.iter().find(|k| !k.pass).or_else(|| c.checks.first());
        let detail = match (&c.error, worst) {
            (Some(e), _) => format!("error: {e}"),
            (None, Some(k)) => format!("{} = {:e} ({})", k.name, k.measured, k.bound),
            (None, None) => "no checks".into(),
        };
        println!(
            "{} criterion {}: {} [{:.2} s] {}",
            if c.pass() { "PASS" } else { "FAIL" },
            c.id,
            c.title,
            c.seconds,
            detail
        );
    }
    println!();
    print!("{}", report.render());
    if !report.pass() {
        std::process::exit(1);
    }
}
