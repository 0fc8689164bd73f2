use std::process::ExitCode;
use std::time::Instant;

use matchcount::acceptance::{run_criterion, SUITES};

fn main() -> ExitCode {
    // optional suite names as positional arguments; flags from the test runner are ignored
    let wanted: Vec<String> = std::env::args()
        .skip(1)
        .filter(|a| !a.starts_with('-') && SUITES.contains(&a.as_str()))
        .collect();
    let mut all_pass = true;
    for (i, name) in SUITES.iter().enumerate() {
        if !wanted.is_empty() && !wanted.iter().any(|w| w == name) {
            continue;
        }
        let start = Instant::now();
        let v = run_criterion(i + 1);
        println!("{} [{:.1}s]", v.line(), start.elapsed().as_secs_f64());
        for n in &v.notes {
            println!("    note: {n}");
        }
        for f in &v.failures {
            println!("    failed: {f}");
        }
        all_pass &= v.pass;
    }
    if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
