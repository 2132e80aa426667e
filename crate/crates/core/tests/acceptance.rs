use std::process::ExitCode;
use std::time::Instant;

use grassfiber::acceptance::run;
use grassfiber::tolerances::DEFAULT_SEED;

fn main() -> ExitCode {
    let start = Instant::now();
    let results = run(DEFAULT_SEED, &[]);
    for r in &results {
        println!(
            "criterion {:>2} {:<13} {} ({:.0} ms) {}",
            r.id,
            r.name,
            if r.pass { "PASS" } else { "FAIL" },
            r.millis,
            r.detail
        );
    }
    let failed = results.iter().filter(|r| !r.pass).count();
    println!(
        "acceptance: {} passed, {} failed, {:.1} s total",
        results.len() - failed,
        failed,
        start.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
