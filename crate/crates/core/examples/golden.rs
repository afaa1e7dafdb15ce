//! Replay the worked examples and print one line per claim.

use revbisim::run_golden_suite;

fn main() -> revbisim::Result<()> {
    let report = run_golden_suite()?;
    for r in &report.results {
        println!("[{}] {:<50} {}", if r.passed() { "pass" } else { "FAIL" }, r.claim, r.source);
    }
    std::process::exit(i32::from(!report.passed()));
}
