//! Runs every acceptance criterion on the bundled fixtures and prints one
//! line per criterion. Exits nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use smallcover::acceptance;
use smallcover::fixtures;

fn main() -> ExitCode {
    let filter = std::env::args().skip(1).find(|a| !a.starts_with('-'));
    let start = Instant::now();
    let results = acceptance::run(fixtures::bundled(), filter.as_deref());
    println!("\nacceptance suite ({} criteria)", results.len());
    for r in &results {
        println!("  {}", r.line());
    }
    let failed = results.iter().filter(|r| !r.pass).count();
    println!(
        "acceptance: {} passed; {failed} failed; finished in {:.2}s\n",
        results.len() - failed,
        start.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
