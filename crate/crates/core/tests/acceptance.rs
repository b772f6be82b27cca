//! One PASS/FAIL line per acceptance criterion. Bounds (time limits,
//! mutation arity, sample counts) are the constants in `operadic::suite`.

use std::process::ExitCode;

use operadic::suite::{self, CRITERIA};

fn main() -> ExitCode {
    let seed = std::env::var("OPERADIC_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(0u64);
    println!("acceptance: seed {seed}");
    println!(
        "bounds: time {:?}, mutation arity <= {}, A∞ arity {}, B_m r = {}, cross-oracle samples {}",
        suite::TIME_LIMIT,
        suite::MUTATION_ARITY,
        suite::AINF_ARITY,
        suite::BM_R,
        suite::CROSS_SAMPLES
    );
    let mut failed = 0;
    for id in 1..=CRITERIA.len() {
        match suite::run_criterion(id, seed) {
            Ok(r) => {
                let tag = if r.pass { "PASS" } else { "FAIL" };
                failed += usize::from(!r.pass);
                println!(
                    "{tag} [{id:>2}] {:<20} {:>8.2}s  {}",
                    r.name,
                    r.elapsed.as_secs_f64(),
                    r.detail
                );
            }
            Err(e) => {
                failed += 1;
                println!("FAIL [{id:>2}] {:<20} error: {e}", CRITERIA[id - 1]);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        CRITERIA.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
