//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! `cargo test --test acceptance` runs all eleven; trailing numeric
//! arguments restrict the run (`cargo test --test acceptance -- 4 5`).

use std::process::ExitCode;

use kksoergel::acceptance::{run, CRITERIA};

fn main() -> ExitCode {
    let selected: Vec<u8> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let ids: Vec<u8> = CRITERIA.iter().map(|c| c.0).filter(|id| selected.is_empty() || selected.contains(id)).collect();
    let mut failed = 0;
    for id in ids {
        let outcome = run(id, 0);
        println!("{}", outcome.line());
        failed += usize::from(!outcome.pass);
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
