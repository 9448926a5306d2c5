//! Prints one pass/fail line per acceptance criterion and exits nonzero on
//! any failure. Tolerances live in `orbitvol::selftest`.

use std::process::ExitCode;

use orbitvol::selftest::{self, SelfTestOptions};

fn main() -> ExitCode {
    let opts = SelfTestOptions::default();
    let mut failed = 0;
    for criterion in selftest::CRITERIA {
        let outcome = criterion(&opts);
        println!("{outcome}");
        failed += usize::from(!outcome.passed());
    }

    // Mutation check: a single flipped Weyl sign must be caught.
    let corrupted = SelfTestOptions {
        corrupt_weyl_sign: true,
        ..opts
    };
    let caught = !selftest::criterion_8(&corrupted).passed() && !selftest::criterion_1(&corrupted).passed();
    println!(
        "mutation    {} corrupted Weyl sign detected by criteria 1 and 8",
        if caught { "PASS" } else { "FAIL" }
    );
    failed += usize::from(!caught);

    println!("acceptance: {failed} failure(s)");
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
