//! Every acceptance criterion, one pass/fail line each.

use std::process::ExitCode;

use sunflower_core::certify::{run_criterion, CertifyConfig, CRITERIA};

fn main() -> ExitCode {
    let cfg = CertifyConfig::default();
    let mut failed = Vec::new();
    for id in 1..=CRITERIA {
        let r = run_criterion(id, &cfg);
        println!("{r}");
        if !r.passed() {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: {CRITERIA}/{CRITERIA} criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed criteria {failed:?}");
        ExitCode::FAILURE
    }
}
