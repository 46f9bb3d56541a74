//! Run the acceptance suite and print the table.

use sunflower_core::certify::{render_text, report_all, CertifyConfig};

fn main() {
    let rows = report_all(&CertifyConfig::default());
    print!("{}", render_text(&rows));
    if rows.iter().any(|r| !r.passed()) {
        std::process::exit(2);
    }
}
