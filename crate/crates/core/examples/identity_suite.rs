//! A few rows of the identity suite run from library code.

use hyperkernel::cli::verify::{self, SuiteConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = SuiteConfig::default();
    for key in ["key", "g-closed-form", "mellin", "index-formula", "asymptote-ratio"] {
        let row = verify::run_suite(Some(key), None, &cfg)?.remove(0);
        println!("{:<16} {:>9.2e} <= {:<7.0e} {}", row.identity, row.residual, row.tolerance, if row.pass { "pass" } else { "FAIL" });
    }
    Ok(())
}
