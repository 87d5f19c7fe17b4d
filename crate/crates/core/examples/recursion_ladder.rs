//! Walks the cross-dimension recursion ladder and reports every exact identity.

use clifft::kernel::{verify_recursion_all, verify_structural_identities};

fn main() -> clifft::Result<()> {
    for m in 2..=9 {
        let report = verify_recursion_all(m)?;
        let passed = report.checks.iter().filter(|c| c.pass).count();
        println!("m={m}: {passed}/{} recursion identities hold exactly", report.checks.len());
        for c in &report.checks {
            println!("    {} {}", if c.pass { "ok  " } else { "FAIL" }, c.name);
        }
    }
    for m in [4, 6, 8] {
        let report = verify_structural_identities(m)?;
        println!("m={m}: structural identities all hold: {}", report.all_pass());
    }
    Ok(())
}
