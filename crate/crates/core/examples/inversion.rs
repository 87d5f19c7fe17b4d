//! Composes F^{m-2-i} after F^i and checks that the input comes back.

use clifft::transform::verify_inversion;

fn main() -> clifft::Result<()> {
    for m in [2, 4, 6, 8] {
        for i in 0..=m - 2 {
            let r = verify_inversion(m, i, 100, 1e-5)?;
            println!(
                "m={m}: F^{} F^{i}: exact eigenvalue products = 1 for k <= 100: {}",
                r.partner, r.exact_products_are_one
            );
            for c in &r.numeric {
                println!("    {}: error {:.1e}", c.case, c.abs_error);
            }
        }
    }
    Ok(())
}
