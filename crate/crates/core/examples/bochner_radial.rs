//! Eigenvalues in higher dimensions through the one-dimensional radial reduction.

use clifft::kernel::KernelId;
use clifft::transform::verify_eigen_bochner;

fn main() -> clifft::Result<()> {
    for m in 5..=9 {
        for i in 0..=m - 2 {
            let id = KernelId::new(m, i)?;
            let mut worst: f64 = 0.0;
            for j in 0..=3 {
                for k in 0..=3 {
                    worst = worst.max(verify_eigen_bochner(&id, j, k, 1, 1e-13)?.abs_error);
                }
            }
            println!("{id}: max |numeric - closed form| over j,k <= 3 = {worst:.1e}");
        }
    }
    Ok(())
}
