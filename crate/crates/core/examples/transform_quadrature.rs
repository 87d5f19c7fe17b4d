//! Applies transforms by tensor Gauss–Hermite quadrature and recovers eigenvalues numerically.

use clifft::kernel::{KernelId, Sign};
use clifft::transform::{verify_eigen_full_grid, QuadratureScheme};

fn main() -> clifft::Result<()> {
    for m in 2..=3 {
        let scheme = QuadratureScheme::full_grid(m, 24)?;
        println!("m={m}: grid self-test error {:.1e} on {} nodes", scheme.self_test(), scheme.len());
        for i in 0..=m - 2 {
            for sign in [Sign::Plus, Sign::Minus] {
                let id = KernelId::new(m, i)?.with_sign(sign);
                for (j, k) in [(0, 0), (1, 1), (2, 2)] {
                    let r = verify_eigen_full_grid(&id, j, k, 1, &scheme)?;
                    println!(
                        "  {id} psi_({j},{k},1): closed {:+.6}, numeric {:+.6}, error {:.1e}",
                        r.closed_form, r.numeric, r.abs_error
                    );
                }
            }
        }
    }
    Ok(())
}
