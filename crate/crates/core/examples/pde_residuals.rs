//! Finite-difference residuals of the first-order system satisfied by every kernel.

use clifft::clifford::Vector;
use clifft::kernel::{build_kernel, pde_residual, system_constant, KernelId};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> clifft::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for m in 2..=6 {
        println!("m={m}: ∂_y K+ = c K- x with c = {}", system_constant(m));
        for i in 0..=m - 2 {
            let k = build_kernel(&KernelId::new(m, i)?)?;
            let mut worst: f64 = 0.0;
            for _ in 0..50 {
                let x = Vector::new((0..m).map(|_| rng.gen_range(-1.5..1.5)).collect())?;
                let y = Vector::new((0..m).map(|_| rng.gen_range(-1.5..1.5)).collect())?;
                worst = worst.max(pde_residual(&k, &x, &y, 1e-4)?.relative());
            }
            println!("    i={i}: max relative residual {worst:.1e}");
        }
    }
    Ok(())
}
