//! Compares the closed-form kernels with their truncated Bessel–Gegenbauer series.

use clifft::clifford::Vector;
use clifft::kernel::{build_kernel, KernelId};
use clifft::series::{series_coefficients, truncation_bound, SeriesEvaluator};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> clifft::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for m in 2..=6 {
        for i in 0..=m - 2 {
            let id = KernelId::new(m, i)?;
            let closed = build_kernel(&id)?.compile();
            let c = series_coefficients(&id)?;
            let n = truncation_bound(&c, 9.0, 1e-9);
            let series = SeriesEvaluator::new(&c, n);
            let mut worst: f64 = 0.0;
            for _ in 0..100 {
                let x = Vector::new((0..m).map(|_| rng.gen_range(-1.7..1.7)).collect())?;
                let y = Vector::new((0..m).map(|_| rng.gen_range(-1.7..1.7)).collect())?;
                let d = closed.eval(&x, &y).to_multivector().max_abs_diff(&series.eval(&x, &y).to_multivector());
                worst = worst.max(d);
            }
            println!("{id}: N = {n:3}, max |closed - series| = {worst:.2e}");
        }
    }
    Ok(())
}
