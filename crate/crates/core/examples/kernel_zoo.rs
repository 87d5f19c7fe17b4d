//! Builds every kernel of a few dimensions, prints its exact terms and one value.

use clifft::clifford::Vector;
use clifft::kernel::{build_kernel, eval_kernel, minus_counterpart, KernelId};
use num_complex::Complex64;

fn main() -> clifft::Result<()> {
    for m in 2..=5 {
        let x = Vector::new((0..m).map(|j| 0.3 + 0.2 * j as f64).collect())?;
        let y = Vector::new((0..m).map(|j| 0.9 - 0.4 * j as f64).collect())?;
        for i in 0..=m - 2 {
            let id = KernelId::new(m, i)?.with_e_i(Complex64::new(1.0, 0.0));
            let k = build_kernel(&id)?;
            println!("{id}: {} scalar terms, {} bivector terms", k.scalar.len(), k.bivector.len());
            for t in &k.scalar {
                let root = if t.sqrt_pi_over_2 { "·√(π/2)" } else { "" };
                println!("    scalar  {}{root} · s^{} · J̃_{}", t.coeff, t.s_power, t.order.value());
            }
            for t in &k.bivector {
                let root = if t.sqrt_pi_over_2 { "·√(π/2)" } else { "" };
                println!("    x∧y     {}{root} · s^{} · J̃_{}", t.coeff, t.s_power, t.order.value());
            }
            let v = eval_kernel(&k, &x, &y)?;
            let w = eval_kernel(&minus_counterpart(&k), &x, &y)?;
            println!("    K+(x,y) scalar = {:.6}, K-(x,y) scalar = {:.6}", v.scalar, w.scalar);
        }
    }
    Ok(())
}
