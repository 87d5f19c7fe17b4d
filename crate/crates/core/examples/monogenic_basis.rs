//! Builds spherical monogenics and the Laguerre basis ψ_{j,k,ℓ} with exact arithmetic.

use clifft::monogenic::{harmonic_dimension, monogenic_basis, psi, sphere_inner};

fn main() -> clifft::Result<()> {
    for m in 2..=4 {
        for k in 0..=2 {
            let basis = monogenic_basis(m, k)?;
            println!("m={m} k={k}: {} monogenics (dim H_k = {})", basis.len(), harmonic_dimension(m, k));
            for (l, b) in basis.iter().enumerate() {
                println!("    M^({}) = {}   ∂M = 0: {}", l + 1, b.poly, b.poly.dirac().is_zero());
            }
            if basis.len() >= 2 {
                println!("    <M1, M2> on the sphere = {}", sphere_inner(&basis[0].poly, &basis[1].poly)?);
            }
        }
    }
    let b = psi(3, 1, 1, 3)?;
    let class = b.gaussian_class()?;
    println!("psi_(3,1,1) in m=3: {} · exp(-|x|²/2)", class.poly);
    println!("squared L² norm / π^(3/2) = {}", class.l2_inner(&class)?);
    Ok(())
}
