//! Prints the closed-form eigenvalues and the L² boundedness pattern they imply.

use clifft::monogenic::Parity;
use clifft::transform::{closed_form_eigenvalue, l2_bound_scan};
use num_complex::Complex64;

fn main() -> clifft::Result<()> {
    let one = Complex64::new(1.0, 0.0);
    for m in [3, 4, 6] {
        println!("m = {m}: eigenvalue on psi_(2p,k,l) / psi_(2p+1,k,l) at p = 0");
        for i in 0..=m - 2 {
            let row: Vec<String> = (0..6)
                .map(|k| {
                    let e = closed_form_eigenvalue(m, i, k, Parity::Even, 0, one).unwrap();
                    let o = closed_form_eigenvalue(m, i, k, Parity::Odd, 0, one).unwrap();
                    format!("{:+.3}{:+.3}i / {:+.3}{:+.3}i", e.re, e.im, o.re, o.im)
                })
                .collect();
            println!("  i={i}: {}", row.join("  "));
        }
    }
    for m in 2..=8 {
        for i in 0..=m - 2 {
            let r = l2_bound_scan(m, i, 200)?;
            let verdict = match r.witness {
                None => "bounded".to_string(),
                Some((k, p, v)) => format!("unbounded (|λ| = {v:.3} at k={k}, {p})"),
            };
            let unitary = if r.unitary == Some(true) { ", unitary" } else { "" };
            println!("m={m} i={i}: {verdict}{unitary}");
        }
    }
    Ok(())
}
