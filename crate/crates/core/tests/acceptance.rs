//! Acceptance criteria, one pass/fail line each. Runs without the libtest harness so the
//! lines always reach the output; exits nonzero if any criterion fails.

use std::time::{Duration, Instant};

use clifft::clifford::{Multivector, Vector};
use clifft::kernel::{
    build_kernel, pde_residual, verify_recursion_even, verify_recursion_odd, verify_structural_identities,
    KernelId,
};
use clifft::monogenic::{monogenic_basis, psi, BasisFunction};
use clifft::series::{check_cf_constraint, series_coefficients, truncation_bound, SeriesEvaluator};
use clifft::special::{bessel_j_sequence, gegenbauer_sequence, laguerre, BesselOrder};
use clifft::transform::{
    closed_form_eigenvalue, inversion_products, l2_bound_scan, radial_integral, verify_eigen_bochner,
    verify_eigen_full_grid, verify_inversion, QuadratureScheme,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn random_vector(rng: &mut ChaCha8Rng, m: usize, radius: f64) -> Vector {
    loop {
        let c: Vec<f64> = (0..m).map(|_| rng.gen_range(-radius..radius)).collect();
        let v = Vector::new(c).unwrap();
        if v.norm() <= radius {
            return v;
        }
    }
}

fn recursion_exactness() -> Outcome {
    let mut checks = 0;
    let mut failures = Vec::new();
    let ranges: [(fn(usize, usize) -> clifft::Result<clifft::kernel::IdentityReport>, [usize; 4]); 2] =
        [(verify_recursion_even, [2, 4, 6, 8]), (verify_recursion_odd, [3, 5, 7, 9])];
    for (verify, dims) in ranges {
        for m in dims {
            // interior steps plus both boundary rules
            for i in 0..=m - 2 {
                let r = verify(m, i).unwrap();
                checks += r.checks.len();
                if let Some(f) = r.first_failure() {
                    failures.push(format!("m={m} i={i}: {}", f.name));
                }
            }
        }
    }
    outcome(failures.is_empty(), format!("{checks} exact identities, failures: {failures:?}"))
}

fn structural_identities() -> Outcome {
    let mut checks = 0;
    let mut pass = true;
    for m in [4, 6, 8] {
        let r = verify_structural_identities(m).unwrap();
        checks += r.checks.len();
        pass &= r.all_pass() && r.checks.len() == 5;
    }
    outcome(pass, format!("{checks} exact identities (five per dimension)"))
}

fn series_agreement() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst: f64 = 0.0;
    for m in 2..=6 {
        for i in 0..=m - 2 {
            let id = KernelId::new(m, i).unwrap().with_e_i(Complex64::new(0.6, -0.8));
            let closed = build_kernel(&id).unwrap().compile();
            let c = series_coefficients(&id).unwrap();
            let series = SeriesEvaluator::new(&c, truncation_bound(&c, 9.0, 1e-9));
            for _ in 0..500 {
                let x = random_vector(&mut rng, m, 3.0);
                let y = random_vector(&mut rng, m, 3.0);
                let d = closed.eval(&x, &y).to_multivector().max_abs_diff(&series.eval(&x, &y).to_multivector());
                worst = worst.max(d);
            }
        }
    }
    outcome(worst < 1e-8, format!("max |closed - series| = {worst:.2e} (< 1e-8) over 500 points per kernel"))
}

fn pde_residuals() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst: f64 = 0.0;
    for m in 2..=6 {
        for i in 0..=m - 2 {
            let k = build_kernel(&KernelId::new(m, i).unwrap()).unwrap();
            for _ in 0..200 {
                let x = random_vector(&mut rng, m, 3.0);
                let y = random_vector(&mut rng, m, 3.0);
                worst = worst.max(pde_residual(&k, &x, &y, 1e-4).unwrap().relative());
            }
        }
    }
    outcome(worst < 1e-6, format!("max relative residual = {worst:.2e} (< 1e-6), 200 points per kernel"))
}

fn eigenvalues() -> Outcome {
    let mut grid_worst: f64 = 0.0;
    for m in 2..=4 {
        let scheme = QuadratureScheme::full_grid(m, 24).unwrap();
        for i in 0..=m - 2 {
            let id = KernelId::new(m, i).unwrap();
            for j in 0..=1 {
                for k in 0..=2 {
                    let r = verify_eigen_full_grid(&id, j, k, 1, &scheme).unwrap();
                    grid_worst = grid_worst.max(r.abs_error.max(r.residual));
                }
            }
        }
    }
    let mut radial_worst: f64 = 0.0;
    for m in 5..=9 {
        for i in 0..=m - 2 {
            let id = KernelId::new(m, i).unwrap();
            for j in 0..=1 {
                for k in 0..=2 {
                    let r = verify_eigen_bochner(&id, j, k, 1, 1e-13).unwrap();
                    radial_worst = radial_worst.max(r.abs_error.max(r.residual));
                }
            }
        }
    }
    let one = Complex64::new(1.0, 0.0);
    let mut spots = true;
    for p in 0..4 {
        let sign = if p % 2 == 0 { 1.0 } else { -1.0 };
        let a = closed_form_eigenvalue(4, 0, 2, clifft::monogenic::Parity::Even, p, one).unwrap();
        let b = closed_form_eigenvalue(2, 0, 0, clifft::monogenic::Parity::Even, p, one).unwrap();
        let c = closed_form_eigenvalue(3, 0, 0, clifft::monogenic::Parity::Even, p, one).unwrap();
        spots &= (a - Complex64::new(sign / 3.0, 0.0)).norm() < 1e-15;
        spots &= b == Complex64::new(-sign, 0.0);
        spots &= c == Complex64::new(0.0, sign);
    }
    outcome(
        grid_worst < 1e-6 && radial_worst < 1e-8 && spots,
        format!("full grid m<=4: {grid_worst:.2e} (< 1e-6); radial m=5..9: {radial_worst:.2e} (< 1e-8); spot values: {spots}"),
    )
}

fn inversion() -> Outcome {
    let mut exact = true;
    for m in [2, 4, 6, 8] {
        for i in 0..=m - 2 {
            exact &= inversion_products(m, i, 100).unwrap().is_none();
        }
    }
    let mut worst: f64 = 0.0;
    let mut pass = exact;
    for m in [2, 4] {
        for i in 0..=m - 2 {
            let r = verify_inversion(m, i, 0, 1e-5).unwrap();
            pass &= r.pass();
            worst = r.numeric.iter().map(|c| c.abs_error).fold(worst, f64::max);
        }
    }
    outcome(pass, format!("exact products = 1 (k<=100): {exact}; max composition error {worst:.2e} (< 1e-5)"))
}

fn l2_pattern() -> Outcome {
    let mut pass = true;
    let mut witnesses = Vec::new();
    for m in 2..=9 {
        for i in 0..=m - 2 {
            let r = l2_bound_scan(m, i, 200).unwrap();
            pass &= r.pass;
            if let Some((k, p, v)) = r.witness {
                witnesses.push(format!("m={m},i={i}:k={k}{p}|λ|={v}"));
            }
        }
    }
    outcome(pass, format!("bounded iff i <= (m-2)/2 for m=2..9, k<=200; {} counterexamples", witnesses.len()))
}

fn constraint() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut pass = true;
    for m in 2..=9 {
        for i in 0..=m - 2 {
            let id = KernelId::new(m, i).unwrap().with_e_i(Complex64::new(0.3, 0.7));
            let r = check_cf_constraint(&series_coefficients(&id).unwrap(), 50);
            pass &= r.pass;
            worst = r.residuals.iter().map(|v| v.residual / v.scale).fold(worst, f64::max);
        }
    }
    outcome(pass, format!("max relative residual = {worst:.2e} (<= 1e-10), m<=9, k<=50"))
}

fn special_functions() -> Outcome {
    let mut geg: f64 = 0.0;
    for &lambda in &[0.5, 1.0, 1.5, 2.0, 3.0] {
        for n in 0..=40 {
            let w = -1.0 + n as f64 / 20.0;
            let c = gegenbauer_sequence(21, lambda, w);
            let c1 = gegenbauer_sequence(21, lambda + 1.0, w);
            for n in 2..=20 {
                let nf = n as f64;
                let t = [(lambda + nf) / lambda * c[n], c1[n], c1[n - 2]];
                let scale = t.iter().map(|v| v.abs()).fold(1.0, f64::max);
                geg = geg.max((t[0] - t[1] + t[2]).abs() / scale);
                let lhs = w * c1[n - 1];
                let rhs = nf / (2.0 * (nf + lambda)) * c1[n] + (nf + 2.0 * lambda) / (2.0 * (nf + lambda)) * c1[n - 2];
                geg = geg.max((lhs - rhs).abs() / lhs.abs().max(c1[n].abs()).max(c1[n - 2].abs()).max(1.0));
            }
        }
    }
    let mut bessel: f64 = 0.0;
    let mut orders: Vec<BesselOrder> = (1..=9).step_by(2).map(BesselOrder::from_twice).collect();
    orders.extend((1..=6).map(BesselOrder::integer));
    for nu in orders {
        for step in 1..=500 {
            let z = step as f64 * 0.1;
            let s = bessel_j_sequence(BesselOrder::from_twice(nu.twice - 2), 3, z).unwrap();
            let scale = s.iter().map(|v| v.abs()).fold(0.0, f64::max).max(1e-3);
            bessel = bessel.max((s[1] - z / (2.0 * nu.value()) * (s[2] + s[0])).abs() / scale);
        }
    }
    let (k, j, s) = (1usize, 1usize, 1.3f64);
    let f0 = |r: f64| r.powi(k as i32) * laguerre(j, 2.0, r * r) * (-r * r / 2.0).exp();
    let got = radial_integral(4, k, 3, &f0, s, 1e-14);
    let expected = -s * laguerre(j, 2.0, s * s) * (-s * s / 2.0).exp();
    let hankel = (got - expected).abs();
    outcome(
        geg <= 1e-11 && bessel <= 1e-12 && hankel < 1e-8,
        format!("Gegenbauer {geg:.1e} (<= 1e-11); Bessel {bessel:.1e} (<= 1e-12); Hankel–Laguerre {hankel:.1e} (< 1e-8)"),
    )
}

fn monogenic_oracle() -> Outcome {
    let mut exact = true;
    let mut count = 0;
    for m in 2..=6 {
        for k in 0..=4 {
            for b in monogenic_basis(m, k).unwrap() {
                exact &= b.poly.dirac().is_zero();
                count += 1;
            }
        }
    }
    let mut worst: f64 = 0.0;
    for m in 2..=4 {
        let scheme = QuadratureScheme::full_grid_with_width(m, 12, std::f64::consts::FRAC_1_SQRT_2).unwrap();
        let mut basis: Vec<BasisFunction> = Vec::new();
        for j in 0..=2 {
            for k in 0..=2 {
                for l in 1..=2 {
                    if let Ok(b) = psi(j, k, l, m) {
                        basis.push(b);
                    }
                }
            }
        }
        let evals: Vec<_> = basis.iter().map(|b| b.evaluator()).collect();
        let gram = |a: usize, b: usize| {
            scheme
                .integrate(|_, x| Multivector::scalar(m, evals[a].eval(x).inner(&evals[b].eval(x)).unwrap()).unwrap())
                .scalar_part()
        };
        let norms: Vec<f64> = (0..basis.len()).map(|a| gram(a, a).re).collect();
        for a in 0..basis.len() {
            for b in a + 1..basis.len() {
                worst = worst.max(gram(a, b).norm() / (norms[a] * norms[b]).sqrt());
            }
        }
    }
    outcome(
        exact && worst < 1e-8,
        format!("∂M = 0 exactly for {count} monogenics: {exact}; max relative cross term {worst:.1e} (< 1e-8)"),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, Duration); 10] = [
        ("recursion exactness", recursion_exactness, Duration::from_secs(1)),
        ("structural identities", structural_identities, Duration::from_secs(1)),
        ("series agreement", series_agreement, Duration::from_secs(30)),
        ("PDE residuals", pde_residuals, Duration::from_secs(60)),
        ("eigenvalue verification", eigenvalues, Duration::from_secs(300)),
        ("inversion", inversion, Duration::from_secs(120)),
        ("L2 boundedness pattern", l2_pattern, Duration::from_secs(1)),
        ("constraint identity", constraint, Duration::from_secs(1)),
        ("special-function identities", special_functions, Duration::from_secs(5)),
        ("monogenic oracle", monogenic_oracle, Duration::from_secs(60)),
    ];
    let mut failed = 0;
    for (n, (name, run, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        let elapsed = start.elapsed();
        let status = if o.pass { "PASS" } else { "FAIL" };
        let timing = if elapsed <= *budget { "" } else { " [over time budget]" };
        println!(
            "criterion {:2} {status}: {name} — {} ({:.2}s, budget {}s){timing}",
            n + 1,
            o.detail,
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
        failed += usize::from(!o.pass);
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
