//! Gegenbauer–Bessel expansions of the kernels.
//!
//! Every kernel has the form `A + (x∧y) B` with
//! `A = σ Σ_k â_k z^{-λ} J_{k+λ}(z) P_k(w)` and
//! `B = σ Σ_k b̂_k z^{-λ-1} J_{k+λ}(z) C^{λ+1}_{k-1}(w)`,
//! where `σ = Γ(m/2) 2^{m/2-1}` and `P_k = ((λ+k)/λ) C^λ_k` is the zonal polynomial
//! (`P_0 = 1`, `P_k = 2 T_k` when `λ = 0`). The reduced coefficients `(â_k, b̂_k)` are
//! exact; the conventional Gegenbauer coefficients are `α_k = σ â_k (λ+k)/λ`, `β_k = σ b̂_k`.

use std::fmt;
use std::io::Write;
use std::sync::Arc;

use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::clifford::{invariants_of, ParaBivector, Vector};
use crate::error::{Error, Result};
use crate::exact::{i_pow, q, q_frac, qc, qc_div, qc_from_c64, qc_i, qc_is_zero, qc_scale, qc_to_c64, sign_pow, Q, QC};
use crate::kernel::{system_sign, KernelId, Sign, SQRT_HALF_PI};
use crate::special::{double_factorial_ratio, gamma, gegenbauer_sequence, ln_gamma, scaled_bessel_sequence, zonal_sequence};

/// Exact reduced coefficients `k ↦ (â_k, b̂_k)`.
pub type ReducedFn = Arc<dyn Fn(usize) -> (QC, QC) + Send + Sync>;

/// `σ = Γ(m/2) 2^{m/2-1}`, the factor between reduced and Gegenbauer coefficients;
/// equal to `(m-2)!!` for even `m` and `(m-2)!! √(π/2)` for odd `m`.
pub fn series_sigma(m: usize) -> f64 {
    let df = (1..=m.saturating_sub(2)).rev().step_by(2).map(|n| n as f64).product::<f64>();
    if m % 2 == 0 {
        df
    } else {
        df * SQRT_HALF_PI
    }
}

/// Prefactor `Γ(m/2) / (2 π^{m/2})` of the transform normalization used for general kernels.
pub fn general_normalization(m: usize) -> f64 {
    gamma(m as f64 / 2.0) / (2.0 * std::f64::consts::PI.powf(m as f64 / 2.0))
}

/// Prefactor `(2π)^{-m/2}` of the transform normalization used throughout this crate.
pub fn transform_normalization(m: usize) -> f64 {
    (2.0 * std::f64::consts::PI).powf(-(m as f64) / 2.0)
}

/// Bridge `2^{1-m/2} / Γ(m/2) = 1/σ` between the two normalizations.
pub fn normalization_bridge(m: usize) -> f64 {
    1.0 / series_sigma(m)
}

/// Where a coefficient family came from.
#[derive(Clone, Debug, PartialEq)]
pub enum Provenance {
    Kernel(KernelId),
    /// `e^{-i⟨x,y⟩}`.
    Classical,
    Derived(String),
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Kernel(id) => write!(f, "{id}"),
            Provenance::Classical => f.write_str("exp(-i<x,y>)"),
            Provenance::Derived(s) => f.write_str(s),
        }
    }
}

/// Closed-form coefficient family of a kernel `A + (x∧y) B`.
#[derive(Clone)]
pub struct SeriesCoefficients {
    pub m: usize,
    pub provenance: Provenance,
    reduced: ReducedFn,
}

impl fmt::Debug for SeriesCoefficients {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SeriesCoefficients")
            .field("m", &self.m)
            .field("provenance", &self.provenance)
            .finish_non_exhaustive()
    }
}

impl SeriesCoefficients {
    /// Wraps an arbitrary reduced-coefficient rule; `b̂_0` is ignored.
    pub fn from_fn(m: usize, provenance: Provenance, reduced: ReducedFn) -> Result<Self> {
        if m < 2 {
            return Err(Error::UnsupportedDimension(m, 2, usize::MAX));
        }
        Ok(Self { m, provenance, reduced })
    }

    /// `λ = (m-2)/2`.
    pub fn lambda(&self) -> f64 {
        (self.m as f64 - 2.0) / 2.0
    }

    pub fn sigma(&self) -> f64 {
        series_sigma(self.m)
    }

    /// Exact `(â_k, b̂_k)`, with `b̂_0 = 0`.
    pub fn reduced(&self, k: usize) -> (QC, QC) {
        let (a, b) = (self.reduced)(k);
        if k == 0 {
            (a, qc(Q::zero()))
        } else {
            (a, b)
        }
    }

    /// Zonal-basis coefficient `σ â_k` (coefficient of `z^{-λ} J_{k+λ} P_k`).
    pub fn zonal_alpha(&self, k: usize) -> Complex64 {
        qc_to_c64(&self.reduced(k).0) * self.sigma()
    }

    /// Gegenbauer coefficient `α_k`; undefined (`None`) for `λ = 0`, `k > 0`.
    pub fn alpha(&self, k: usize) -> Option<Complex64> {
        let lambda = self.lambda();
        if k == 0 {
            Some(self.zonal_alpha(0))
        } else if lambda == 0.0 {
            None
        } else {
            Some(self.zonal_alpha(k) * ((lambda + k as f64) / lambda))
        }
    }

    /// Gegenbauer coefficient `β_k` (`β_0 = 0`).
    pub fn beta(&self, k: usize) -> Complex64 {
        qc_to_c64(&self.reduced(k).1) * self.sigma()
    }

    /// Copy with `b̂_k` shifted by `delta` (reduced units).
    pub fn with_perturbed_beta(&self, k: usize, delta: Complex64) -> Self {
        let inner = self.reduced.clone();
        let d = qc_from_c64(delta);
        Self {
            m: self.m,
            provenance: Provenance::Derived(format!("{} with b_{k} perturbed", self.provenance)),
            reduced: Arc::new(move |j| {
                let (a, b) = inner(j);
                if j == k {
                    (a, b + d.clone())
                } else {
                    (a, b)
                }
            }),
        }
    }

    /// `p · self + q · other`.
    pub fn linear_combination(&self, p: Complex64, other: &Self, r: Complex64) -> Result<Self> {
        if self.m != other.m {
            return Err(Error::DimensionMismatch { expected: self.m, got: other.m });
        }
        let (f, g) = (self.reduced.clone(), other.reduced.clone());
        let (p, r) = (qc_from_c64(p), qc_from_c64(r));
        Ok(Self {
            m: self.m,
            provenance: Provenance::Derived(format!(
                "combination of {} and {}",
                self.provenance, other.provenance
            )),
            reduced: Arc::new(move |k| {
                let (a1, b1) = f(k);
                let (a2, b2) = g(k);
                (&p * a1 + &r * a2, &p * b1 + &r * b2)
            }),
        })
    }

    /// Numeric `(σ â_k, σ b̂_k)` for `k = 0..=n`.
    fn numeric_table(&self, n: usize) -> Vec<(Complex64, Complex64)> {
        let sigma = self.sigma();
        (0..=n)
            .map(|k| {
                let (a, b) = self.reduced(k);
                (qc_to_c64(&a) * sigma, qc_to_c64(&b) * sigma)
            })
            .collect()
    }
}

/// `(a)!! / (b)!!` as a Gaussian rational.
fn dfr(a: i64, b: i64) -> QC {
    qc(double_factorial_ratio(a, b).expect("arguments are at least -1"))
}

/// Reduced coefficients of `K^i_{+,m}` split into the `f̃`, `f̂` and `g` contributions.
fn kernel_parts(m: usize, i: usize, k: usize) -> (QC, QC, QC) {
    let (m, i, ki) = (m as i64, i as i64, k as i64);
    let s = q(system_sign(m as usize));
    let zero = || qc(Q::zero());
    if i % 2 == 0 {
        if ki % 2 == 1 {
            let j = (ki - 1) / 2;
            let r = dfr(2 * j + i - 1, 2 * j + m - i - 1);
            (qc_scale(&r, &q(-i)), zero(), qc_scale(&r, &q(4 * j + m)))
        } else {
            let j = ki / 2;
            (zero(), qc_scale(&dfr(2 * j + i - 1, 2 * j - i + m - 3), &s), zero())
        }
    } else if ki % 2 == 0 {
        let j = ki / 2;
        let f_tilde = qc_scale(&dfr(2 * j + i - 2, 2 * j + m - i - 2), &q(-i));
        let g = if ki >= 2 {
            let j = (ki - 2) / 2;
            qc_scale(&dfr(2 * j + i, 2 * j + m - i), &q(4 * j + m + 2))
        } else {
            zero()
        };
        (f_tilde, zero(), g)
    } else {
        let j = (ki - 1) / 2;
        (zero(), qc_scale(&dfr(2 * j + i, 2 * j + m - i - 2), &-s), zero())
    }
}

/// Closed-form coefficients of the kernel `id` (either sign, either parity).
pub fn series_coefficients(id: &KernelId) -> Result<SeriesCoefficients> {
    let id = KernelId::new(id.m, id.i)?.with_sign(id.sign).with_e_i(id.e_i);
    let (m, i) = (id.m, id.i);
    let (tilde_factor, hat_factor) = if m % 2 == 0 {
        (qc(Q::one()), qc(Q::one()))
    } else {
        let e = qc_from_c64(id.e_i);
        (e.clone(), qc_i() * e.conj())
    };
    let minus = id.sign == Sign::Minus;
    let reduced: ReducedFn = Arc::new(move |k| {
        let (ft, fh, g) = kernel_parts(m, i, k);
        let a = &tilde_factor * ft + &hat_factor * fh;
        let b = &tilde_factor * g;
        if minus {
            // K(x,-y)^c: w ↦ -w flips P_k by (-1)^k and C^{λ+1}_{k-1} by (-1)^{k-1};
            // x∧(-y) adds one more sign to B
            let sign = sign_pow(k as i64);
            (qc_scale(&a.conj(), &sign), qc_scale(&b.conj(), &sign))
        } else {
            (a, b)
        }
    });
    SeriesCoefficients::from_fn(m, Provenance::Kernel(id), reduced)
}

/// Coefficients of the classical kernel `e^{-i⟨x,y⟩}`: `â_k = (-I)^k`, `b̂_k = 0`.
pub fn classical_coefficients(m: usize) -> Result<SeriesCoefficients> {
    SeriesCoefficients::from_fn(
        m,
        Provenance::Classical,
        Arc::new(|k| (i_pow(-(k as i64)), qc(Q::zero()))),
    )
}

/// Truncated series `A + (x∧y) B` with terms `k ≤ n`.
pub fn eval_series(c: &SeriesCoefficients, x: &Vector, y: &Vector, n: usize) -> Result<ParaBivector> {
    if x.dim() != c.m || y.dim() != c.m {
        return Err(Error::DimensionMismatch {
            expected: c.m,
            got: if x.dim() != c.m { x.dim() } else { y.dim() },
        });
    }
    let table = c.numeric_table(n);
    Ok(eval_series_with_table(c, &table, x, y))
}

fn eval_series_with_table(
    c: &SeriesCoefficients,
    table: &[(Complex64, Complex64)],
    x: &Vector,
    y: &Vector,
) -> ParaBivector {
    let inv = invariants_of(x, y);
    let z = inv.z;
    let n = table.len() - 1;
    let lambda = c.lambda();
    let bessel = scaled_bessel_sequence(c.m as i32 - 2, n + 1, z).expect("order is nonnegative");
    if z == 0.0 {
        return ParaBivector::from_wedge(x, y, table[0].0 * bessel[0], Complex64::zero());
    }
    let w = inv.w.unwrap_or(0.0);
    let zonal = zonal_sequence(n + 1, lambda, w);
    let geg = gegenbauer_sequence(n.max(1), lambda + 1.0, w);
    let mut a = Complex64::zero();
    let mut b = Complex64::zero();
    for k in 0..=n {
        a += table[k].0 * (bessel[k] * zonal[k]);
        if k >= 1 {
            b += table[k].1 * (bessel[k] * geg[k - 1] / z);
        }
    }
    ParaBivector::from_wedge(x, y, a, b)
}

/// Series evaluator with a fixed truncation, for repeated evaluation.
pub struct SeriesEvaluator {
    coeffs: SeriesCoefficients,
    table: Vec<(Complex64, Complex64)>,
}

impl SeriesEvaluator {
    pub fn new(c: &SeriesCoefficients, n: usize) -> Self {
        Self { coeffs: c.clone(), table: c.numeric_table(n) }
    }

    pub fn eval(&self, x: &Vector, y: &Vector) -> ParaBivector {
        eval_series_with_table(&self.coeffs, &self.table, x, y)
    }
}

/// `ln` of the majorant of term `k`: `σ (|â_k| P_k(1) + |b̂_k| C^{λ+1}_{k-1}(1)) (z/2)^k 2^{-λ} / Γ(k+λ+1)`.
fn ln_majorant(c: &SeriesCoefficients, k: usize, z_max: f64) -> f64 {
    let lambda = c.lambda();
    let kf = k as f64;
    let (a, b) = c.reduced(k);
    let a = qc_to_c64(&a).norm();
    let b = qc_to_c64(&b).norm();
    // sup |P_k| = P_k(1) = ((λ+k)/λ)(2λ)_k/k!, and 2 for λ = 0
    let zonal_sup = if k == 0 {
        1.0
    } else if lambda == 0.0 {
        2.0
    } else {
        ((lambda + kf) / lambda * (ln_gamma(2.0 * lambda + kf) - ln_gamma(2.0 * lambda) - ln_gamma(kf + 1.0)).exp())
            .max(1.0)
    };
    let geg_sup = if k == 0 {
        0.0
    } else {
        (ln_gamma(2.0 * lambda + 1.0 + kf) - ln_gamma(2.0 * lambda + 2.0) - ln_gamma(kf)).exp().max(1.0)
    };
    let weight = a * zonal_sup + b * geg_sup;
    if weight == 0.0 {
        return f64::NEG_INFINITY;
    }
    if z_max == 0.0 {
        return if k == 0 { (c.sigma() * weight).ln() } else { f64::NEG_INFINITY };
    }
    c.sigma().ln() + weight.ln() + kf * (z_max / 2.0).ln() - lambda * 2f64.ln() - ln_gamma(kf + lambda + 1.0)
}

/// Smallest `N` for which the certified majorant of the tail `Σ_{k>N}` is below `eps`
/// uniformly on `|x||y| ≤ z_max`.
pub fn truncation_bound(c: &SeriesCoefficients, z_max: f64, eps: f64) -> usize {
    // terms decay super-geometrically once k ≫ z_max; scan far enough to bound the rest
    let horizon = (3.0 * z_max).ceil() as usize + 80;
    let terms: Vec<f64> = (0..=horizon).map(|k| ln_majorant(c, k, z_max).exp()).collect();
    // beyond the horizon each term shrinks by at least z_max / (2(horizon+1)) < 1/4
    let last = terms[horizon];
    let mut tail = last / 3.0 * 4.0 - last;
    for n in (0..horizon).rev() {
        tail += terms[n + 1];
        if tail >= eps {
            return n + 1;
        }
    }
    0
}

/// Eigenvalue pair on degree `k`: `even_branch` acts on `ψ_{2p,k,ℓ}`, `odd_branch` on
/// `ψ_{2p+1,k,ℓ}`, both divided by `(-1)^p`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EigenvaluePair {
    pub even_branch: Complex64,
    pub odd_branch: Complex64,
}

/// Exact eigenvalue pair.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactEigenvaluePair {
    pub even_branch: QC,
    pub odd_branch: QC,
}

impl ExactEigenvaluePair {
    pub fn to_f64(&self) -> EigenvaluePair {
        EigenvaluePair {
            even_branch: qc_to_c64(&self.even_branch),
            odd_branch: qc_to_c64(&self.odd_branch),
        }
    }
}

/// `Ê1(k) = â_k − k b̂_k / (2(λ+k))` and `Ê2(k) = â_k + (k+2λ) b̂_k / (2(λ+k))`.
fn reduced_functionals(c: &SeriesCoefficients, k: usize) -> (QC, QC) {
    let (a, b) = c.reduced(k);
    if k == 0 {
        return (a.clone(), a);
    }
    let m = c.m as i64;
    let k = k as i64;
    let den = m - 2 + 2 * k;
    let e1 = &a - qc_scale(&b, &q_frac(k, den));
    let e2 = a + qc_scale(&b, &q_frac(k + m - 2, den));
    (e1, e2)
}

/// Eigenvalues of the transform with kernel `c`, normalized by `(2π)^{-m/2}`.
pub fn eigenvalues_exact(c: &SeriesCoefficients, k: usize) -> ExactEigenvaluePair {
    ExactEigenvaluePair {
        even_branch: reduced_functionals(c, k).0,
        odd_branch: reduced_functionals(c, k + 1).1,
    }
}

/// Floating-point form of [`eigenvalues_exact`].
pub fn eigenvalues_from_coefficients(c: &SeriesCoefficients, k: usize) -> EigenvaluePair {
    eigenvalues_exact(c, k).to_f64()
}

/// Coefficients of the inverse transform's kernel, plus every `k ≤ k_max` where
/// `N_k = Ê1(k) Ê2(k)` vanishes (those degrees are not invertible and get zero coefficients).
pub fn inverse_coefficients(c: &SeriesCoefficients, k_max: usize) -> (SeriesCoefficients, Vec<usize>) {
    let singular: Vec<usize> = (0..=k_max)
        .filter(|&k| {
            let (e1, e2) = reduced_functionals(c, k);
            qc_is_zero(&(e1 * e2))
        })
        .collect();
    let source = c.clone();
    let m = c.m as i64;
    let reduced: ReducedFn = Arc::new(move |k| {
        let (a, b) = source.reduced(k);
        let (e1, e2) = reduced_functionals(&source, k);
        let n = e1 * e2;
        let p = if k == 0 { Q::one() } else { q_frac(m - 2, m - 2 + 2 * k as i64) };
        let alpha = qc_div(&(&a + qc_scale(&b, &p)), &n);
        let beta = qc_div(&-b, &n);
        match (alpha, beta) {
            (Some(a), Some(b)) => (a, b),
            _ => (qc(Q::zero()), qc(Q::zero())),
        }
    });
    let inverse = SeriesCoefficients {
        m: c.m,
        provenance: Provenance::Derived(format!("inverse of {}", c.provenance)),
        reduced,
    };
    (inverse, singular)
}

/// One degree of the CF-system constraint.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConstraintResidual {
    pub k: usize,
    pub residual: f64,
    pub scale: f64,
    pub pass: bool,
}

/// Constraint check over `k = 0..=k_max`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConstraintReport {
    pub residuals: Vec<ConstraintResidual>,
    pub pass: bool,
}

impl ConstraintReport {
    pub fn failing(&self) -> Vec<usize> {
        self.residuals.iter().filter(|r| !r.pass).map(|r| r.k).collect()
    }
}

/// Checks that a `K_+` coefficient family solves the CF system, i.e. that the
/// `K_- = K_+(x,-y)^c` coefficients satisfy
/// `λα^c_{k+1} + ((k+1+2λ)/2)β^c_{k+1} = (−I)^m(−1)^{k+1}((λ+k+1)/(λ+k))(λα_k − (k/2)β_k)`;
/// in reduced form `Ê2(k+1) = (−I)^m (−1)^k conj(Ê1(k))` for the `K_+` family.
pub fn check_cf_constraint(c: &SeriesCoefficients, k_max: usize) -> ConstraintReport {
    let phase = i_pow(-(c.m as i64));
    let residuals: Vec<ConstraintResidual> = (0..=k_max)
        .map(|k| {
            let (e1, _) = reduced_functionals(c, k);
            let (_, e2_next) = reduced_functionals(c, k + 1);
            let rhs = qc_scale(&(&phase * e1.conj()), &sign_pow(k as i64));
            let lhs = qc_to_c64(&e2_next);
            let rhs = qc_to_c64(&rhs);
            let residual = (lhs - rhs).norm();
            let scale = lhs.norm().max(rhs.norm()).max(1.0);
            ConstraintResidual { k, residual, scale, pass: residual <= 1e-10 * scale }
        })
        .collect();
    let pass = residuals.iter().all(|r| r.pass);
    ConstraintReport { residuals, pass }
}

/// Writes `k,alpha_re,alpha_im,beta_re,beta_im` rows for `k = 0..=k_max`.
///
/// For `λ = 0` the α columns hold zonal coefficients (of `z^{-λ} J_k P_k`), since the
/// Gegenbauer normalization degenerates there.
pub fn write_coefficients_csv<W: Write>(c: &SeriesCoefficients, k_max: usize, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["k", "alpha_re", "alpha_im", "beta_re", "beta_im"])
        .map_err(csv_error)?;
    for k in 0..=k_max {
        let a = c.alpha(k).unwrap_or_else(|| c.zonal_alpha(k));
        let b = c.beta(k);
        w.write_record([
            k.to_string(),
            format!("{:.16e}", a.re),
            format!("{:.16e}", a.im),
            format!("{:.16e}", b.re),
            format!("{:.16e}", b.im),
        ])
        .map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

fn csv_error(e: csv::Error) -> Error {
    Error::InvalidArgument(format!("csv: {e}"))
}
