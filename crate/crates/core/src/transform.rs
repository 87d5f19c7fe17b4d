//! Numerical transforms `F^i_{±,m}[f](y) = (2π)^{-m/2} ∫ K^i_{±,m}(x, y) f(x) dx`,
//! the closed-form eigenvalue table, and the end-to-end identity checks.

use num_complex::Complex64;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::clifford::{Multivector, Vector};
use crate::error::{Error, Result};
use crate::exact::{q, qc, qc_from_c64, qc_i, qc_norm_sqr, qc_scale, qc_to_c64, Q, QC};
use crate::kernel::{build_kernel, system_sign, KernelEvaluator, KernelId, Sign};
use crate::monogenic::{eval_psi, psi, BasisFunction, GaussianClass, Parity, PsiEvaluator, SphericalMonogenic};
use crate::series::{eigenvalues_exact, series_coefficients, transform_normalization};
use crate::special::{double_factorial_ratio, scaled_bessel_sequence};

/// Default nodes per axis of the tensor Gauss–Hermite grid.
pub const DEFAULT_NODES_PER_AXIS: usize = 24;
/// Largest dimension for the full tensor grid.
pub const MAX_FULL_GRID_DIMENSION: usize = 4;
/// Points summed per chunk; the chunk partition fixes the reduction order.
const CHUNK: usize = 4096;

/// Gauss–Hermite rule for `∫ g(x) e^{-x²} dx` (Newton iteration on orthonormal Hermite functions).
pub fn gauss_hermite(n: usize) -> (Vec<f64>, Vec<f64>) {
    const PIM4: f64 = 0.7511255444649425;
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let half = n.div_ceil(2);
    let nf = n as f64;
    let mut z: f64 = 0.0;
    for i in 0..half {
        z = match i {
            0 => (2.0 * nf + 1.0).sqrt() - 1.85575 * (2.0 * nf + 1.0).powf(-1.0 / 6.0),
            1 => z - 1.14 * nf.powf(0.426) / z,
            2 => 1.86 * z - 0.86 * x[0],
            3 => 1.91 * z - 0.91 * x[1],
            _ => 2.0 * z - x[i - 2],
        };
        let mut pp = 0.0;
        for _ in 0..100 {
            let (mut p1, mut p2) = (PIM4, 0.0);
            for j in 1..=n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = z * (2.0 / jf).sqrt() * p2 - ((jf - 1.0) / jf).sqrt() * p3;
            }
            pp = (2.0 * nf).sqrt() * p2;
            let dz = p1 / pp;
            z -= dz;
            if dz.abs() <= 1e-15 * z.abs().max(1.0) {
                break;
            }
        }
        x[i] = z;
        x[n - 1 - i] = -z;
        w[i] = 2.0 / (pp * pp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

/// Gauss–Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut pp = 0.0;
        for _ in 0..100 {
            let (mut p1, mut p2) = (1.0, 0.0);
            for j in 1..=n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = ((2.0 * jf - 1.0) * z * p2 - (jf - 1.0) * p3) / jf;
            }
            pp = nf * (z * p1 - p2) / (z * z - 1.0);
            let dz = p1 / pp;
            z -= dz;
            if dz.abs() <= 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

/// How a transform is evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SchemeKind {
    /// Tensor grid over `ℝ^m`, for `m ≤ 4`.
    FullGrid,
    /// One-dimensional radial integral after the angular reduction, any `m`.
    RadialBochner,
}

/// Quadrature configuration.
#[derive(Clone, Debug, Serialize)]
pub struct QuadratureScheme {
    pub kind: SchemeKind,
    pub m: usize,
    pub nodes_per_axis: usize,
    /// Absolute tolerance of the adaptive radial integrals.
    pub radial_tol: f64,
    /// Evaluate chunks on the rayon pool (results are identical to serial mode).
    pub parallel: bool,
    #[serde(skip)]
    axis_nodes: Vec<f64>,
    #[serde(skip)]
    axis_weights: Vec<f64>,
}

impl QuadratureScheme {
    /// Tensor grid with `n` nodes per axis, exact for `P(x) e^{-|x|²/2}` with `P` of degree `< 2n` per variable.
    pub fn full_grid(m: usize, n: usize) -> Result<Self> {
        Self::full_grid_with_width(m, n, 1.0)
    }

    /// Tensor grid exact for `P(x) e^{-|x|²/(2σ²)}`; `σ = 1/√2` suits products of two basis functions.
    pub fn full_grid_with_width(m: usize, n: usize, sigma: f64) -> Result<Self> {
        if !(sigma > 0.0) {
            return Err(Error::InvalidArgument(format!("grid width must be positive, got {sigma}")));
        }
        if !(1..=MAX_FULL_GRID_DIMENSION).contains(&m) {
            return Err(Error::UnsupportedDimension(m, 1, MAX_FULL_GRID_DIMENSION));
        }
        if n == 0 {
            return Err(Error::InvalidArgument("a grid needs at least one node per axis".into()));
        }
        let (x, w) = gauss_hermite(n);
        // ∫ g(X) dX = c ∫ g(c x) e^{x²} e^{-x²} dx with c = √2 σ
        let c = std::f64::consts::SQRT_2 * sigma;
        let axis_nodes = x.iter().map(|v| v * c).collect();
        let axis_weights = x.iter().zip(&w).map(|(v, wt)| wt * (v * v).exp() * c).collect();
        Ok(Self {
            kind: SchemeKind::FullGrid,
            m,
            nodes_per_axis: n,
            radial_tol: 1e-13,
            parallel: false,
            axis_nodes,
            axis_weights,
        })
    }

    /// Radial path, available in every dimension.
    pub fn radial(m: usize) -> Self {
        Self {
            kind: SchemeKind::RadialBochner,
            m,
            nodes_per_axis: 0,
            radial_tol: 1e-13,
            parallel: false,
            axis_nodes: Vec::new(),
            axis_weights: Vec::new(),
        }
    }

    pub fn with_parallel(mut self, parallel: bool) -> Self {
        self.parallel = parallel;
        self
    }

    /// Per-variable polynomial degree integrated exactly against `e^{-|x|²/2}`.
    pub fn exactness_degree(&self) -> usize {
        match self.kind {
            SchemeKind::FullGrid => 2 * self.nodes_per_axis - 1,
            SchemeKind::RadialBochner => 0,
        }
    }

    pub fn len(&self) -> usize {
        self.nodes_per_axis.pow(self.m as u32)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn point(&self, mut index: usize) -> (Vector, f64) {
        let n = self.nodes_per_axis;
        let mut c = Vec::with_capacity(self.m);
        let mut w = 1.0;
        for _ in 0..self.m {
            let a = index % n;
            index /= n;
            c.push(self.axis_nodes[a]);
            w *= self.axis_weights[a];
        }
        (Vector::new(c).expect("nonempty"), w)
    }

    /// `Σ_nodes W f(x)`: the grid approximation of `∫ f dx`, summed in a fixed chunk order.
    pub fn integrate<F>(&self, f: F) -> Multivector
    where
        F: Fn(usize, &Vector) -> Multivector + Sync,
    {
        assert_eq!(self.kind, SchemeKind::FullGrid, "integrate needs a full grid");
        let total = self.len();
        let chunks = total.div_ceil(CHUNK);
        let chunk_sum = |c: usize| {
            let mut acc = Multivector::zero(self.m).expect("valid dimension");
            for idx in c * CHUNK..((c + 1) * CHUNK).min(total) {
                let (x, w) = self.point(idx);
                acc += &f(idx, &x).scale(Complex64::new(w, 0.0));
            }
            acc
        };
        let partial: Vec<Multivector> = if self.parallel {
            (0..chunks).into_par_iter().map(chunk_sum).collect()
        } else {
            (0..chunks).map(chunk_sum).collect()
        };
        let mut acc = Multivector::zero(self.m).expect("valid dimension");
        for p in &partial {
            acc += p;
        }
        acc
    }

    /// `|grid ∫ e^{-|x|²/2} - (2π)^{m/2}|`.
    pub fn self_test(&self) -> f64 {
        let one = Multivector::scalar(self.m, Complex64::one()).expect("valid dimension");
        let got = self.integrate(|_, x| one.scale(Complex64::new((-x.dot(x) / 2.0).exp(), 0.0)));
        (got.scalar_part().re - (2.0 * std::f64::consts::PI).powf(self.m as f64 / 2.0)).abs()
    }
}

/// Adaptive Gauss–Legendre integration of a smooth function on `[a, b]`.
pub fn adaptive_integrate<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    let (x, w) = gauss_legendre(20);
    let rule = |lo: f64, hi: f64| {
        let (mid, half) = ((lo + hi) / 2.0, (hi - lo) / 2.0);
        x.iter().zip(&w).map(|(xi, wi)| wi * f(mid + half * xi)).sum::<f64>() * half
    };
    fn recurse(rule: &dyn Fn(f64, f64) -> f64, lo: f64, hi: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let mid = (lo + hi) / 2.0;
        let (left, right) = (rule(lo, mid), rule(mid, hi));
        if depth == 0 || (left + right - whole).abs() <= tol {
            return left + right;
        }
        recurse(rule, lo, mid, left, tol / 2.0, depth - 1) + recurse(rule, mid, hi, right, tol / 2.0, depth - 1)
    }
    // fixed initial panels keep oscillations from being missed
    let panels = ((b - a) / 2.0).ceil().max(1.0) as usize;
    let width = (b - a) / panels as f64;
    (0..panels)
        .map(|p| {
            let (lo, hi) = (a + p as f64 * width, a + (p + 1) as f64 * width);
            recurse(&rule, lo, hi, rule(lo, hi), tol / panels as f64, 30)
        })
        .sum()
}

/// `∫_0^R r^{power} f0(r) (rρ)^{-λ} J_{order+λ}(rρ) dr` with `λ = (m-2)/2`; `R` covers the
/// Gaussian decay of `f0`.
pub fn radial_integral<F: Fn(f64) -> f64>(m: usize, order: usize, power: i32, f0: &F, rho: f64, tol: f64) -> f64 {
    let cutoff = 12.0 + 2.0 * (power.max(0) as f64).sqrt();
    let integrand = |r: f64| {
        let bessel = scaled_bessel_sequence(m as i32 - 2, order + 1, r * rho).expect("nonnegative order")[order];
        r.powi(power) * f0(r) * bessel
    };
    adaptive_integrate(&integrand, 0.0, cutoff, tol)
}

/// Exact closed-form eigenvalue of `F^i_{+,m}` on `ψ_{j,k,ℓ}`, divided by `(-1)^p`.
pub fn eigenvalue_base_exact(m: usize, i: usize, k: usize, parity: Parity, e_i: Complex64) -> Result<QC> {
    KernelId::new(m, i)?;
    let (m_, i_, k_) = (m as i64, i as i64, k as i64);
    let df = |a: i64, b: i64| double_factorial_ratio(a, b).map(qc);
    // (sign, uses the (-1)^{m/2} factor, ratio)
    let (negative, special, ratio) = match (i % 2, k % 2, parity) {
        (0, 0, Parity::Even) => (false, true, df(k_ + i_ - 1, k_ - i_ + m_ - 3)?),
        (0, 0, Parity::Odd) => (false, false, df(k_ + i_ - 1, k_ + m_ - i_ - 3)?),
        (0, 1, Parity::Even) => (true, false, df(k_ + i_, k_ + m_ - i_ - 2)?),
        (0, 1, Parity::Odd) => (false, true, df(k_ + i_, k_ - i_ + m_ - 2)?),
        (1, 0, Parity::Even) => (true, false, df(k_ + i_, k_ + m_ - i_ - 2)?),
        (1, 0, Parity::Odd) => (true, true, df(k_ + i_, k_ + m_ - i_ - 2)?),
        (1, 1, Parity::Even) => (true, true, df(k_ + i_ - 1, k_ + m_ - i_ - 3)?),
        _ => (false, false, df(k_ + i_ - 1, k_ + m_ - i_ - 3)?),
    };
    let factor = if m % 2 == 0 {
        if special {
            qc(q(system_sign(m)))
        } else {
            qc(Q::one())
        }
    } else {
        let e = qc_from_c64(e_i);
        if special {
            qc_scale(&(qc_i() * e.conj()), &q(system_sign(m)))
        } else {
            e
        }
    };
    let value = factor * ratio;
    Ok(if negative { -value } else { value })
}

/// Exact eigenvalue of `F^i_{+,m}` on `ψ_{j,k,ℓ}` with `j = 2p` or `2p+1`.
pub fn closed_form_eigenvalue_exact(m: usize, i: usize, k: usize, parity: Parity, p: usize, e_i: Complex64) -> Result<QC> {
    let base = eigenvalue_base_exact(m, i, k, parity, e_i)?;
    Ok(if p % 2 == 0 { base } else { -base })
}

/// Floating-point form of [`closed_form_eigenvalue_exact`].
pub fn closed_form_eigenvalue(m: usize, i: usize, k: usize, parity: Parity, p: usize, e_i: Complex64) -> Result<Complex64> {
    Ok(qc_to_c64(&closed_form_eigenvalue_exact(m, i, k, parity, p, e_i)?))
}

/// Eigenvalue of `F_±` for a kernel id, from the closed-form table (`K_-` via its series).
pub fn kernel_eigenvalue_exact(id: &KernelId, k: usize, parity: Parity, p: usize) -> Result<QC> {
    match id.sign {
        Sign::Plus => closed_form_eigenvalue_exact(id.m, id.i, k, parity, p, id.e_i),
        Sign::Minus => {
            let pair = eigenvalues_exact(&series_coefficients(id)?, k);
            let base = match parity {
                Parity::Even => pair.even_branch,
                Parity::Odd => pair.odd_branch,
            };
            Ok(if p % 2 == 0 { base } else { -base })
        }
    }
}

/// Transform of one kernel on a fixed quadrature scheme.
pub struct TransformEngine {
    pub id: KernelId,
    pub scheme: QuadratureScheme,
    kernel: KernelEvaluator,
}

impl TransformEngine {
    pub fn new(id: &KernelId, scheme: QuadratureScheme) -> Result<Self> {
        if scheme.m != id.m {
            return Err(Error::DimensionMismatch { expected: id.m, got: scheme.m });
        }
        Ok(Self { id: *id, kernel: build_kernel(id)?.compile(), scheme })
    }

    /// Kernel values `(scalar, g)` at every grid node for a fixed `y`, reusable across inputs.
    pub fn kernel_grid(&self, y: &Vector) -> Result<KernelGrid> {
        if self.scheme.kind != SchemeKind::FullGrid {
            return Err(Error::InvalidArgument("kernel grids need a full-grid scheme".into()));
        }
        if y.dim() != self.id.m {
            return Err(Error::DimensionMismatch { expected: self.id.m, got: y.dim() });
        }
        let s = &self.scheme;
        let eval = |idx: usize| {
            let (x, _) = s.point(idx);
            let inv = crate::clifford::invariants_of(&x, y);
            self.kernel.eval_st(inv.s, inv.t)
        };
        let values = if s.parallel {
            (0..s.len()).into_par_iter().map(eval).collect()
        } else {
            (0..s.len()).map(eval).collect()
        };
        Ok(KernelGrid { y: y.clone(), values })
    }

    /// `F[f](y)` using a precomputed kernel grid.
    pub fn apply_on_grid<F>(&self, grid: &KernelGrid, f: F) -> Multivector
    where
        F: Fn(&Vector) -> Multivector + Sync,
    {
        let norm = transform_normalization(self.id.m);
        let y = &grid.y;
        self.scheme
            .integrate(|idx, x| {
                let (scalar, g) = grid.values[idx];
                crate::clifford::ParaBivector::from_wedge(x, y, scalar, g).left_mul(&f(x))
            })
            .scale(Complex64::new(norm, 0.0))
    }

    /// `F[f](y)` on the full grid.
    pub fn apply<F>(&self, f: F, y: &Vector) -> Result<Multivector>
    where
        F: Fn(&Vector) -> Multivector + Sync,
    {
        let grid = self.kernel_grid(y)?;
        Ok(self.apply_on_grid(&grid, f))
    }
}

/// Kernel values at the grid nodes for one `y`.
pub struct KernelGrid {
    pub y: Vector,
    values: Vec<(Complex64, Complex64)>,
}

/// `F^i_{±,m}[f](y)` by full-grid quadrature.
pub fn apply_transform<F>(id: &KernelId, f: F, y: &Vector, scheme: &QuadratureScheme) -> Result<Multivector>
where
    F: Fn(&Vector) -> Multivector + Sync,
{
    TransformEngine::new(id, scheme.clone())?.apply(f, y)
}

/// Transform of `f0(|x|) M_k(x)` (even parity) or `f0(|x|) x M_k(x)` (odd parity) at `y`,
/// reduced to one radial integral:
/// `Ê1(k) M_k(η) ∫ r^{m+k-1} f0(r) (rρ)^{-λ} J_{k+λ}(rρ) dr` and
/// `Ê2(k+1) η M_k(η) ∫ r^{m+k} f0(r) (rρ)^{-λ} J_{k+1+λ}(rρ) dr`, with `ρ = |y|`, `η = y/ρ`.
pub fn bochner_reduce<F: Fn(f64) -> f64>(
    id: &KernelId,
    monogenic: &SphericalMonogenic,
    parity: Parity,
    f0: &F,
    y: &Vector,
    tol: f64,
) -> Result<Multivector> {
    let m = id.m;
    if y.dim() != m || monogenic.poly.dim() != m {
        return Err(Error::DimensionMismatch { expected: m, got: y.dim() });
    }
    let rho = y.norm();
    let k = monogenic.k;
    let pair = eigenvalues_exact(&series_coefficients(id)?, k);
    let (eigen, order, power) = match parity {
        Parity::Even => (pair.even_branch, k, (m + k - 1) as i32),
        Parity::Odd => (pair.odd_branch, k + 1, (m + k) as i32),
    };
    let integral = radial_integral(m, order, power, f0, rho, tol);
    if rho == 0.0 {
        // only the constant monogenic survives at the origin
        let at_origin = monogenic.poly.eval(y)?;
        return Ok(at_origin.scale(qc_to_c64(&eigen) * integral));
    }
    // M_k(η) with the radial factor ρ^k folded back: M_k(y) / ρ^k
    let eta = y.scaled(1.0 / rho);
    let mut angular = monogenic.poly.eval(&eta)?;
    if parity == Parity::Odd {
        angular = &eta.to_multivector() * &angular;
    }
    Ok(angular.scale(qc_to_c64(&eigen) * integral))
}

/// How a numeric eigenvalue was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EigenMethod {
    FullGrid,
    RadialBochner,
}

/// Numeric versus closed-form eigenvalue of one basis function.
#[derive(Clone, Debug, Serialize)]
pub struct EigenvalueRecord {
    pub m: usize,
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub l: usize,
    pub parity: Parity,
    pub method: EigenMethod,
    pub closed_form: Complex64,
    pub numeric: Complex64,
    pub abs_error: f64,
    /// `max_y |F[ψ](y) - λ ψ(y)|` over the sample points.
    pub residual: f64,
}

/// Sample points with `|y| ∈ [0.5, 1.5]` in fixed, non-axis-aligned directions.
pub fn sample_points(m: usize) -> Vec<Vector> {
    let dirs: [&[f64]; 3] = [&[0.8, -0.3, 0.5, 0.2], &[-0.4, 0.9, 0.1, -0.6], &[0.3, 0.2, -0.7, 0.9]];
    let radii = [0.5, 1.0, 1.5];
    dirs.iter()
        .zip(radii)
        .map(|(d, r)| {
            let c: Vec<f64> = (0..m).map(|j| d[j % 4] + 0.05 * (j / 4) as f64).collect();
            let v = Vector::new(c).expect("nonempty");
            v.scaled(r / v.norm())
        })
        .collect()
}

fn rayleigh(psi_vals: &[Multivector], images: &[Multivector], expected: Complex64) -> Result<(Complex64, f64)> {
    let mut num = Complex64::zero();
    let mut den = 0.0;
    let mut residual: f64 = 0.0;
    for (p, f) in psi_vals.iter().zip(images) {
        num += p.inner(f)?;
        den += p.norm_sqr();
        residual = residual.max(f.max_abs_diff(&p.scale(expected)));
    }
    if den == 0.0 {
        return Err(Error::InvalidArgument("basis function vanishes at every sample point".into()));
    }
    Ok((num / den, residual))
}

/// Checks `F^i_{±,m}[ψ_{j,k,ℓ}] = λ ψ_{j,k,ℓ}` numerically: full grid for `m ≤ 4`, radial path otherwise.
pub fn verify_eigen(id: &KernelId, j: usize, k: usize, l: usize) -> Result<EigenvalueRecord> {
    if id.m <= MAX_FULL_GRID_DIMENSION {
        verify_eigen_full_grid(id, j, k, l, &QuadratureScheme::full_grid(id.m, DEFAULT_NODES_PER_AXIS)?)
    } else {
        verify_eigen_bochner(id, j, k, l, 1e-13)
    }
}

fn record(id: &KernelId, b: &BasisFunction, method: EigenMethod, numeric: Complex64, residual: f64) -> Result<EigenvalueRecord> {
    let closed_form = qc_to_c64(&kernel_eigenvalue_exact(id, b.k, b.parity, b.p())?);
    Ok(EigenvalueRecord {
        m: id.m,
        i: id.i,
        j: b.j,
        k: b.k,
        l: b.l,
        parity: b.parity,
        method,
        closed_form,
        numeric,
        abs_error: (numeric - closed_form).norm(),
        residual,
    })
}

/// Eigenvalue check by full-grid quadrature.
pub fn verify_eigen_full_grid(id: &KernelId, j: usize, k: usize, l: usize, scheme: &QuadratureScheme) -> Result<EigenvalueRecord> {
    let b = psi(j, k, l, id.m)?;
    let ev = b.evaluator();
    let engine = TransformEngine::new(id, scheme.clone())?;
    let closed = qc_to_c64(&kernel_eigenvalue_exact(id, k, b.parity, b.p())?);
    let ys = sample_points(id.m);
    let psi_vals: Vec<Multivector> = ys.iter().map(|y| ev.eval(y)).collect();
    let images = ys
        .iter()
        .map(|y| engine.apply(|x| ev.eval(x), y))
        .collect::<Result<Vec<_>>>()?;
    let (numeric, residual) = rayleigh(&psi_vals, &images, closed)?;
    record(id, &b, EigenMethod::FullGrid, numeric, residual)
}

/// Radial profile of `ψ_{j,k,ℓ}`: `L_p^{α}(r²) e^{-r²/2}`.
fn radial_profile(b: &BasisFunction) -> impl Fn(f64) -> f64 {
    let (p, alpha) = (b.p(), b.laguerre_alpha());
    move |r: f64| crate::special::laguerre(p, alpha, r * r) * (-r * r / 2.0).exp()
}

/// Eigenvalue check through the radial reduction (any dimension).
pub fn verify_eigen_bochner(id: &KernelId, j: usize, k: usize, l: usize, tol: f64) -> Result<EigenvalueRecord> {
    let b = psi(j, k, l, id.m)?;
    let ev = b.evaluator();
    let closed = qc_to_c64(&kernel_eigenvalue_exact(id, k, b.parity, b.p())?);
    let f0 = radial_profile(&b);
    let ys = sample_points(id.m);
    let psi_vals: Vec<Multivector> = ys.iter().map(|y| ev.eval(y)).collect();
    let images = ys
        .iter()
        .map(|y| bochner_reduce(id, &b.monogenic, b.parity, &f0, y, tol))
        .collect::<Result<Vec<_>>>()?;
    let (numeric, residual) = rayleigh(&psi_vals, &images, closed)?;
    record(id, &b, EigenMethod::RadialBochner, numeric, residual)
}

/// Outcome of one named numeric comparison.
#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub case: String,
    pub expected: f64,
    pub got: f64,
    pub abs_error: f64,
    pub pass: bool,
}

impl CheckResult {
    pub fn new(case: impl Into<String>, expected: f64, got: f64, tol: f64) -> Self {
        let abs_error = (got - expected).abs();
        Self { case: case.into(), expected, got, abs_error, pass: abs_error <= tol }
    }
}

/// Inversion report: exact eigenvalue products and numerical compositions.
#[derive(Clone, Debug, Serialize)]
pub struct InversionReport {
    pub m: usize,
    pub i: usize,
    pub partner: usize,
    /// Largest `k` covered by the exact product check.
    pub k_max: usize,
    pub exact_products_are_one: bool,
    pub first_exact_failure: Option<(usize, Parity)>,
    pub numeric: Vec<CheckResult>,
}

impl InversionReport {
    pub fn pass(&self) -> bool {
        self.exact_products_are_one && self.numeric.iter().all(|c| c.pass)
    }
}

/// Exact check that `λ^{(i)} λ^{(m-2-i)} = 1` on every degree `k ≤ k_max` and both parities.
pub fn inversion_products(m: usize, i: usize, k_max: usize) -> Result<Option<(usize, Parity)>> {
    if m % 2 != 0 {
        return Err(Error::InvalidArgument(format!("inversion pairs are stated for even m, got {m}")));
    }
    KernelId::new(m, i)?;
    let one = Complex64::one();
    for k in 0..=k_max {
        for parity in [Parity::Even, Parity::Odd] {
            let a = eigenvalue_base_exact(m, i, k, parity, one)?;
            let b = eigenvalue_base_exact(m, m - 2 - i, k, parity, one)?;
            if a * b != qc(Q::one()) {
                return Ok(Some((k, parity)));
            }
        }
    }
    Ok(None)
}

/// Chebyshev interpolant of a function on `[0, b]`.
struct Chebyshev {
    b: f64,
    nodes: Vec<f64>,
    values: Vec<f64>,
}

impl Chebyshev {
    fn new<F: Fn(f64) -> f64>(f: F, b: f64, n: usize) -> Self {
        let nodes: Vec<f64> = (0..=n)
            .map(|j| b / 2.0 * (1.0 - (std::f64::consts::PI * j as f64 / n as f64).cos()))
            .collect();
        let values = nodes.iter().map(|&x| f(x)).collect();
        Self { b, nodes, values }
    }

    /// Barycentric formula on Chebyshev points of the second kind.
    fn eval(&self, x: f64) -> f64 {
        if x > self.b {
            return 0.0;
        }
        let n = self.nodes.len() - 1;
        let (mut num, mut den) = (0.0, 0.0);
        for (j, (&xj, &fj)) in self.nodes.iter().zip(&self.values).enumerate() {
            if x == xj {
                return fj;
            }
            let mut w = if j % 2 == 0 { 1.0 } else { -1.0 };
            if j == 0 || j == n {
                w *= 0.5;
            }
            let t = w / (x - xj);
            num += t * fj;
            den += t;
        }
        num / den
    }
}

/// `F^{m-2-i} F^{i} = id` for even `m`: exact eigenvalue products up to `k_max`, and, for
/// `m ≤ 4`, numerical compositions on `ψ_{0,0,1}` and `ψ_{1,0,1}` (inner transform by the
/// radial path tabulated in `ρ`, outer by the full grid).
pub fn verify_inversion(m: usize, i: usize, k_max: usize, numeric_tol: f64) -> Result<InversionReport> {
    let first_exact_failure = inversion_products(m, i, k_max)?;
    let partner = m - 2 - i;
    let mut numeric = Vec::new();
    if m <= MAX_FULL_GRID_DIMENSION {
        let inner_id = KernelId::new(m, i)?;
        let outer = TransformEngine::new(&KernelId::new(m, partner)?, QuadratureScheme::full_grid(m, DEFAULT_NODES_PER_AXIS)?)?;
        for j in [0, 1] {
            let b = psi(j, 0, 1, m)?;
            let f0 = radial_profile(&b);
            let pair = eigenvalues_exact(&series_coefficients(&inner_id)?, 0);
            let (eigen, order, power) = match b.parity {
                Parity::Even => (pair.even_branch, 0, (m - 1) as i32),
                Parity::Odd => (pair.odd_branch, 1, m as i32),
            };
            let eigen = qc_to_c64(&eigen);
            let table = Chebyshev::new(|rho| radial_integral(m, order, power, &f0, rho, 1e-14), 20.0, 160);
            // F^i[ψ](x) = λ · (1 or ξ) · I(|x|)
            let inner = |x: &Vector| {
                let r = x.norm();
                let radial = table.eval(r);
                let base = match b.parity {
                    Parity::Even => Multivector::scalar(m, Complex64::one()).expect("valid"),
                    Parity::Odd if r > 0.0 => x.scaled(1.0 / r).to_multivector(),
                    Parity::Odd => Multivector::zero(m).expect("valid"),
                };
                base.scale(eigen * radial)
            };
            let ev = b.evaluator();
            for (n, y) in sample_points(m).iter().enumerate() {
                let got = outer.apply(inner, y)?;
                let expected = ev.eval(y);
                let err = got.max_abs_diff(&expected);
                numeric.push(CheckResult {
                    case: format!("F^{partner} F^{i} psi_({j},0,1) at y{n}"),
                    expected: expected.max_abs(),
                    got: got.max_abs(),
                    abs_error: err,
                    pass: err <= numeric_tol,
                });
            }
        }
    }
    Ok(InversionReport {
        m,
        i,
        partner,
        k_max,
        exact_products_are_one: first_exact_failure.is_none(),
        first_exact_failure,
        numeric,
    })
}

/// The constant `∓(∓I)^m` of the differentiation rules for `F_±`.
pub fn diff_constant(m: usize, sign: Sign) -> Complex64 {
    let unit = match sign {
        Sign::Plus => Complex64::new(0.0, -1.0),
        Sign::Minus => Complex64::new(0.0, 1.0),
    };
    unit.powu(m as u32) * -(sign.value() as f64)
}

/// Checks `F_±[x f] = ∓(∓I)^m ∂_y F_∓[f]` and `F_±[∂_x f] = ∓(∓I)^m y F_∓[f]` for
/// `f = ψ_{0,0,1}` and `f = ψ_{0,1,1}`, with exact `x f`, `∂_x f` and a central difference in `y`.
pub fn verify_diff_relations(m: usize, i: usize, h: f64, tol: f64) -> Result<Vec<CheckResult>> {
    if m > MAX_FULL_GRID_DIMENSION {
        return Err(Error::UnsupportedDimension(m, 2, MAX_FULL_GRID_DIMENSION));
    }
    let scheme = QuadratureScheme::full_grid(m, DEFAULT_NODES_PER_AXIS)?;
    let mut out = Vec::new();
    let inputs = [(0usize, 0usize), (0, 1)];
    for sign in [Sign::Plus, Sign::Minus] {
        let id = KernelId::new(m, i)?.with_sign(sign);
        let this = TransformEngine::new(&id, scheme.clone())?;
        let other = TransformEngine::new(&id.with_sign(sign.flip()), scheme.clone())?;
        let c = diff_constant(m, sign);
        for &(j, k) in &inputs {
            let f = psi(j, k, 1, m)?.gaussian_class()?;
            let xf = f.mul_x()?;
            let df = f.dirac()?;
            let y = &sample_points(m)[1];
            let grid = this.kernel_grid(y)?;
            let lhs_x = this.apply_on_grid(&grid, |x| eval_class(&xf, x));
            let lhs_d = this.apply_on_grid(&grid, |x| eval_class(&df, x));
            let mut dy = Multivector::zero(m)?;
            for a in 0..m {
                let mut plus = y.components().to_vec();
                let mut minus = plus.clone();
                plus[a] += h;
                minus[a] -= h;
                let fp = other.apply(|x| eval_class(&f, x), &Vector::new(plus)?)?;
                let fm = other.apply(|x| eval_class(&f, x), &Vector::new(minus)?)?;
                let e_a = Multivector::blade(m, &[a + 1], Complex64::one())?;
                dy += &(&e_a * &(&fp - &fm)).scale(Complex64::new(0.5 / h, 0.0));
            }
            let f_other = other.apply(|x| eval_class(&f, x), y)?;
            let rhs_x = dy.scale(c);
            let rhs_d = (&y.to_multivector() * &f_other).scale(c);
            let err_x = lhs_x.max_abs_diff(&rhs_x);
            let err_d = lhs_d.max_abs_diff(&rhs_d);
            out.push(CheckResult {
                case: format!("F_{sign}[x psi_({j},{k},1)] (m={m}, i={i})"),
                expected: rhs_x.max_abs(),
                got: lhs_x.max_abs(),
                abs_error: err_x,
                pass: err_x <= tol,
            });
            out.push(CheckResult {
                case: format!("F_{sign}[d_x psi_({j},{k},1)] (m={m}, i={i})"),
                expected: rhs_d.max_abs(),
                got: lhs_d.max_abs(),
                abs_error: err_d,
                pass: err_d <= tol,
            });
        }
    }
    Ok(out)
}

fn eval_class(f: &GaussianClass, x: &Vector) -> Multivector {
    f.eval(x).expect("dimension checked by caller")
}

/// Result of scanning `|λ|` over degrees.
#[derive(Clone, Debug, Serialize)]
pub struct L2BoundReport {
    pub m: usize,
    pub i: usize,
    pub k_max: usize,
    /// `i ≤ (m-2)/2`: the transform should be bounded on `L²`.
    pub expected_bounded: bool,
    pub max_abs_eigenvalue: f64,
    /// A degree and parity with `|λ| > 1`, if any.
    pub witness: Option<(usize, Parity, f64)>,
    /// For even `m` and `i = (m-2)/2`: whether every `|λ| = 1` exactly.
    pub unitary: Option<bool>,
    pub pass: bool,
}

/// `|λ| ≤ 1` for all `k ≤ k_max` iff `i ≤ (m-2)/2`, with exact arithmetic (`e_i = 1` for odd `m`).
pub fn l2_bound_scan(m: usize, i: usize, k_max: usize) -> Result<L2BoundReport> {
    KernelId::new(m, i)?;
    let one_c = Complex64::one();
    let one = Q::one();
    let mut max_abs: f64 = 0.0;
    let mut witness = None;
    let mut all_unit = true;
    for k in 0..=k_max {
        for parity in [Parity::Even, Parity::Odd] {
            let v = eigenvalue_base_exact(m, i, k, parity, one_c)?;
            let n2 = qc_norm_sqr(&v);
            let abs = crate::exact::to_f64(&n2).sqrt();
            max_abs = max_abs.max(abs);
            if n2 > one && witness.is_none() {
                witness = Some((k, parity, abs));
            }
            all_unit &= n2 == one;
        }
    }
    let expected_bounded = 2 * i <= m - 2;
    let unitary = (m % 2 == 0 && 2 * i == m - 2).then_some(all_unit);
    let pass = (witness.is_none() == expected_bounded) && unitary.unwrap_or(true);
    Ok(L2BoundReport { m, i, k_max, expected_bounded, max_abs_eigenvalue: max_abs, witness, unitary, pass })
}

/// Verdict of the weighted-integrability heuristic.
#[derive(Clone, Debug, Serialize)]
pub struct DomainVerdict {
    pub member: bool,
    /// Estimated `∫_{R<|x|<2R} (1+|x|)^i |f|` for `R = 1, 2, 4, …`.
    pub shells: Vec<f64>,
}

/// Heuristic membership of `f` in `{f ∈ L¹ : ∫(1+|x|)^i |f| < ∞}` from dyadic radial shells:
/// the shell contributions must shrink geometrically (ratio below 3/4) by the last shells.
pub fn domain_membership<F: Fn(&Vector) -> f64>(f: F, m: usize, i: usize) -> Result<DomainVerdict> {
    if m < 1 {
        return Err(Error::UnsupportedDimension(m, 1, usize::MAX));
    }
    let mut dirs: Vec<Vector> = Vec::new();
    for j in 0..m {
        for s in [1.0, -1.0] {
            let mut c = vec![0.0; m];
            c[j] = s;
            dirs.push(Vector::new(c)?);
        }
    }
    if m <= 6 {
        for mask in 0..(1u32 << m) {
            let c: Vec<f64> = (0..m).map(|j| if mask & (1 << j) != 0 { -1.0 } else { 1.0 }).collect();
            dirs.push(Vector::new(c)?.scaled(1.0 / (m as f64).sqrt()));
        }
    }
    let sphere = 2.0 * std::f64::consts::PI.powf(m as f64 / 2.0) / crate::special::gamma(m as f64 / 2.0);
    let (gx, gw) = gauss_legendre(16);
    let shell = |lo: f64, hi: f64| {
        let (mid, half) = ((lo + hi) / 2.0, (hi - lo) / 2.0);
        gx.iter()
            .zip(&gw)
            .map(|(x, w)| {
                let r = mid + half * x;
                let avg = dirs.iter().map(|d| f(&d.scaled(r)).abs()).sum::<f64>() / dirs.len() as f64;
                w * half * sphere * r.powi(m as i32 - 1) * (1.0 + r).powi(i as i32) * avg
            })
            .sum::<f64>()
    };
    let mut shells = vec![shell(0.0, 1.0)];
    let mut r = 1.0;
    for _ in 0..40 {
        shells.push(shell(r, 2.0 * r));
        r *= 2.0;
    }
    let tail = &shells[shells.len() - 4..];
    let total: f64 = shells.iter().sum();
    let member = total.is_finite()
        && (tail.iter().all(|&s| s <= 1e-300 * total.max(1.0))
            || tail.windows(2).all(|w| w[1] <= 0.75 * w[0]));
    Ok(DomainVerdict { member, shells })
}

/// Values of `ψ` at the given points, for callers composing their own checks.
pub fn psi_values(b: &BasisFunction, ys: &[Vector]) -> Result<Vec<Multivector>> {
    ys.iter().map(|y| eval_psi(b, y)).collect()
}

/// Evaluator for `ψ_{j,k,ℓ}`; shorthand used by examples.
pub fn psi_evaluator(j: usize, k: usize, l: usize, m: usize) -> Result<PsiEvaluator> {
    Ok(psi(j, k, l, m)?.evaluator())
}
