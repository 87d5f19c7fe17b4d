//! Clifford-valued polynomials, spherical monogenics and the Laguerre–monogenic
//! basis `ψ_{j,k,ℓ}` of the Gaussian Schwartz class.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::clifford::{blade_product_sign, Multivector, Vector, MAX_DIMENSION};
use crate::error::{Error, Result};
use crate::exact::{q, q_frac, to_f64, Q};
use crate::special::laguerre;

/// Exponents `(a_1, …, a_m)` of the monomial `x_1^{a_1} ⋯ x_m^{a_m}`.
pub type Exponents = Vec<u32>;

/// Finite sum of `c · x^α e_A` with exact rational `c`.
#[derive(Clone, PartialEq, Eq)]
pub struct CliffordPolynomial {
    m: usize,
    terms: BTreeMap<(Exponents, u32), Q>,
}

impl fmt::Debug for CliffordPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CliffordPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (n, ((exps, mask), c)) in self.terms.iter().enumerate() {
            if n > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({c})")?;
            for (j, &a) in exps.iter().enumerate() {
                match a {
                    0 => {}
                    1 => write!(f, "·x{}", j + 1)?,
                    _ => write!(f, "·x{}^{a}", j + 1)?,
                }
            }
            if *mask != 0 {
                f.write_str("·e")?;
                for j in 0..self.m {
                    if mask & (1 << j) != 0 {
                        write!(f, "{}", j + 1)?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl CliffordPolynomial {
    pub fn zero(m: usize) -> Result<Self> {
        if !(1..=MAX_DIMENSION).contains(&m) {
            return Err(Error::UnsupportedDimension(m, 1, MAX_DIMENSION));
        }
        Ok(Self { m, terms: BTreeMap::new() })
    }

    /// Single term `c · x^α e_A` (`mask` selects `A`).
    pub fn monomial(m: usize, exps: Exponents, mask: u32, c: Q) -> Result<Self> {
        if exps.len() != m {
            return Err(Error::DimensionMismatch { expected: m, got: exps.len() });
        }
        if mask >> m != 0 {
            return Err(Error::InvalidArgument(format!("blade mask {mask:#b} exceeds dimension {m}")));
        }
        let mut p = Self::zero(m)?;
        p.add_term(exps, mask, c);
        Ok(p)
    }

    /// The constant scalar `c`.
    pub fn constant(m: usize, c: Q) -> Result<Self> {
        Self::monomial(m, vec![0; m], 0, c)
    }

    /// The scalar coordinate `x_j` (1-based).
    pub fn coordinate(m: usize, j: usize) -> Result<Self> {
        if j == 0 || j > m {
            return Err(Error::InvalidArgument(format!("coordinate x{j} does not exist for m = {m}")));
        }
        let mut exps = vec![0; m];
        exps[j - 1] = 1;
        Self::monomial(m, exps, 0, Q::one())
    }

    /// The vector variable `x = Σ_j x_j e_j`.
    pub fn position(m: usize) -> Result<Self> {
        let mut p = Self::zero(m)?;
        for j in 0..m {
            let mut exps = vec![0; m];
            exps[j] = 1;
            p.add_term(exps, 1 << j, Q::one());
        }
        Ok(p)
    }

    /// `|x|^2 = Σ_j x_j^2` as a scalar polynomial.
    pub fn radius_squared(m: usize) -> Result<Self> {
        let mut p = Self::zero(m)?;
        for j in 0..m {
            let mut exps = vec![0; m];
            exps[j] = 2;
            p.add_term(exps, 0, Q::one());
        }
        Ok(p)
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn add_term(&mut self, exps: Exponents, mask: u32, c: Q) {
        if c.is_zero() {
            return;
        }
        let key = (exps, mask);
        let entry = self.terms.entry(key.clone()).or_insert_with(Q::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, u32, &Q)> {
        self.terms.iter().map(|((e, mask), c)| (e, *mask, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Highest total degree (`None` for the zero polynomial).
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|(e, _)| e.iter().sum()).max()
    }

    /// Whether every term has total degree `k` (the zero polynomial is homogeneous of every degree).
    pub fn is_homogeneous(&self, k: u32) -> bool {
        self.terms.keys().all(|(e, _)| e.iter().sum::<u32>() == k)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.m != other.m {
            return Err(Error::DimensionMismatch { expected: self.m, got: other.m });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for ((e, mask), c) in &other.terms {
            out.add_term(e.clone(), *mask, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-Q::one()))
    }

    pub fn scale(&self, c: &Q) -> Self {
        let mut out = Self { m: self.m, terms: BTreeMap::new() };
        for ((e, mask), v) in &self.terms {
            out.add_term(e.clone(), *mask, v * c);
        }
        out
    }

    /// Geometric product `self · other` (Clifford product of coefficients, product of monomials).
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = Self { m: self.m, terms: BTreeMap::new() };
        for ((e1, a), c1) in &self.terms {
            for ((e2, b), c2) in &other.terms {
                let exps: Exponents = e1.iter().zip(e2).map(|(x, y)| x + y).collect();
                let sign = blade_product_sign(*a, *b);
                let c = c1 * c2;
                out.add_term(exps, a ^ b, if sign < 0.0 { -c } else { c });
            }
        }
        Ok(out)
    }

    /// Left multiplication by the generator `e_j` (1-based).
    pub fn left_generator_mul(&self, j: usize) -> Self {
        let g = 1u32 << (j - 1);
        let mut out = Self { m: self.m, terms: BTreeMap::new() };
        for ((e, mask), c) in &self.terms {
            let sign = blade_product_sign(g, *mask);
            out.add_term(e.clone(), g ^ mask, if sign < 0.0 { -c.clone() } else { c.clone() });
        }
        out
    }

    /// `∂/∂x_j` (1-based).
    pub fn partial(&self, j: usize) -> Self {
        let mut out = Self { m: self.m, terms: BTreeMap::new() };
        for ((e, mask), c) in &self.terms {
            let a = e[j - 1];
            if a == 0 {
                continue;
            }
            let mut exps = e.clone();
            exps[j - 1] -= 1;
            out.add_term(exps, *mask, c * q(a as i64));
        }
        out
    }

    /// Dirac operator `∂_x = Σ_j e_j ∂_{x_j}`, acting from the left.
    pub fn dirac(&self) -> Self {
        let mut out = Self { m: self.m, terms: BTreeMap::new() };
        for j in 1..=self.m {
            for ((e, mask), c) in &self.partial(j).left_generator_mul(j).terms {
                out.add_term(e.clone(), *mask, c.clone());
            }
        }
        out
    }

    /// Laplacian `Σ_j ∂²_{x_j}`, componentwise.
    pub fn laplace(&self) -> Self {
        let mut out = Self { m: self.m, terms: BTreeMap::new() };
        for j in 1..=self.m {
            for ((e, mask), c) in &self.partial(j).partial(j).terms {
                out.add_term(e.clone(), *mask, c.clone());
            }
        }
        out
    }

    /// Exact value at a rational point.
    pub fn eval_exact(&self, x: &[Q]) -> Result<BTreeMap<u32, Q>> {
        if x.len() != self.m {
            return Err(Error::DimensionMismatch { expected: self.m, got: x.len() });
        }
        let mut out: BTreeMap<u32, Q> = BTreeMap::new();
        for ((e, mask), c) in &self.terms {
            let mut v = c.clone();
            for (xi, &a) in x.iter().zip(e) {
                for _ in 0..a {
                    v *= xi;
                }
            }
            *out.entry(*mask).or_insert_with(Q::zero) += v;
        }
        out.retain(|_, v| !v.is_zero());
        Ok(out)
    }

    pub fn eval(&self, x: &Vector) -> Result<Multivector> {
        if x.dim() != self.m {
            return Err(Error::DimensionMismatch { expected: self.m, got: x.dim() });
        }
        Ok(self.compile().eval(x))
    }

    /// Floating-point evaluator.
    pub fn compile(&self) -> CompiledPolynomial {
        CompiledPolynomial {
            m: self.m,
            terms: self
                .terms
                .iter()
                .map(|((e, mask), c)| (e.iter().map(|&a| a as i32).collect(), *mask, to_f64(c)))
                .collect(),
        }
    }

    /// Debug dump `[{"exponents": [...], "blade": mask, "coeff": "p/q"}, ...]`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.terms
                .iter()
                .map(|((e, mask), c)| {
                    serde_json::json!({ "exponents": e, "blade": mask, "coeff": c.to_string() })
                })
                .collect(),
        )
    }
}

/// Floating-point form of a [`CliffordPolynomial`].
#[derive(Clone, Debug)]
pub struct CompiledPolynomial {
    m: usize,
    terms: Vec<(Vec<i32>, u32, f64)>,
}

impl CompiledPolynomial {
    pub fn eval(&self, x: &Vector) -> Multivector {
        let mut out = vec![Complex64::zero(); 1 << self.m];
        let xs = x.components();
        for (e, mask, c) in &self.terms {
            let v = e.iter().zip(xs).fold(*c, |acc, (&a, &xi)| acc * xi.powi(a));
            out[*mask as usize] += v;
        }
        Multivector::from_coeffs(self.m, out).expect("length 2^m")
    }
}

/// All exponent vectors of total degree `k` in `m` variables, in descending lexicographic order.
pub fn monomials(m: usize, k: u32) -> Vec<Exponents> {
    fn rec(m: usize, k: u32, prefix: &mut Exponents, out: &mut Vec<Exponents>) {
        if prefix.len() == m - 1 {
            prefix.push(k);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for a in (0..=k).rev() {
            prefix.push(a);
            rec(m, k - a, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(m, k, &mut Vec::with_capacity(m), &mut out);
    out
}

/// `dim H_k = (2k+m-2)(k+m-3)! / (k!(m-2)!)` for `m ≥ 2` (with `dim H_0 = 1`).
pub fn harmonic_dimension(m: usize, k: usize) -> usize {
    if k == 0 {
        return 1;
    }
    let binom = |n: usize, r: usize| -> usize {
        (0..r).fold(1usize, |acc, s| acc * (n - s) / (s + 1))
    };
    // C(k+m-1, m-1) - C(k+m-3, m-1)
    binom(k + m - 1, m - 1) - if k >= 2 { binom(k + m - 3, m - 1) } else { 0 }
}

/// Basis of the nullspace of a rational matrix (rows × cols), from its reduced row echelon form.
fn nullspace(mut a: Vec<Vec<Q>>, cols: usize) -> Vec<Vec<Q>> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(p) = (row..a.len()).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(row, p);
        let inv = Q::one() / &a[row][col];
        for v in a[row].iter_mut() {
            *v *= &inv;
        }
        for r in 0..a.len() {
            if r != row && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in 0..cols {
                    let delta = &f * &a[row][c];
                    a[r][c] -= delta;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == a.len() {
            break;
        }
    }
    (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![Q::zero(); cols];
            v[free] = Q::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -a[r][free].clone();
            }
            v
        })
        .collect()
}

/// Scalar harmonic homogeneous polynomials of degree `k` spanning `H_k`, from the exact
/// nullspace of the Laplacian on monomials (deterministic order).
pub fn harmonic_basis(m: usize, k: usize) -> Result<Vec<CliffordPolynomial>> {
    if !(2..=MAX_DIMENSION).contains(&m) {
        return Err(Error::UnsupportedDimension(m, 2, MAX_DIMENSION));
    }
    let cols = monomials(m, k as u32);
    if k < 2 {
        return cols
            .into_iter()
            .map(|e| CliffordPolynomial::monomial(m, e, 0, Q::one()))
            .collect();
    }
    let rows = monomials(m, k as u32 - 2);
    let index: BTreeMap<&Exponents, usize> = rows.iter().enumerate().map(|(n, e)| (e, n)).collect();
    let mut matrix = vec![vec![Q::zero(); cols.len()]; rows.len()];
    for (c, e) in cols.iter().enumerate() {
        for j in 0..m {
            if e[j] >= 2 {
                let mut lower = e.clone();
                lower[j] -= 2;
                matrix[index[&lower]][c] += q((e[j] * (e[j] - 1)) as i64);
            }
        }
    }
    nullspace(matrix, cols.len())
        .into_iter()
        .map(|v| {
            let mut p = CliffordPolynomial::zero(m)?;
            for (e, c) in cols.iter().zip(v) {
                p.add_term(e.clone(), 0, c);
            }
            Ok(p)
        })
        .collect()
}

/// Homogeneous polynomial of degree `k` annihilated by the Dirac operator.
#[derive(Clone, Debug, PartialEq)]
pub struct SphericalMonogenic {
    pub k: usize,
    pub poly: CliffordPolynomial,
}

/// Monogenic component `M = H + x ∂_x H / (m+2k-2)` of a harmonic `H` of degree `k`.
pub fn monogenic_projection(m: usize, k: usize, h: &CliffordPolynomial) -> Result<SphericalMonogenic> {
    if h.dim() != m {
        return Err(Error::DimensionMismatch { expected: m, got: h.dim() });
    }
    if !h.is_homogeneous(k as u32) || !h.laplace().is_zero() {
        return Err(Error::NonHarmonic);
    }
    if k == 0 {
        return Ok(SphericalMonogenic { k, poly: h.clone() });
    }
    let x = CliffordPolynomial::position(m)?;
    let correction = x.mul(&h.dirac())?.scale(&q_frac(1, (m + 2 * k - 2) as i64));
    Ok(SphericalMonogenic { k, poly: h.add(&correction)? })
}

/// `∫_{S^{m-1}} x^α dσ / |S^{m-1}| = Π(α_i-1)!! / (m(m+2)⋯(m+|α|-2))`, zero unless every `α_i` is even.
pub fn sphere_moment(exps: &[u32]) -> Q {
    if exps.iter().any(|a| a % 2 == 1) {
        return Q::zero();
    }
    let m = exps.len() as i64;
    let mut num = Q::one();
    for &a in exps {
        let mut n = a as i64 - 1;
        while n > 1 {
            num *= q(n);
            n -= 2;
        }
    }
    let total: i64 = exps.iter().map(|&a| a as i64).sum();
    let mut den = Q::one();
    let mut n = m;
    while n <= m + total - 2 {
        den *= q(n);
        n += 2;
    }
    num / den
}

/// Bilinear pairing of two polynomials weighted by a monomial moment functional,
/// summing blade components.
fn moment_pairing(a: &CliffordPolynomial, b: &CliffordPolynomial, moment: impl Fn(&[u32]) -> Q) -> Q {
    let mut by_blade: BTreeMap<u32, Vec<(&Exponents, &Q)>> = BTreeMap::new();
    for ((e, mask), c) in &b.terms {
        by_blade.entry(*mask).or_default().push((e, c));
    }
    let mut total = Q::zero();
    for ((e1, mask), c1) in &a.terms {
        if let Some(list) = by_blade.get(mask) {
            for (e2, c2) in list {
                let exps: Vec<u32> = e1.iter().zip(e2.iter()).map(|(x, y)| x + y).collect();
                let mom = moment(&exps);
                if !mom.is_zero() {
                    total += c1 * *c2 * mom;
                }
            }
        }
    }
    total
}

/// Normalized sphere inner product `Σ_A ∫_S P_A Q_A dσ / |S|`.
pub fn sphere_inner(a: &CliffordPolynomial, b: &CliffordPolynomial) -> Result<Q> {
    a.check(b)?;
    Ok(moment_pairing(a, b, sphere_moment))
}

/// `∫_{ℝ^m} x^α e^{-|x|^2} dx / π^{m/2} = Π (α_i-1)!! / 2^{α_i/2}`, zero unless every `α_i` is even.
pub fn gaussian_moment(exps: &[u32]) -> Q {
    if exps.iter().any(|a| a % 2 == 1) {
        return Q::zero();
    }
    let mut v = Q::one();
    for &a in exps {
        let mut n = a as i64 - 1;
        while n > 1 {
            v *= q(n);
            n -= 2;
        }
        v /= q(1i64 << (a / 2));
    }
    v
}

/// Orthogonal (under [`sphere_inner`]) spherical monogenics spanning `M_k`, obtained from the
/// harmonic basis by projection and exact Gram–Schmidt. Index `ℓ` is position + 1.
pub fn monogenic_basis(m: usize, k: usize) -> Result<Vec<SphericalMonogenic>> {
    let mut out: Vec<(SphericalMonogenic, Q)> = Vec::new();
    for h in harmonic_basis(m, k)? {
        let mut v = monogenic_projection(m, k, &h)?.poly;
        for (u, norm) in &out {
            let c = sphere_inner(&v, &u.poly)? / norm;
            v = v.sub(&u.poly.scale(&c))?;
        }
        let norm = sphere_inner(&v, &v)?;
        if !norm.is_zero() {
            out.push((SphericalMonogenic { k, poly: v }, norm));
        }
    }
    Ok(out.into_iter().map(|(s, _)| s).collect())
}

/// Which half of the basis a function belongs to: `ψ_{2p,k,ℓ}` or `ψ_{2p+1,k,ℓ}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Parity {
    #[serde(rename = "2p")]
    Even,
    #[serde(rename = "2p+1")]
    Odd,
}

impl Parity {
    pub fn of(j: usize) -> Self {
        if j % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "2p",
            Parity::Odd => "2p+1",
        })
    }
}

impl std::str::FromStr for Parity {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "2p" | "even" => Ok(Parity::Even),
            "2p+1" | "odd" => Ok(Parity::Odd),
            other => Err(Error::InvalidArgument(format!("unknown parity {other:?}"))),
        }
    }
}

/// Basis function `ψ_{j,k,ℓ}`: `L_p^{m/2+k-1}(|x|²) M_k(x) e^{-|x|²/2}` for `j = 2p`,
/// `L_p^{m/2+k}(|x|²) x M_k(x) e^{-|x|²/2}` for `j = 2p+1`.
#[derive(Clone, Debug)]
pub struct BasisFunction {
    pub m: usize,
    pub j: usize,
    pub k: usize,
    pub l: usize,
    pub monogenic: SphericalMonogenic,
    pub parity: Parity,
}

impl BasisFunction {
    /// `p = ⌊j/2⌋`.
    pub fn p(&self) -> usize {
        self.j / 2
    }

    /// Laguerre parameter of the radial factor.
    pub fn laguerre_alpha(&self) -> f64 {
        let base = self.m as f64 / 2.0 + self.k as f64;
        match self.parity {
            Parity::Even => base - 1.0,
            Parity::Odd => base,
        }
    }

    /// Floating-point evaluator.
    pub fn evaluator(&self) -> PsiEvaluator {
        PsiEvaluator {
            m: self.m,
            p: self.p(),
            alpha: self.laguerre_alpha(),
            parity: self.parity,
            monogenic: self.monogenic.poly.compile(),
        }
    }

    /// Exact polynomial part `P` with `ψ = P e^{-|x|²/2}`.
    pub fn gaussian_class(&self) -> Result<GaussianClass> {
        let m = self.m;
        let twice_alpha = (m + 2 * self.k) as i64 - if self.parity == Parity::Even { 2 } else { 0 };
        let lag = laguerre_in_r2(m, self.p(), q_frac(twice_alpha, 2))?;
        let angular = match self.parity {
            Parity::Even => self.monogenic.poly.clone(),
            Parity::Odd => CliffordPolynomial::position(m)?.mul(&self.monogenic.poly)?,
        };
        Ok(GaussianClass { poly: lag.mul(&angular)? })
    }
}

/// `L_p^α(|x|²)` as an exact scalar polynomial, `L_p^α(t) = Σ_n (-1)^n Π_{s=n+1}^{p}(α+s) / ((p-n)! n!) tⁿ`.
fn laguerre_in_r2(m: usize, p: usize, alpha: Q) -> Result<CliffordPolynomial> {
    let r2 = CliffordPolynomial::radius_squared(m)?;
    let mut power = CliffordPolynomial::constant(m, Q::one())?;
    let mut out = CliffordPolynomial::zero(m)?;
    for n in 0..=p {
        let mut c = if n % 2 == 0 { Q::one() } else { -Q::one() };
        for s in n + 1..=p {
            c *= &alpha + q(s as i64);
        }
        for s in 1..=(p - n) {
            c /= q(s as i64);
        }
        for s in 1..=n {
            c /= q(s as i64);
        }
        out = out.add(&power.scale(&c))?;
        power = power.mul(&r2)?;
    }
    Ok(out)
}

/// Builds `ψ_{j,k,ℓ}` in dimension `m` (`ℓ` is 1-based over [`monogenic_basis`]).
pub fn psi(j: usize, k: usize, l: usize, m: usize) -> Result<BasisFunction> {
    let basis = monogenic_basis(m, k)?;
    if l == 0 || l > basis.len() {
        return Err(Error::InvalidArgument(format!(
            "l = {l} out of range 1..={} for m = {m}, k = {k}",
            basis.len()
        )));
    }
    Ok(BasisFunction {
        m,
        j,
        k,
        l,
        monogenic: basis[l - 1].clone(),
        parity: Parity::of(j),
    })
}

/// Value of `ψ` at `x`.
pub fn eval_psi(b: &BasisFunction, x: &Vector) -> Result<Multivector> {
    if x.dim() != b.m {
        return Err(Error::DimensionMismatch { expected: b.m, got: x.dim() });
    }
    Ok(b.evaluator().eval(x))
}

/// Floating-point evaluator of a [`BasisFunction`].
#[derive(Clone, Debug)]
pub struct PsiEvaluator {
    m: usize,
    p: usize,
    alpha: f64,
    parity: Parity,
    monogenic: CompiledPolynomial,
}

impl PsiEvaluator {
    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn eval(&self, x: &Vector) -> Multivector {
        let r2 = x.dot(x);
        let radial = laguerre(self.p, self.alpha, r2) * (-r2 / 2.0).exp();
        let mk = self.monogenic.eval(x);
        let angular = match self.parity {
            Parity::Even => mk,
            Parity::Odd => &x.to_multivector() * &mk,
        };
        angular.scale(Complex64::new(radial, 0.0))
    }
}

/// Function `P(x) e^{-|x|²/2}` with exact polynomial `P`; closed under `∂_x - x`.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussianClass {
    pub poly: CliffordPolynomial,
}

impl GaussianClass {
    pub fn eval(&self, x: &Vector) -> Result<Multivector> {
        let v = self.poly.eval(x)?;
        Ok(v.scale(Complex64::new((-x.dot(x) / 2.0).exp(), 0.0)))
    }

    pub fn scale(&self, c: &Q) -> Self {
        Self { poly: self.poly.scale(c) }
    }

    /// Multiplication by the vector variable from the left.
    pub fn mul_x(&self) -> Result<Self> {
        Ok(Self { poly: CliffordPolynomial::position(self.poly.dim())?.mul(&self.poly)? })
    }

    /// Exact Dirac derivative: `∂_x[P e^{-r²/2}] = (∂_x P - x P) e^{-r²/2}`.
    pub fn dirac(&self) -> Result<Self> {
        let xp = CliffordPolynomial::position(self.poly.dim())?.mul(&self.poly)?;
        Ok(Self { poly: self.poly.dirac().sub(&xp)? })
    }

    /// `∂_{x_j}[P e^{-r²/2}] = (∂_j P - x_j P) e^{-r²/2}` (1-based `j`).
    pub fn partial(&self, j: usize) -> Result<Self> {
        let xj = CliffordPolynomial::coordinate(self.poly.dim(), j)?.mul(&self.poly)?;
        Ok(Self { poly: self.poly.partial(j).sub(&xj)? })
    }

    /// `L²` pairing `Σ_A ∫ f_A g_A dx`, in units of `π^{m/2}`.
    pub fn l2_inner(&self, other: &Self) -> Result<Q> {
        self.poly.check(&other.poly)?;
        Ok(moment_pairing(&self.poly, &other.poly, gaussian_moment))
    }
}

/// `(∂_x - x)[P e^{-r²/2}] = (∂_x P - 2 x P) e^{-r²/2}`, exactly.
pub fn apply_dirac_minus_x(f: &GaussianClass) -> Result<GaussianClass> {
    let x = CliffordPolynomial::position(f.poly.dim())?;
    let two_xp = x.mul(&f.poly)?.scale(&q(2));
    Ok(GaussianClass { poly: f.poly.dirac().sub(&two_xp)? })
}

/// `((-1)^j 2^{-j} / ⌊j/2⌋!) (∂_x - x)^j [M_k e^{-r²/2}]`, which equals `ψ_{j,k,ℓ}`.
pub fn psi_by_creation(j: usize, monogenic: &SphericalMonogenic) -> Result<GaussianClass> {
    let mut f = GaussianClass { poly: monogenic.poly.clone() };
    for _ in 0..j {
        f = apply_dirac_minus_x(&f)?;
    }
    let mut c = q_frac(if j % 2 == 0 { 1 } else { -1 }, 1i64 << j);
    for s in 1..=(j / 2) {
        c /= q(s as i64);
    }
    Ok(f.scale(&c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn poly(m: usize, terms: &[(&[u32], u32, i64)]) -> CliffordPolynomial {
        let mut p = CliffordPolynomial::zero(m).unwrap();
        for (e, mask, c) in terms {
            p.add_term(e.to_vec(), *mask, q(*c));
        }
        p
    }

    #[test]
    fn dirac_examples() {
        for m in 2..=5 {
            let x = CliffordPolynomial::position(m).unwrap();
            assert_eq!(x.dirac(), CliffordPolynomial::constant(m, q(-(m as i64))).unwrap());
        }
        let x1 = CliffordPolynomial::coordinate(3, 1).unwrap();
        assert_eq!(x1.dirac(), poly(3, &[(&[0, 0, 0], 0b001, 1)]));
    }

    #[test]
    fn dirac_squares_to_minus_laplace() {
        let p = poly(3, &[(&[3, 0, 0], 0, 2), (&[1, 1, 1], 0b011, -1), (&[0, 2, 1], 0b100, 5), (&[1, 0, 2], 0b111, 3)]);
        assert_eq!(p.dirac().dirac(), p.laplace().scale(&q(-1)));
    }

    #[test]
    fn projection_examples() {
        let h = CliffordPolynomial::coordinate(2, 1).unwrap();
        let m = monogenic_projection(2, 1, &h).unwrap();
        let mut expected = CliffordPolynomial::zero(2).unwrap();
        expected.add_term(vec![1, 0], 0, q_frac(1, 2));
        expected.add_term(vec![0, 1], 0b11, q_frac(-1, 2));
        assert_eq!(m.poly, expected);
        assert!(m.poly.dirac().is_zero());
        let one = CliffordPolynomial::constant(4, Q::one()).unwrap();
        assert_eq!(monogenic_projection(4, 0, &one).unwrap().poly, one);
        let h = poly(3, &[(&[1, 1, 0], 0, 1)]);
        assert!(monogenic_projection(3, 2, &h).unwrap().poly.dirac().is_zero());
        let not_harmonic = poly(3, &[(&[2, 0, 0], 0, 1)]);
        assert!(matches!(monogenic_projection(3, 2, &not_harmonic), Err(Error::NonHarmonic)));
    }

    #[test]
    fn harmonic_basis_examples() {
        let b = harmonic_basis(2, 2).unwrap();
        assert_eq!(b, vec![poly(2, &[(&[1, 1], 0, 1)]), poly(2, &[(&[2, 0], 0, -1), (&[0, 2], 0, 1)])]);
        let b = harmonic_basis(3, 1).unwrap();
        assert_eq!(b.len(), 3);
        for m in 2..=6 {
            for k in 0..=5 {
                let b = harmonic_basis(m, k).unwrap();
                assert_eq!(b.len(), harmonic_dimension(m, k), "m={m} k={k}");
                assert!(b.iter().all(|h| h.laplace().is_zero() && h.is_homogeneous(k as u32)));
            }
        }
        assert_eq!(harmonic_dimension(3, 4), 9);
        assert_eq!(harmonic_dimension(4, 2), 9);
    }

    #[test]
    fn monogenic_basis_is_exact_and_orthogonal() {
        for m in 2..=6 {
            for k in 0..=4 {
                let basis = monogenic_basis(m, k).unwrap();
                assert_eq!(basis.len(), harmonic_dimension(m, k));
                for (a, ma) in basis.iter().enumerate() {
                    assert!(ma.poly.dirac().is_zero(), "m={m} k={k}");
                    assert!(ma.poly.is_homogeneous(k as u32));
                    for mb in &basis[a + 1..] {
                        assert!(sphere_inner(&ma.poly, &mb.poly).unwrap().is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn fischer_split() {
        // H = M_k + x M_{k-1} with M_{k-1} = -∂H / (m+2k-2)
        for (m, k) in [(3, 2), (4, 3), (5, 2)] {
            for h in harmonic_basis(m, k).unwrap() {
                let mk = monogenic_projection(m, k, &h).unwrap().poly;
                let lower = h.dirac().scale(&q_frac(-1, (m + 2 * k - 2) as i64));
                assert!(lower.dirac().is_zero());
                let x = CliffordPolynomial::position(m).unwrap();
                assert_eq!(mk.add(&x.mul(&lower).unwrap()).unwrap(), h);
            }
        }
    }

    #[test]
    fn homogeneity_under_scaling() {
        let b = psi(0, 3, 2, 4).unwrap();
        let mono = b.monogenic.poly.compile();
        let x = Vector::new(vec![0.3, -0.7, 1.1, 0.2]).unwrap();
        let lam = 1.7;
        let lhs = mono.eval(&x.scaled(lam));
        let rhs = mono.eval(&x).scale(Complex64::new(lam.powi(3), 0.0));
        assert!(lhs.max_abs_diff(&rhs) < 1e-13);
    }

    #[test]
    fn psi_examples() {
        let x = Vector::new(vec![0.4, -1.2, 0.5]).unwrap();
        let g = (-x.dot(&x) / 2.0).exp();
        let v = eval_psi(&psi(0, 0, 1, 3).unwrap(), &x).unwrap();
        assert!((v.scalar_part().re - g).abs() < 1e-15);
        let v = eval_psi(&psi(1, 0, 1, 3).unwrap(), &x).unwrap();
        assert!(v.max_abs_diff(&x.to_multivector().scale(Complex64::new(g, 0.0))) < 1e-15);
        assert!(psi(0, 1, 4, 3).is_err());
    }

    #[test]
    fn exact_class_matches_evaluator() {
        let x = Vector::new(vec![0.4, -1.2, 0.5, 0.9]).unwrap();
        for (j, k, l) in [(0, 0, 1), (3, 1, 2), (4, 2, 3), (5, 1, 4)] {
            let b = psi(j, k, l, 4).unwrap();
            let exact = b.gaussian_class().unwrap().eval(&x).unwrap();
            assert!(exact.max_abs_diff(&eval_psi(&b, &x).unwrap()) < 1e-13);
        }
    }

    #[test]
    fn dirac_minus_x_examples() {
        let g = GaussianClass { poly: CliffordPolynomial::constant(3, Q::one()).unwrap() };
        let once = apply_dirac_minus_x(&g).unwrap();
        assert_eq!(once.poly, CliffordPolynomial::position(3).unwrap().scale(&q(-2)));
        // (∂-x)² e^{-r²/2} = (2m - 4r²) e^{-r²/2} = 4 ψ_{2,0,1}
        let twice = apply_dirac_minus_x(&once).unwrap();
        let psi2 = psi(2, 0, 1, 3).unwrap().gaussian_class().unwrap();
        assert_eq!(twice, psi2.scale(&q(4)));
    }

    #[test]
    fn creation_formula_reproduces_basis() {
        for m in [2, 3, 4] {
            for k in 0..=2 {
                for (l, mono) in monogenic_basis(m, k).unwrap().iter().enumerate() {
                    for j in 0..=3 {
                        let direct = psi(j, k, l + 1, m).unwrap().gaussian_class().unwrap();
                        assert_eq!(psi_by_creation(j, mono).unwrap(), direct, "m={m} j={j} k={k}");
                    }
                }
            }
        }
    }

    #[test]
    fn basis_is_orthogonal_in_l2() {
        for m in [2, 3, 4] {
            let mut functions = Vec::new();
            for k in 0..=2 {
                for l in 1..=harmonic_dimension(m, k).min(2) {
                    for j in 0..=2 {
                        functions.push(((j, k, l), psi(j, k, l, m).unwrap().gaussian_class().unwrap()));
                    }
                }
            }
            for (a, (ia, fa)) in functions.iter().enumerate() {
                assert!(fa.l2_inner(fa).unwrap() > Q::zero());
                for (ib, fb) in &functions[a + 1..] {
                    assert!(fa.l2_inner(fb).unwrap().is_zero(), "m={m} {ia:?} {ib:?}");
                }
            }
        }
    }

    #[test]
    fn moments() {
        // ∫ x1² dσ/|S| = 1/m
        assert_eq!(sphere_moment(&[2, 0, 0]), q_frac(1, 3));
        assert_eq!(sphere_moment(&[2, 2, 0, 0]), q_frac(1, 24));
        assert_eq!(sphere_moment(&[1, 1]), Q::zero());
        // ∫ x² e^{-x²} dx = √π/2
        assert_eq!(gaussian_moment(&[2]), q_frac(1, 2));
        assert_eq!(gaussian_moment(&[4, 0]), q_frac(3, 4));
    }

    #[test]
    fn json_dump_lists_terms() {
        let m = monogenic_projection(2, 1, &CliffordPolynomial::coordinate(2, 1).unwrap()).unwrap();
        let v = m.poly.to_json();
        assert_eq!(v.as_array().unwrap().len(), 2);
        assert!(v.as_array().unwrap().iter().any(|t| t["coeff"] == "1/2" && t["blade"] == 0));
    }

    proptest! {
        #[test]
        fn dirac_squared_is_minus_laplacian(coeffs in proptest::collection::vec((0u32..4, 0u32..4, 0u32..8, -5i64..5), 1..6)) {
            let mut p = CliffordPolynomial::zero(3).unwrap();
            for (a, b, mask, c) in coeffs {
                let a = a.min(3);
                let b = b.min(3 - a);
                p.add_term(vec![a, b, 3 - a - b], mask, q(c));
            }
            prop_assert_eq!(p.dirac().dirac(), p.laplace().scale(&q(-1)));
        }

        #[test]
        fn leibniz_for_vector_variable(coeffs in proptest::collection::vec((0u32..3, 0u32..3, 0u32..4, -4i64..4), 1..5)) {
            // ∂(xP) = -mP - 2E P - x∂P, with E the Euler operator; checked on homogeneous P of degree 2
            let mut p = CliffordPolynomial::zero(2).unwrap();
            for (a, _, mask, c) in coeffs {
                let a = a.min(2);
                p.add_term(vec![a, 2 - a], mask, q(c));
            }
            let x = CliffordPolynomial::position(2).unwrap();
            let lhs = x.mul(&p).unwrap().dirac();
            let rhs = p.scale(&q(-2 - 4)).sub(&x.mul(&p.dirac()).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
