//! Exact term-level kernels `K^i_{±,m}`: finite sums `c · s^p · J̃_α(t)` for the
//! scalar part and for the factor multiplying `x ∧ y`.
//!
//! Coefficients are exact (Gaussian) rationals. Even-dimensional kernels carry a
//! common `√(π/2)` factor, tracked as a flag on every term.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::clifford::{invariants_of, Multivector, ParaBivector, Vector};
use crate::error::{Error, Result};
use crate::exact::{
    q, q_frac, q_from_f64, qc, qc_from_c64, qc_i, qc_is_zero, qc_to_c64, sign_pow, to_f64, Q, QC,
};
use crate::special::{bessel_jtilde_sequence, BesselOrder};

/// Largest dimension accepted by the symbolic constructors.
pub const MAX_KERNEL_DIMENSION: usize = 64;

/// `√(π/2)`, the normalization of even-dimensional kernels.
pub const SQRT_HALF_PI: f64 = 1.2533141373155003;

/// Which member of the pair `K_±` a kernel is.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub fn flip(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    /// `+1` for `K_+`, `-1` for `K_-`.
    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

impl std::str::FromStr for Sign {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "+" | "plus" => Ok(Sign::Plus),
            "-" | "minus" => Ok(Sign::Minus),
            other => Err(Error::InvalidArgument(format!("unknown sign {other:?}"))),
        }
    }
}

/// Dimension parity; selects the real (even) or complex (odd) kernel family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    Even,
    Odd,
}

/// The sign `a` of the kernel system: `(-1)^{m/2}` for even `m`, `(-1)^{(m+1)/2}` for odd `m`.
pub fn system_sign(m: usize) -> i64 {
    let exponent = if m % 2 == 0 { m / 2 } else { m.div_ceil(2) };
    if exponent % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Identifies one kernel of the class: dimension, index, sign and (odd `m`) the free constant `e_i`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelId {
    pub m: usize,
    pub i: usize,
    pub sign: Sign,
    /// Free complex constant of the odd-dimensional family (ignored for even `m`).
    pub e_i: Complex64,
}

impl KernelId {
    /// The `K_+` kernel with `e_i = 1`.
    pub fn new(m: usize, i: usize) -> Result<Self> {
        if !(2..=MAX_KERNEL_DIMENSION).contains(&m) {
            return Err(Error::UnsupportedDimension(m, 2, MAX_KERNEL_DIMENSION));
        }
        if i > m - 2 {
            return Err(Error::IndexOutOfRange { m, i });
        }
        Ok(Self {
            m,
            i,
            sign: Sign::Plus,
            e_i: Complex64::new(1.0, 0.0),
        })
    }

    pub fn with_sign(mut self, sign: Sign) -> Self {
        self.sign = sign;
        self
    }

    pub fn with_e_i(mut self, e_i: Complex64) -> Self {
        self.e_i = e_i;
        self
    }

    pub fn family(&self) -> Family {
        if self.m % 2 == 0 {
            Family::Even
        } else {
            Family::Odd
        }
    }

    /// `λ = (m-2)/2`.
    pub fn lambda(&self) -> f64 {
        (self.m as f64 - 2.0) / 2.0
    }
}

impl fmt::Display for KernelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "K^{}_{{{},{}}}", self.i, self.sign, self.m)?;
        if self.m % 2 == 1 && self.e_i != Complex64::new(1.0, 0.0) {
            write!(f, "(e_i={})", self.e_i)?;
        }
        Ok(())
    }
}

/// Exact real combination `Σ c · s^p · J̃_α(t)`, keyed by `(p, 2α)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TermSum {
    terms: BTreeMap<(u32, i32), Q>,
}

impl TermSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_term(&mut self, s_power: u32, twice_order: i32, coeff: Q) {
        let entry = self.terms.entry((s_power, twice_order)).or_insert_with(Q::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&(s_power, twice_order));
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, i32, &Q)> {
        self.terms.iter().map(|(&(p, o), c)| (p, o, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, s_power: u32, twice_order: i32) -> Q {
        self.terms
            .get(&(s_power, twice_order))
            .cloned()
            .unwrap_or_else(Q::zero)
    }

    pub fn scale(&self, factor: &Q) -> Self {
        let mut out = Self::new();
        for (p, o, c) in self.iter() {
            out.add_term(p, o, c * factor);
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (p, o, c) in other.iter() {
            out.add_term(p, o, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Q::one()))
    }

    /// Multiplication by `s`.
    pub fn mul_s(&self) -> Self {
        let mut out = Self::new();
        for (p, o, c) in self.iter() {
            out.add_term(p + 1, o, c.clone());
        }
        out
    }

    /// Division by `s`; every term must carry at least one power of `s`.
    pub fn div_s(&self) -> Result<Self> {
        let mut out = Self::new();
        for (p, o, c) in self.iter() {
            if p == 0 {
                return Err(Error::NegativeSPower { twice_order: o });
            }
            out.add_term(p - 1, o, c.clone());
        }
        Ok(out)
    }

    /// The operator `z^{-1} ∂_w`, from `z⁻¹∂_w s^a = a s^{a-1}` and `z⁻¹∂_w J̃_α(t) = s J̃_{α+1}(t)`.
    pub fn zinv_dw(&self) -> Self {
        let mut out = Self::new();
        for (p, o, c) in self.iter() {
            if p > 0 {
                out.add_term(p - 1, o, c * q(p as i64));
            }
            out.add_term(p + 1, o + 2, c.clone());
        }
        out
    }
}

/// The three real components `f̃^i_m`, `f̂^i_m`, `g^i_m` of a kernel, without the
/// `√(π/2)` normalization of the even family (it cancels in every identity).
#[derive(Clone, Debug, PartialEq)]
pub struct KernelComponents {
    pub m: usize,
    pub i: usize,
    pub f_tilde: TermSum,
    pub f_hat: TermSum,
    pub g: TermSum,
}

/// `Γ(i+1) / (2^ℓ ℓ! Γ(i+1-2ℓ-shift))` as an exact rational (zero at poles of the denominator).
fn bessel_poly_coeff(i: usize, l: usize, shift: usize) -> Q {
    let lower = i as i64 + 1 - 2 * l as i64 - shift as i64;
    if lower <= 0 {
        return Q::zero();
    }
    let mut num = Q::one();
    for k in (lower as usize)..=i {
        num *= q(k as i64);
    }
    let mut den = Q::one();
    for k in 1..=l {
        den *= q(2 * k as i64);
    }
    num / den
}

/// Builds `f̃^i_m`, `f̂^i_m` and `g^i_m` for either parity of `m`.
pub fn kernel_components(m: usize, i: usize) -> Result<KernelComponents> {
    KernelId::new(m, i)?;
    let m_i = m as i32;
    let mut f_tilde = TermSum::new();
    if i >= 1 {
        for l in 0..=(i - 1) / 2 {
            f_tilde.add_term(
                (i - 1 - 2 * l) as u32,
                m_i - 2 * l as i32 - 3,
                -bessel_poly_coeff(i, l, 1),
            );
        }
    }
    let hat_sign = sign_pow(i as i64) * q(system_sign(m));
    let mut f_hat = TermSum::new();
    let mut g = TermSum::new();
    for l in 0..=i / 2 {
        let c = bessel_poly_coeff(i, l, 0);
        f_hat.add_term((i - 2 * l) as u32, m_i - 2 * l as i32 - 3, &hat_sign * &c);
        g.add_term((i - 2 * l) as u32, m_i - 2 * l as i32 - 1, c);
    }
    Ok(KernelComponents {
        m,
        i,
        f_tilde,
        f_hat,
        g,
    })
}

/// One term `coeff · [√(π/2)] · s^{s_power} · J̃_{order}(t)`.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelTerm {
    pub coeff: QC,
    pub sqrt_pi_over_2: bool,
    pub s_power: u32,
    pub order: BesselOrder,
}

impl KernelTerm {
    fn key(&self) -> (u32, i32, bool) {
        (self.s_power, self.order.twice, self.sqrt_pi_over_2)
    }

    /// Numeric coefficient including the optional `√(π/2)`.
    pub fn numeric_coeff(&self) -> Complex64 {
        let c = qc_to_c64(&self.coeff);
        if self.sqrt_pi_over_2 {
            c * SQRT_HALF_PI
        } else {
            c
        }
    }
}

/// Merges equal `(s_power, order, flag)` keys, drops zeros and sorts.
pub fn canonicalize(terms: Vec<KernelTerm>) -> Vec<KernelTerm> {
    let mut map: BTreeMap<(u32, i32, bool), QC> = BTreeMap::new();
    for t in terms {
        let key = t.key();
        let entry = map.entry(key).or_insert_with(|| qc(Q::zero()));
        *entry = &*entry + &t.coeff;
    }
    map.into_iter()
        .filter(|(_, c)| !qc_is_zero(c))
        .map(|((p, o, flag), coeff)| KernelTerm {
            coeff,
            sqrt_pi_over_2: flag,
            s_power: p,
            order: BesselOrder::from_twice(o),
        })
        .collect()
}

fn terms_from_sum(sum: &TermSum, factor: &QC, flag: bool) -> Vec<KernelTerm> {
    sum.iter()
        .map(|(p, o, c)| KernelTerm {
            coeff: factor * qc(c.clone()),
            sqrt_pi_over_2: flag,
            s_power: p,
            order: BesselOrder::from_twice(o),
        })
        .collect()
}

/// Exact symbolic kernel: `Σ scalar terms + (x ∧ y) Σ bivector terms`.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelExpr {
    pub m: usize,
    pub i: usize,
    pub sign: Sign,
    pub scalar: Vec<KernelTerm>,
    pub bivector: Vec<KernelTerm>,
}

impl KernelExpr {
    pub fn is_zero(&self) -> bool {
        self.scalar.is_empty() && self.bivector.is_empty()
    }

    /// Term-wise negation.
    pub fn negated(&self) -> Self {
        let neg = |ts: &[KernelTerm]| {
            ts.iter()
                .map(|t| KernelTerm {
                    coeff: -t.coeff.clone(),
                    ..t.clone()
                })
                .collect()
        };
        Self {
            scalar: neg(&self.scalar),
            bivector: neg(&self.bivector),
            ..self.clone()
        }
    }

    /// Numeric evaluator for repeated evaluation on grids.
    pub fn compile(&self) -> KernelEvaluator {
        KernelEvaluator::new(self)
    }

    pub fn to_json(&self) -> KernelExprJson {
        KernelExprJson::from(self)
    }
}

/// `K^i_{+,m}` for even `m`: scalar `f̃ + f̂`, bivector factor `g`, all times `√(π/2)`.
pub fn build_kernel_even(m: usize, i: usize) -> Result<KernelExpr> {
    if m % 2 != 0 {
        return Err(Error::InvalidArgument(format!(
            "even-dimensional kernel requested for m = {m}"
        )));
    }
    let c = kernel_components(m, i)?;
    let one = qc(Q::one());
    Ok(KernelExpr {
        m,
        i,
        sign: Sign::Plus,
        scalar: canonicalize(
            terms_from_sum(&c.f_tilde.add(&c.f_hat), &one, true),
        ),
        bivector: canonicalize(terms_from_sum(&c.g, &one, true)),
    })
}

/// `K^i_{+,m}` for odd `m`: scalar `e_i f̃ + I e_i^c f̂`, bivector factor `e_i g`.
pub fn build_kernel_odd(m: usize, i: usize, e_i: Complex64) -> Result<KernelExpr> {
    if m % 2 != 1 {
        return Err(Error::InvalidArgument(format!(
            "odd-dimensional kernel requested for m = {m}"
        )));
    }
    let c = kernel_components(m, i)?;
    let e = qc_from_c64(e_i);
    let i_ec = qc_i() * e.conj();
    let mut scalar = terms_from_sum(&c.f_tilde, &e, false);
    scalar.extend(terms_from_sum(&c.f_hat, &i_ec, false));
    Ok(KernelExpr {
        m,
        i,
        sign: Sign::Plus,
        scalar: canonicalize(scalar),
        bivector: canonicalize(terms_from_sum(&c.g, &e, false)),
    })
}

/// Builds the kernel named by `id`, including the `K_-` member.
pub fn build_kernel(id: &KernelId) -> Result<KernelExpr> {
    let plus = match id.family() {
        Family::Even => build_kernel_even(id.m, id.i)?,
        Family::Odd => build_kernel_odd(id.m, id.i, id.e_i)?,
    };
    Ok(match id.sign {
        Sign::Plus => plus,
        Sign::Minus => minus_counterpart(&plus),
    })
}

/// The even-dimensional Clifford–Fourier kernel `√(π/2)(A + B + (x∧y) C)`, built
/// independently of the general class.
pub fn build_cf_kernel(m: usize) -> Result<KernelExpr> {
    if m % 2 != 0 || !(2..=MAX_KERNEL_DIMENSION).contains(&m) {
        return Err(Error::InvalidArgument(format!(
            "the closed Clifford-Fourier kernel exists for even m only, got {m}"
        )));
    }
    let half = (m / 2) as i64;
    let m_i = m as i64;
    // Γ(m/2) / (2^ℓ ℓ! Γ(m/2 - 2ℓ - shift)), zero at poles
    let coeff = |l: i64, shift: i64| -> Q {
        let lower = half - 2 * l - shift;
        if lower <= 0 {
            return Q::zero();
        }
        let mut num = Q::one();
        for k in lower..half {
            num *= q(k);
        }
        let mut den = Q::one();
        for k in 1..=l {
            den *= q(2 * k);
        }
        num / den
    };
    let term = |c: Q, p: i64, twice: i64| KernelTerm {
        coeff: qc(c),
        sqrt_pi_over_2: true,
        s_power: p as u32,
        order: BesselOrder::from_twice(twice as i32),
    };
    let mut scalar = Vec::new();
    let mut bivector = Vec::new();
    // ⌊m/4 - 3/4⌋ and ⌊m/4 - 1/2⌋; negative bounds give empty sums
    let a_max = (m_i - 3).div_euclid(4);
    let bc_max = (m_i - 2).div_euclid(4);
    for l in 0..=a_max {
        scalar.push(term(coeff(l, 1), half - 2 - 2 * l, m_i - 2 * l - 3));
    }
    for l in 0..=bc_max {
        scalar.push(term(coeff(l, 0), half - 1 - 2 * l, m_i - 2 * l - 3));
        bivector.push(term(-coeff(l, 0), half - 1 - 2 * l, m_i - 2 * l - 1));
    }
    Ok(KernelExpr {
        m,
        i: m / 2 - 1,
        sign: Sign::Plus,
        scalar: canonicalize(scalar),
        bivector: canonicalize(bivector),
    })
}

/// `K(x, -y)^c` at term level: `s ↦ -s`, conjugated coefficients, and one extra
/// sign on the bivector part from `x ∧ (-y) = -(x ∧ y)`.
pub fn minus_counterpart(k: &KernelExpr) -> KernelExpr {
    let map = |ts: &[KernelTerm], extra: i64| {
        canonicalize(
            ts.iter()
                .map(|t| {
                    let sign = sign_pow(t.s_power as i64) * q(extra);
                    KernelTerm {
                        coeff: QC::new(&t.coeff.re * &sign, -(&t.coeff.im * &sign)),
                        ..t.clone()
                    }
                })
                .collect(),
        )
    };
    KernelExpr {
        m: k.m,
        i: k.i,
        sign: k.sign.flip(),
        scalar: map(&k.scalar, 1),
        bivector: map(&k.bivector, -1),
    }
}

/// `z^{-1} ∂_w` applied term by term: `c s^a J̃_α ↦ c a s^{a-1} J̃_α + c s^{a+1} J̃_{α+1}`.
pub fn apply_zinv_dw(terms: &[KernelTerm]) -> Vec<KernelTerm> {
    let mut out = Vec::with_capacity(2 * terms.len());
    for t in terms {
        if t.s_power > 0 {
            out.push(KernelTerm {
                coeff: &t.coeff * qc(q(t.s_power as i64)),
                s_power: t.s_power - 1,
                ..t.clone()
            });
        }
        out.push(KernelTerm {
            s_power: t.s_power + 1,
            order: t.order.succ(),
            ..t.clone()
        });
    }
    canonicalize(out)
}

/// First term where two exact sums disagree.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TermMismatch {
    pub s_power: u32,
    pub twice_order: i32,
    pub expected: String,
    pub got: String,
}

/// Outcome of one exact identity.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub pass: bool,
    pub mismatch: Option<TermMismatch>,
}

/// Collection of exact identity checks.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct IdentityReport {
    pub checks: Vec<IdentityCheck>,
}

impl IdentityReport {
    pub fn all_pass(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.pass)
    }

    pub fn first_failure(&self) -> Option<&IdentityCheck> {
        self.checks.iter().find(|c| !c.pass)
    }

    fn extend(&mut self, other: IdentityReport) {
        self.checks.extend(other.checks);
    }
}

/// Compares two exact sums and locates the first differing `(s_power, order)`.
pub fn compare_terms(name: impl Into<String>, expected: &TermSum, got: &TermSum) -> IdentityCheck {
    let diff = got.sub(expected);
    let mismatch = diff.iter().next().map(|(p, o, _)| TermMismatch {
        s_power: p,
        twice_order: o,
        expected: expected.coeff(p, o).to_string(),
        got: got.coeff(p, o).to_string(),
    });
    IdentityCheck {
        name: name.into(),
        pass: mismatch.is_none(),
        mismatch,
    }
}

/// Checks the step from `source = (m, i)` to `target = (m+2, i+1)`.
///
/// For `i ≥ 1` these are the relations
/// `f̃' = ((i+1)/i) z⁻¹∂_w f̃`, `f̂' = z⁻¹∂_w f̂`, `g' = -(1/(i+1)) z⁻¹∂_w f̃'`;
/// for `i = 0` the boundary rules starting from `f̂⁰`, including the exact `s⁻¹` step.
pub fn verify_recursion_between(
    source: &KernelComponents,
    target: &KernelComponents,
) -> Result<IdentityReport> {
    let (m, i) = (source.m, source.i);
    if target.m != m + 2 || target.i != i + 1 || m % 2 != target.m % 2 {
        return Err(Error::InvalidArgument(format!(
            "recursion links (m, i) = ({m}, {i}) to ({}, {}), got ({}, {})",
            m + 2,
            i + 1,
            target.m,
            target.i
        )));
    }
    let label = |rule: &str| format!("{rule} (m={m}, i={i} -> m={}, i={})", m + 2, i + 1);
    let mut report = IdentityReport::default();
    if i == 0 {
        let f_hat_1 = source.f_hat.zinv_dw();
        // (-1)^{m/2-1} for even m, (-1)^{(m-1)/2} for odd m; both equal -a
        let boundary_sign = q(-system_sign(m));
        let f_tilde_1 = target.f_hat.div_s()?.scale(&boundary_sign);
        let g_1 = target.f_tilde.zinv_dw().scale(&q(-1));
        report.checks.push(compare_terms(label("rec1 f_hat"), &f_hat_1, &target.f_hat));
        report.checks.push(compare_terms(label("rec1 f_tilde"), &f_tilde_1, &target.f_tilde));
        report.checks.push(compare_terms(label("rec1 g"), &g_1, &target.g));
    } else {
        let rule = if i == m - 2 { "rec2" } else { "rel" };
        let f_tilde = source.f_tilde.zinv_dw().scale(&q_frac(i as i64 + 1, i as i64));
        let f_hat = source.f_hat.zinv_dw();
        let g = target.f_tilde.zinv_dw().scale(&q_frac(-1, i as i64 + 1));
        report.checks.push(compare_terms(format!("{} f_tilde", label(rule)), &f_tilde, &target.f_tilde));
        report.checks.push(compare_terms(format!("{} f_hat", label(rule)), &f_hat, &target.f_hat));
        report.checks.push(compare_terms(format!("{} g", label(rule)), &g, &target.g));
    }
    Ok(report)
}

fn verify_recursion_family(m: usize, i: usize, family: Family) -> Result<IdentityReport> {
    let parity_ok = match family {
        Family::Even => m % 2 == 0,
        Family::Odd => m % 2 == 1 && m >= 3,
    };
    if !parity_ok {
        return Err(Error::InvalidArgument(format!(
            "dimension {m} does not belong to the {family:?} family"
        )));
    }
    let source = kernel_components(m, i)?;
    let target = kernel_components(m + 2, i + 1)?;
    verify_recursion_between(&source, &target)
}

/// Exact recursion checks from `(m, i)` to `(m+2, i+1)`, `m` even.
pub fn verify_recursion_even(m: usize, i: usize) -> Result<IdentityReport> {
    verify_recursion_family(m, i, Family::Even)
}

/// Exact recursion checks from `(m, i)` to `(m+2, i+1)`, `m` odd.
pub fn verify_recursion_odd(m: usize, i: usize) -> Result<IdentityReport> {
    verify_recursion_family(m, i, Family::Odd)
}

/// Every recursion step out of dimension `m` (all `i = 0..=m-2`).
pub fn verify_recursion_all(m: usize) -> Result<IdentityReport> {
    let mut report = IdentityReport::default();
    let family = if m % 2 == 0 { Family::Even } else { Family::Odd };
    for i in 0..=m.saturating_sub(2) {
        report.extend(verify_recursion_family(m, i, family)?);
    }
    Ok(report)
}

/// The five structural identities among even-dimensional components:
/// `f̂⁰ = -(-1)^{m/2} f̃¹`, `g⁰ = s⁻¹ g¹`, and the three-term relations at `i = m-2`.
pub fn verify_structural_identities(m: usize) -> Result<IdentityReport> {
    if m % 2 != 0 || m < 4 {
        return Err(Error::InvalidArgument(format!(
            "structural identities are stated for even m >= 4, got {m}"
        )));
    }
    let c = |i: usize| kernel_components(m, i);
    let lower = kernel_components(m - 2, m - 4)?;
    let (c0, c1, top, below) = (c(0)?, c(1)?, c(m - 2)?, c(m - 3)?);
    let a = q(system_sign(m));
    let mm3 = q(m as i64 - 3);
    let mut report = IdentityReport::default();
    report.checks.push(compare_terms(
        format!("f_hat^0 = -(-1)^(m/2) f_tilde^1 (m={m})"),
        &c1.f_tilde.scale(&-a.clone()),
        &c0.f_hat,
    ));
    report.checks.push(compare_terms(
        format!("g^0 = s^-1 g^1 (m={m})"),
        &c1.g.div_s()?,
        &c0.g,
    ));
    report.checks.push(compare_terms(
        format!("g^(m-2) = s g^(m-3) + (m-3) g_(m-2)^(m-4) (m={m})"),
        &below.g.mul_s().add(&lower.g.scale(&mm3)),
        &top.g,
    ));
    report.checks.push(compare_terms(
        format!("f_hat^(m-2) = -s f_hat^(m-3) - (m-3) f_hat_(m-2)^(m-4) (m={m})"),
        &below.f_hat.mul_s().add(&lower.f_hat.scale(&mm3)).scale(&q(-1)),
        &top.f_hat,
    ));
    report.checks.push(compare_terms(
        format!("f_tilde^(m-2) = ((m-2)/(m-3)) s f_tilde^(m-3) + (m-2) f_tilde_(m-2)^(m-4) (m={m})"),
        &below
            .f_tilde
            .mul_s()
            .scale(&q_frac(m as i64 - 2, m as i64 - 3))
            .add(&lower.f_tilde.scale(&q(m as i64 - 2))),
        &top.f_tilde,
    ));
    Ok(report)
}

struct CompiledTerm {
    coeff: Complex64,
    s_power: i32,
    /// Index into the J̃ table (orders step by one from the smallest).
    slot: usize,
}

/// Floating-point evaluator of a [`KernelExpr`].
pub struct KernelEvaluator {
    m: usize,
    min_twice: i32,
    slots: usize,
    scalar: Vec<CompiledTerm>,
    bivector: Vec<CompiledTerm>,
}

impl KernelEvaluator {
    fn new(k: &KernelExpr) -> Self {
        let all = k.scalar.iter().chain(&k.bivector);
        let min_twice = all.clone().map(|t| t.order.twice).min().unwrap_or(0);
        let max_twice = all.map(|t| t.order.twice).max().unwrap_or(0);
        let compile = |ts: &[KernelTerm]| {
            ts.iter()
                .map(|t| CompiledTerm {
                    coeff: t.numeric_coeff(),
                    s_power: t.s_power as i32,
                    slot: ((t.order.twice - min_twice) / 2) as usize,
                })
                .collect()
        };
        Self {
            m: k.m,
            min_twice,
            slots: ((max_twice - min_twice) / 2 + 1) as usize,
            scalar: compile(&k.scalar),
            bivector: compile(&k.bivector),
        }
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    /// Scalar value and bivector factor `g` at the invariants `(s, t)`.
    pub fn eval_st(&self, s: f64, t: f64) -> (Complex64, Complex64) {
        let table = bessel_jtilde_sequence(BesselOrder::from_twice(self.min_twice), self.slots, t)
            .expect("kernel orders are at least -1/2 and t is nonnegative");
        let sum = |ts: &[CompiledTerm]| {
            ts.iter()
                .map(|term| term.coeff * (s.powi(term.s_power) * table[term.slot]))
                .sum::<Complex64>()
        };
        (sum(&self.scalar), sum(&self.bivector))
    }

    pub fn eval(&self, x: &Vector, y: &Vector) -> ParaBivector {
        let inv = invariants_of(x, y);
        let (scalar, g) = self.eval_st(inv.s, inv.t);
        ParaBivector::from_wedge(x, y, scalar, g)
    }
}

/// Numeric value of the kernel at `(x, y)`; parallel vectors use the `J̃` limit.
pub fn eval_kernel(k: &KernelExpr, x: &Vector, y: &Vector) -> Result<ParaBivector> {
    if x.dim() != k.m || y.dim() != k.m {
        return Err(Error::DimensionMismatch {
            expected: k.m,
            got: if x.dim() != k.m { x.dim() } else { y.dim() },
        });
    }
    Ok(k.compile().eval(x, y))
}

/// Residuals of the kernel system at one point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PdeResidual {
    /// `|∂_y[K⁺] - c K⁻ x|` (largest blade coefficient).
    pub y_equation: f64,
    /// `|[K⁺]∂_x - c y K⁻|`.
    pub x_equation: f64,
    /// Local magnitude used to make the residuals relative.
    pub scale: f64,
}

impl PdeResidual {
    pub fn relative(&self) -> f64 {
        self.y_equation.max(self.x_equation) / self.scale
    }
}

/// Constant `c` of the system `∂_y K⁺ = c K⁻ x`: `a` for even `m`, `I a` for odd `m`.
pub fn system_constant(m: usize) -> Complex64 {
    let a = system_sign(m) as f64;
    if m % 2 == 0 {
        Complex64::new(a, 0.0)
    } else {
        Complex64::new(0.0, a)
    }
}

fn shifted(v: &Vector, j: usize, h: f64) -> Vector {
    let mut c = v.components().to_vec();
    c[j] += h;
    Vector::new(c).expect("same dimension")
}

/// Central-difference residuals of `∂_y[K⁺] = c K⁻ x` and `[K⁺]∂_x = c y K⁻`,
/// with `K⁻(x, y) = K⁺(x, -y)^c` and step `h`.
pub fn pde_residual(plus: &KernelExpr, x: &Vector, y: &Vector, h: f64) -> Result<PdeResidual> {
    if plus.sign != Sign::Plus {
        return Err(Error::InvalidArgument("pde_residual expects a K_+ kernel".into()));
    }
    let m = plus.m;
    if x.dim() != m || y.dim() != m {
        return Err(Error::DimensionMismatch { expected: m, got: x.dim().min(y.dim()) });
    }
    let kp = plus.compile();
    let km = minus_counterpart(plus).compile();
    let c = system_constant(m);
    let eval = |x: &Vector, y: &Vector| kp.eval(x, y).to_multivector();
    let mut dy = Multivector::zero(m)?;
    let mut dx = Multivector::zero(m)?;
    for j in 0..m {
        let e_j = Multivector::blade(m, &[j + 1], Complex64::new(1.0, 0.0))?;
        let dk_y = (&eval(x, &shifted(y, j, h)) - &eval(x, &shifted(y, j, -h)))
            .scale(Complex64::new(0.5 / h, 0.0));
        let dk_x = (&eval(&shifted(x, j, h), y) - &eval(&shifted(x, j, -h), y))
            .scale(Complex64::new(0.5 / h, 0.0));
        dy += &(&e_j * &dk_y);
        dx += &(&dk_x * &e_j);
    }
    let k_minus = km.eval(x, y).to_multivector();
    let xv = x.to_multivector();
    let yv = y.to_multivector();
    let rhs_y = (&k_minus * &xv).scale(c);
    let rhs_x = (&yv * &k_minus).scale(c);
    let scale = 1f64
        .max(eval(x, y).max_abs())
        .max(rhs_y.max_abs())
        .max(rhs_x.max_abs())
        .max(dy.max_abs())
        .max(dx.max_abs());
    Ok(PdeResidual {
        y_equation: dy.max_abs_diff(&rhs_y),
        x_equation: dx.max_abs_diff(&rhs_x),
        scale,
    })
}

/// Residuals of the scalar system in `(s, t)`:
/// `∂_s F + t ∂_t G + (m-1) G = c · conj(F(-s,t))` and
/// `∂_s G - (1/t) ∂_t F = c · conj(G(-s,t))`, with `F` the scalar part and `G` the
/// bivector factor (`c = a` for even `m`, `I a` for odd `m`).
pub fn scalar_system_residual(plus: &KernelExpr, s: f64, t: f64, h: f64) -> Result<(f64, f64, f64)> {
    if t <= h {
        return Err(Error::InvalidArgument("t must exceed the difference step".into()));
    }
    let k = plus.compile();
    let c = system_constant(plus.m);
    let (f, g) = k.eval_st(s, t);
    let (fsp, gsp) = k.eval_st(s + h, t);
    let (fsm, gsm) = k.eval_st(s - h, t);
    let (ftp, gtp) = k.eval_st(s, t + h);
    let (ftm, gtm) = k.eval_st(s, t - h);
    let (fr, gr) = k.eval_st(-s, t);
    let ds_f = (fsp - fsm) / (2.0 * h);
    let ds_g = (gsp - gsm) / (2.0 * h);
    let dt_f = (ftp - ftm) / (2.0 * h);
    let dt_g = (gtp - gtm) / (2.0 * h);
    let m1 = plus.m as f64 - 1.0;
    let r1 = ds_f + dt_g * t + g * m1 - c * fr.conj();
    let r2 = ds_g - dt_f / t - c * gr.conj();
    let scale = [f, g * t, ds_f, dt_g * t, dt_f / t, ds_g]
        .iter()
        .map(|v| v.norm())
        .fold(1.0, f64::max);
    Ok((r1.norm(), r2.norm(), scale))
}

/// The ratio `max(|scalar|, max_jk |(x_j y_k - x_k y_j) g|) / ((1+|x|)^i (1+|y|)^i)`,
/// whose supremum is the constant of the polynomial kernel bound.
pub fn bound_ratio(k: &KernelEvaluator, i: usize, x: &Vector, y: &Vector) -> f64 {
    let v = k.eval(x, y);
    let biv = v.bivector.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let weight = ((1.0 + x.norm()) * (1.0 + y.norm())).powi(i as i32);
    v.scalar.norm().max(biv) / weight
}

/// JSON form of a kernel term.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelTermJson {
    pub coeff_re: f64,
    pub coeff_im: f64,
    pub sqrt_pi_over_2: bool,
    pub s_power: u32,
    pub twice_order: i32,
    /// Exact rational coefficients (`"p/q"`), preferred over the floats when present.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coeff_re_exact: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coeff_im_exact: Option<String>,
}

/// JSON form `{"m", "i", "sign", "scalar": [...], "bivector": [...]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelExprJson {
    pub m: usize,
    pub i: usize,
    pub sign: Sign,
    pub scalar: Vec<KernelTermJson>,
    pub bivector: Vec<KernelTermJson>,
}

impl From<&KernelTerm> for KernelTermJson {
    fn from(t: &KernelTerm) -> Self {
        Self {
            coeff_re: to_f64(&t.coeff.re),
            coeff_im: to_f64(&t.coeff.im),
            sqrt_pi_over_2: t.sqrt_pi_over_2,
            s_power: t.s_power,
            twice_order: t.order.twice,
            coeff_re_exact: Some(t.coeff.re.to_string()),
            coeff_im_exact: Some(t.coeff.im.to_string()),
        }
    }
}

fn parse_exact(text: &Option<String>, fallback: f64) -> Result<Q> {
    match text {
        Some(s) => s
            .parse::<Q>()
            .map_err(|e| Error::InvalidArgument(format!("bad rational {s:?}: {e}"))),
        None => Ok(q_from_f64(fallback)),
    }
}

impl TryFrom<&KernelTermJson> for KernelTerm {
    type Error = Error;
    fn try_from(j: &KernelTermJson) -> Result<Self> {
        if j.twice_order < -1 {
            return Err(Error::UnsupportedOrder(j.twice_order as i64));
        }
        Ok(Self {
            coeff: QC::new(
                parse_exact(&j.coeff_re_exact, j.coeff_re)?,
                parse_exact(&j.coeff_im_exact, j.coeff_im)?,
            ),
            sqrt_pi_over_2: j.sqrt_pi_over_2,
            s_power: j.s_power,
            order: BesselOrder::from_twice(j.twice_order),
        })
    }
}

impl From<&KernelExpr> for KernelExprJson {
    fn from(k: &KernelExpr) -> Self {
        Self {
            m: k.m,
            i: k.i,
            sign: k.sign,
            scalar: k.scalar.iter().map(KernelTermJson::from).collect(),
            bivector: k.bivector.iter().map(KernelTermJson::from).collect(),
        }
    }
}

impl TryFrom<&KernelExprJson> for KernelExpr {
    type Error = Error;
    fn try_from(j: &KernelExprJson) -> Result<Self> {
        let parse = |ts: &[KernelTermJson]| -> Result<Vec<KernelTerm>> {
            Ok(canonicalize(
                ts.iter().map(KernelTerm::try_from).collect::<Result<Vec<_>>>()?,
            ))
        };
        Ok(Self {
            m: j.m,
            i: j.i,
            sign: j.sign,
            scalar: parse(&j.scalar)?,
            bivector: parse(&j.bivector)?,
        })
    }
}

/// Largest `|coefficient|` of a term list, for diagnostics.
pub fn max_coeff(terms: &[KernelTerm]) -> f64 {
    terms
        .iter()
        .map(|t| to_f64(&t.coeff.re.abs()).max(to_f64(&t.coeff.im.abs())))
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn term(c: i64, flag: bool, p: u32, twice: i32) -> KernelTerm {
        KernelTerm {
            coeff: qc(q(c)),
            sqrt_pi_over_2: flag,
            s_power: p,
            order: BesselOrder::from_twice(twice),
        }
    }

    fn cterm(re: i64, im: i64, p: u32, twice: i32) -> KernelTerm {
        KernelTerm {
            coeff: QC::new(q(re), q(im)),
            sqrt_pi_over_2: false,
            s_power: p,
            order: BesselOrder::from_twice(twice),
        }
    }

    fn vector(c: &[f64]) -> Vector {
        Vector::new(c.to_vec()).unwrap()
    }

    fn random_vector(rng: &mut ChaCha8Rng, m: usize, radius: f64) -> Vector {
        loop {
            let c: Vec<f64> = (0..m).map(|_| rng.gen_range(-radius..radius)).collect();
            let v = vector(&c);
            if v.norm() <= radius {
                return v;
            }
        }
    }

    #[test]
    fn kernel_m2_i0() {
        let k = build_kernel_even(2, 0).unwrap();
        assert_eq!(k.scalar, vec![term(-1, true, 0, -1)]);
        assert_eq!(k.bivector, vec![term(1, true, 0, 1)]);
        // -cos t + (x∧y) sin t / t at x = e1, y = e2
        let v = eval_kernel(&k, &vector(&[1.0, 0.0]), &vector(&[0.0, 1.0])).unwrap();
        assert_relative_eq!(v.scalar.re, -0.5403023058681398, max_relative = 1e-14);
        assert_relative_eq!(v.bivector[0].re, 0.8414709848078965, max_relative = 1e-14);
    }

    #[test]
    fn zero_y_leaves_only_scalar_limit() {
        let k = build_kernel_even(4, 0).unwrap();
        let v = eval_kernel(&k, &vector(&[1.0, 2.0, 0.0, -1.0]), &Vector::zeros(4).unwrap()).unwrap();
        assert!(v.bivector.iter().all(|b| b.norm() == 0.0));
        // √(π/2) · J̃_{1/2}(0) = √(π/2) · √(2/π) = 1
        assert_relative_eq!(v.scalar.re, 1.0, max_relative = 1e-14);
    }

    #[test]
    fn index_out_of_range_is_rejected() {
        assert!(matches!(build_kernel_even(4, 3), Err(Error::IndexOutOfRange { m: 4, i: 3 })));
        assert!(build_kernel_odd(3, 2, Complex64::new(1.0, 0.0)).is_err());
        assert!(build_kernel_even(3, 0).is_err());
    }

    #[test]
    fn odd_kernel_examples() {
        let one = Complex64::new(1.0, 0.0);
        let k = build_kernel_odd(3, 0, one).unwrap();
        assert_eq!(k.scalar, vec![cterm(0, 1, 0, 0)]);
        // bivector factor is g^0_3 = J̃_{(m-1)/2} = J̃_1
        assert_eq!(k.bivector, vec![cterm(1, 0, 0, 2)]);
        let k = build_kernel_odd(3, 1, one).unwrap();
        assert_eq!(k.scalar, vec![cterm(-1, 0, 0, 0), cterm(0, -1, 1, 0)]);
        assert_eq!(k.bivector, vec![cterm(1, 0, 1, 2)]);
        assert!(build_kernel_odd(5, 2, Complex64::new(0.0, 0.0)).unwrap().is_zero());
    }

    #[test]
    fn fourier_bessel_member() {
        for m in (2..=10).step_by(2) {
            let k = build_kernel_even(m, 0).unwrap();
            let a = system_sign(m);
            assert_eq!(k.scalar, vec![term(a, true, 0, m as i32 - 3)]);
            assert_eq!(k.bivector, vec![term(1, true, 0, m as i32 - 1)]);
        }
    }

    #[test]
    fn clifford_fourier_member_up_to_sign() {
        let cf = build_cf_kernel(2).unwrap();
        assert_eq!(cf.scalar, vec![term(1, true, 0, -1)]);
        assert_eq!(cf.bivector, vec![term(-1, true, 0, 1)]);
        for m in (2..=12).step_by(2) {
            let cf = build_cf_kernel(m).unwrap();
            let k = build_kernel_even(m, m / 2 - 1).unwrap();
            assert_eq!(cf, k.negated(), "m = {m}");
        }
        assert!(build_cf_kernel(5).is_err());
    }

    #[test]
    fn zinv_dw_examples() {
        let out = apply_zinv_dw(&[term(1, false, 2, 3)]);
        assert_eq!(out, vec![term(2, false, 1, 3), term(1, false, 3, 5)]);
        let out = apply_zinv_dw(&[term(7, false, 0, 1)]);
        assert_eq!(out, vec![term(7, false, 1, 3)]);
        // f̂⁰_m → f̂¹_{m+2}
        let f0 = kernel_components(4, 0).unwrap().f_hat;
        let f1 = kernel_components(6, 1).unwrap().f_hat;
        assert_eq!(f0.zinv_dw(), f1);
    }

    #[test]
    fn minus_counterpart_rules() {
        for m in (2..=8).step_by(2) {
            for i in 0..=m - 2 {
                let k = build_kernel_even(m, i).unwrap();
                let minus = minus_counterpart(&k);
                assert!(minus.scalar.iter().chain(&minus.bivector).all(|t| t.coeff.im.is_zero()));
                assert_eq!(minus_counterpart(&minus), k);
            }
        }
        let k = build_kernel_odd(3, 0, Complex64::new(1.0, 0.0)).unwrap();
        let minus = minus_counterpart(&k);
        assert_eq!(minus.scalar, vec![cterm(0, -1, 0, 0)]);
        // x ∧ (-y) flips the bivector once; s^0 adds no second flip
        assert_eq!(minus.bivector, vec![cterm(-1, 0, 0, 2)]);
        assert_eq!(minus.sign, Sign::Minus);
    }

    #[test]
    fn minus_counterpart_matches_pointwise_definition() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (m, i) in [(4, 1), (5, 2), (3, 1), (6, 3)] {
            let id = KernelId::new(m, i).unwrap().with_e_i(Complex64::new(0.3, -1.1));
            let plus = build_kernel(&id).unwrap();
            let minus = build_kernel(&id.with_sign(Sign::Minus)).unwrap();
            for _ in 0..10 {
                let x = random_vector(&mut rng, m, 3.0);
                let y = random_vector(&mut rng, m, 3.0);
                let direct = eval_kernel(&plus, &x, &y.neg()).unwrap().to_multivector().complex_conjugate();
                let via_terms = eval_kernel(&minus, &x, &y).unwrap().to_multivector();
                assert!(direct.max_abs_diff(&via_terms) < 1e-12 * (1.0 + direct.max_abs()));
            }
        }
    }

    #[test]
    fn recursion_examples() {
        assert!(verify_recursion_even(4, 1).unwrap().all_pass());
        assert!(verify_recursion_even(2, 0).unwrap().all_pass());
        assert!(verify_recursion_odd(3, 1).unwrap().all_pass());
        assert!(verify_recursion_odd(5, 2).unwrap().all_pass());
        assert!(verify_recursion_odd(4, 1).is_err());
    }

    #[test]
    fn recursion_all_families() {
        for m in 2..=9 {
            let report = verify_recursion_all(m).unwrap();
            assert!(report.all_pass(), "m={m}: {:?}", report.first_failure());
        }
    }

    #[test]
    fn perturbed_recursion_is_located() {
        let source = kernel_components(4, 1).unwrap();
        let mut target = kernel_components(6, 2).unwrap();
        target.g.add_term(0, 3, q_frac(1, 7));
        let report = verify_recursion_between(&source, &target).unwrap();
        let failure = report.first_failure().unwrap();
        assert!(failure.name.contains(" g"));
        let mismatch = failure.mismatch.as_ref().unwrap();
        assert_eq!((mismatch.s_power, mismatch.twice_order), (0, 3));
    }

    #[test]
    fn s_inverse_precondition_is_enforced() {
        let c = kernel_components(4, 0).unwrap();
        assert!(matches!(c.f_hat.div_s(), Err(Error::NegativeSPower { twice_order: 1 })));
    }

    #[test]
    fn structural_identities_hold() {
        for m in [4, 6, 8, 10] {
            let report = verify_structural_identities(m).unwrap();
            assert_eq!(report.checks.len(), 5);
            assert!(report.all_pass(), "m={m}: {:?}", report.first_failure());
        }
        assert!(verify_structural_identities(5).is_err());
    }

    #[test]
    fn pde_system_residuals() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for m in 2..=6 {
            for i in 0..=m - 2 {
                let k = build_kernel(&KernelId::new(m, i).unwrap()).unwrap();
                for _ in 0..10 {
                    let x = random_vector(&mut rng, m, 3.0);
                    let y = random_vector(&mut rng, m, 3.0);
                    let r = pde_residual(&k, &x, &y, 1e-4).unwrap();
                    assert!(r.relative() < 1e-6, "m={m} i={i}: {r:?}");
                }
            }
        }
    }

    #[test]
    fn wrong_system_constant_is_detected() {
        // negative control: the minus kernel does not satisfy the K_+ system
        let k = build_kernel_even(4, 1).unwrap();
        let x = vector(&[0.4, -1.0, 0.3, 0.8]);
        let y = vector(&[1.2, 0.1, -0.7, 0.5]);
        assert!(pde_residual(&minus_counterpart(&k), &x, &y, 1e-4).is_err());
        let broken = KernelExpr {
            bivector: k.bivector.iter().map(|t| KernelTerm { coeff: -t.coeff.clone(), ..t.clone() }).collect(),
            ..k
        };
        assert!(pde_residual(&broken, &x, &y, 1e-4).unwrap().relative() > 1e-3);
    }

    #[test]
    fn scalar_system_residuals() {
        for m in 2..=7 {
            for i in 0..=m - 2 {
                let id = KernelId::new(m, i).unwrap().with_e_i(Complex64::new(0.5, 0.25));
                let k = build_kernel(&id).unwrap();
                for &(s, t) in &[(0.3, 0.7), (-1.5, 2.2), (2.0, 0.4), (0.0, 3.5)] {
                    let (r1, r2, scale) = scalar_system_residual(&k, s, t, 1e-4).unwrap();
                    assert!(r1.max(r2) < 1e-6 * scale, "m={m} i={i} s={s} t={t}: {r1} {r2}");
                }
            }
        }
    }

    #[test]
    fn polynomial_bound_holds_with_margin() {
        let coarse: Vec<f64> = (0..=6).map(|n| n as f64).collect();
        let fine: Vec<f64> = (0..=36).map(|n| n as f64 / 3.0).collect();
        for (m, i) in [(2, 0), (4, 1), (4, 2), (3, 1), (5, 3), (6, 4)] {
            let k = build_kernel(&KernelId::new(m, i).unwrap()).unwrap().compile();
            let sample = |radii: &[f64]| {
                let mut best = 0.0f64;
                for &rx in radii {
                    for &ry in radii {
                        for a in 0..7 {
                            let ang = a as f64 * 0.45;
                            let mut xc = vec![0.0; m];
                            let mut yc = vec![0.0; m];
                            xc[0] = rx;
                            yc[0] = ry * ang.cos();
                            yc[1] = ry * ang.sin();
                            best = best.max(bound_ratio(&k, i, &vector(&xc), &vector(&yc)));
                        }
                    }
                }
                best
            };
            let c = sample(&coarse);
            assert!(sample(&fine) <= 2.0 * c, "m={m} i={i}");
        }
    }

    #[test]
    fn json_round_trip_is_exact() {
        let id = KernelId::new(5, 3).unwrap().with_e_i(Complex64::new(0.1, 0.7));
        for k in [
            build_kernel(&id).unwrap(),
            build_kernel(&id.with_sign(Sign::Minus)).unwrap(),
            build_kernel_even(8, 5).unwrap(),
        ] {
            let text = serde_json::to_string(&k.to_json()).unwrap();
            let back: KernelExprJson = serde_json::from_str(&text).unwrap();
            assert_eq!(KernelExpr::try_from(&back).unwrap(), k);
        }
        let plain = r#"{"m":2,"i":0,"sign":"+","scalar":[{"coeff_re":-1.0,"coeff_im":0.0,"sqrt_pi_over_2":true,"s_power":0,"twice_order":-1}],"bivector":[]}"#;
        let parsed: KernelExprJson = serde_json::from_str(plain).unwrap();
        let k = KernelExpr::try_from(&parsed).unwrap();
        assert_eq!(k.scalar, vec![term(-1, true, 0, -1)]);
    }

    proptest! {
        #[test]
        fn zinv_dw_is_linear(a in -5i64..5, b in -5i64..5, p in 0u32..5, twice in -1i32..7) {
            let mut x = TermSum::new();
            x.add_term(p, twice, q(a));
            let mut y = TermSum::new();
            y.add_term(p + 1, twice + 2, q(b));
            prop_assert_eq!(x.add(&y).zinv_dw(), x.zinv_dw().add(&y.zinv_dw()));
        }

        #[test]
        fn minus_counterpart_is_involution(m in 2usize..10, i_frac in 0.0f64..1.0, re in -3.0f64..3.0, im in -3.0f64..3.0) {
            let i = ((m - 2) as f64 * i_frac).round() as usize;
            let id = KernelId::new(m, i).unwrap().with_e_i(Complex64::new(re, im));
            let k = build_kernel(&id).unwrap();
            prop_assert_eq!(minus_counterpart(&minus_counterpart(&k)), k);
        }
    }
}
