//! Complex Clifford algebra Cl(0,m) and the geometric invariants of a pair of vectors.
//!
//! A [`Multivector`] is stored densely: one complex coefficient per basis blade,
//! where the blade `e_{i1 i2 ... ir}` (with `i1 < i2 < ... < ir`) is addressed by the
//! bitmask having bit `i - 1` set for every generator `e_i` it contains. The
//! generators obey `e_i e_j + e_j e_i = -2 δ_ij`.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported dimension. Dense storage holds `2^m` coefficients.
pub const MAX_DIMENSION: usize = 12;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Sign of the product of two basis blades, `e_a e_b = sign * e_{a xor b}`.
///
/// The sign collects one factor `-1` per transposition needed to bring the
/// concatenated generator list into increasing order and one factor `-1` per
/// generator shared by both blades (since `e_i^2 = -1`).
#[inline]
pub fn blade_product_sign(a: u32, b: u32) -> f64 {
    let mut swaps = 0u32;
    let mut rest = a >> 1;
    while rest != 0 {
        swaps += (rest & b).count_ones();
        rest >>= 1;
    }
    swaps += (a & b).count_ones();
    if swaps & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Sign picked up by a blade of the given grade under the main anti-involution.
#[inline]
pub fn bar_sign(grade: u32) -> f64 {
    // (-1)^r from negating generators, (-1)^{r(r-1)/2} from reversing them
    let exponent = grade + grade * grade.saturating_sub(1) / 2;
    if exponent % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Bitmask for the blade `e_{i1...ir}` given 1-based generator indices.
pub fn blade_mask(m: usize, indices: &[usize]) -> Result<u32> {
    let mut mask = 0u32;
    let mut last = 0usize;
    for &idx in indices {
        if idx == 0 || idx > m {
            return Err(Error::InvalidArgument(format!(
                "blade index {idx} outside 1..={m}"
            )));
        }
        if idx <= last {
            return Err(Error::InvalidArgument(
                "blade indices must be strictly increasing".into(),
            ));
        }
        last = idx;
        mask |= 1 << (idx - 1);
    }
    Ok(mask)
}

/// Generator indices (1-based, increasing) of a blade bitmask.
pub fn blade_indices(mask: u32) -> Vec<usize> {
    (0..32).filter(|b| mask & (1 << b) != 0).map(|b| b + 1).collect()
}

fn check_dimension(m: usize) -> Result<()> {
    if m == 0 || m > MAX_DIMENSION {
        Err(Error::UnsupportedDimension(m, 1, MAX_DIMENSION))
    } else {
        Ok(())
    }
}

/// Dense element of the complexified Clifford algebra Cl(0,m).
#[derive(Clone, PartialEq)]
pub struct Multivector {
    m: usize,
    coeffs: Vec<Complex64>,
}

impl Multivector {
    pub fn zero(m: usize) -> Result<Self> {
        check_dimension(m)?;
        Ok(Self {
            m,
            coeffs: vec![ZERO; 1 << m],
        })
    }

    pub fn scalar(m: usize, value: Complex64) -> Result<Self> {
        let mut out = Self::zero(m)?;
        out.coeffs[0] = value;
        Ok(out)
    }

    /// The basis blade `e_{indices}` scaled by `value`.
    pub fn blade(m: usize, indices: &[usize], value: Complex64) -> Result<Self> {
        let mask = blade_mask(m, indices)?;
        let mut out = Self::zero(m)?;
        out.coeffs[mask as usize] = value;
        Ok(out)
    }

    /// Embeds a real or complex vector as the 1-vector `Σ x_j e_j`.
    pub fn from_vector(x: &Vector) -> Self {
        let mut out = Self::zero(x.dim()).expect("vector dimension already validated");
        for (j, &c) in x.components().iter().enumerate() {
            out.coeffs[1 << j] = Complex64::new(c, 0.0);
        }
        out
    }

    /// Builds a multivector from raw coefficients indexed by blade bitmask.
    pub fn from_coeffs(m: usize, coeffs: Vec<Complex64>) -> Result<Self> {
        check_dimension(m)?;
        if coeffs.len() != 1 << m {
            return Err(Error::DimensionMismatch {
                expected: 1 << m,
                got: coeffs.len(),
            });
        }
        Ok(Self { m, coeffs })
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn coeff(&self, mask: u32) -> Complex64 {
        self.coeffs[mask as usize]
    }

    pub fn set_coeff(&mut self, mask: u32, value: Complex64) {
        self.coeffs[mask as usize] = value;
    }

    pub fn scalar_part(&self) -> Complex64 {
        self.coeffs[0]
    }

    fn same_dim(&self, other: &Self) -> Result<()> {
        if self.m != other.m {
            Err(Error::DimensionMismatch {
                expected: self.m,
                got: other.m,
            })
        } else {
            Ok(())
        }
    }

    /// Geometric (Clifford) product `self * other`.
    pub fn geometric_product(&self, other: &Self) -> Result<Self> {
        self.same_dim(other)?;
        let mut out = vec![ZERO; self.coeffs.len()];
        for (a, &ca) in self.coeffs.iter().enumerate() {
            if ca == ZERO {
                continue;
            }
            for (b, &cb) in other.coeffs.iter().enumerate() {
                if cb == ZERO {
                    continue;
                }
                let sign = blade_product_sign(a as u32, b as u32);
                out[a ^ b] += ca * cb * sign;
            }
        }
        Ok(Self {
            m: self.m,
            coeffs: out,
        })
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            m: self.m,
            coeffs: self.coeffs.iter().map(|&c| c * factor).collect(),
        }
    }

    /// Coefficient-wise complex conjugation; blades are left untouched.
    pub fn complex_conjugate(&self) -> Self {
        Self {
            m: self.m,
            coeffs: self.coeffs.iter().map(|c| c.conj()).collect(),
        }
    }

    /// Main anti-involution: reverses products and negates every generator.
    pub fn main_anti_involution(&self) -> Self {
        Self {
            m: self.m,
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(mask, &c)| c * bar_sign((mask as u32).count_ones()))
                .collect(),
        }
    }

    /// Projection onto the grade-`k` part.
    pub fn grade_project(&self, k: usize) -> Self {
        Self {
            m: self.m,
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(mask, &c)| {
                    if (mask as u32).count_ones() as usize == k {
                        c
                    } else {
                        ZERO
                    }
                })
                .collect(),
        }
    }

    /// Scalar part of `bar(a^c) b`, the pointwise integrand of the L² inner product.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        self.same_dim(other)?;
        // [bar(e_A^c) e_B]_0 vanishes unless A = B, and equals +1 when it does.
        Ok(self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Largest coefficient-wise distance to `other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.m, other.m, "dimension mismatch");
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == ZERO)
    }

    pub fn to_json(&self) -> MultivectorJson {
        MultivectorJson::from(self)
    }
}

impl fmt::Debug for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Multivector(m={}; ", self.m)?;
        let mut first = true;
        for (mask, c) in self.coeffs.iter().enumerate() {
            if *c == ZERO {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({}{:+}i)", c.re, c.im)?;
            if mask != 0 {
                write!(f, "e")?;
                for i in blade_indices(mask as u32) {
                    write!(f, "{i}")?;
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, ")")
    }
}

impl Add for &Multivector {
    type Output = Multivector;
    fn add(self, rhs: &Multivector) -> Multivector {
        assert_eq!(self.m, rhs.m, "dimension mismatch");
        Multivector {
            m: self.m,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &Multivector {
    type Output = Multivector;
    fn sub(self, rhs: &Multivector) -> Multivector {
        assert_eq!(self.m, rhs.m, "dimension mismatch");
        Multivector {
            m: self.m,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl AddAssign<&Multivector> for Multivector {
    fn add_assign(&mut self, rhs: &Multivector) {
        assert_eq!(self.m, rhs.m, "dimension mismatch");
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
    }
}

impl Neg for &Multivector {
    type Output = Multivector;
    fn neg(self) -> Multivector {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

/// Geometric product; panics on dimension mismatch (see [`Multivector::geometric_product`]).
impl Mul for &Multivector {
    type Output = Multivector;
    fn mul(self, rhs: &Multivector) -> Multivector {
        self.geometric_product(rhs).expect("dimension mismatch")
    }
}

/// Real vector in R^m, identified with the 1-vector `Σ x_j e_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct Vector(Vec<f64>);

impl Vector {
    pub fn new(components: Vec<f64>) -> Result<Self> {
        check_dimension(components.len())?;
        Ok(Self(components))
    }

    pub fn zeros(m: usize) -> Result<Self> {
        Self::new(vec![0.0; m])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn components(&self) -> &[f64] {
        &self.0
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self(self.0.iter().map(|c| c * factor).collect())
    }

    pub fn neg(&self) -> Self {
        self.scaled(-1.0)
    }

    pub fn to_multivector(&self) -> Multivector {
        Multivector::from_vector(self)
    }
}

/// Index of the pair `(j, k)`, `j < k` (0-based), in the packed bivector layout.
#[inline]
pub fn pair_index(m: usize, j: usize, k: usize) -> usize {
    debug_assert!(j < k && k < m);
    j * (2 * m - j - 1) / 2 + (k - j - 1)
}

/// Coefficients `x_j y_k - x_k y_j` for `j < k`, in packed pair order.
pub fn wedge_coefficients(x: &Vector, y: &Vector) -> Vec<f64> {
    let m = x.dim();
    let (xs, ys) = (x.components(), y.components());
    let mut out = Vec::with_capacity(m * (m - 1) / 2);
    for j in 0..m {
        for k in j + 1..m {
            out.push(xs[j] * ys[k] - xs[k] * ys[j]);
        }
    }
    out
}

/// The bivector `x ∧ y = Σ_{j<k} e_jk (x_j y_k - x_k y_j)`.
pub fn wedge(x: &Vector, y: &Vector) -> Result<Multivector> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch {
            expected: x.dim(),
            got: y.dim(),
        });
    }
    let m = x.dim();
    let mut out = Multivector::zero(m)?;
    let coeffs = wedge_coefficients(x, y);
    let mut idx = 0;
    for j in 0..m {
        for k in j + 1..m {
            out.coeffs[(1 << j) | (1 << k)] = Complex64::new(coeffs[idx], 0.0);
            idx += 1;
        }
    }
    Ok(out)
}

/// Scalar plus bivector value; the shape of every kernel value.
#[derive(Clone, Debug, PartialEq)]
pub struct ParaBivector {
    pub m: usize,
    pub scalar: Complex64,
    /// Coefficients `b_jk` for `j < k`, packed as in [`pair_index`].
    pub bivector: Vec<Complex64>,
}

impl ParaBivector {
    /// Value `scalar + (x ∧ y) g`.
    pub fn from_wedge(x: &Vector, y: &Vector, scalar: Complex64, g: Complex64) -> Self {
        Self {
            m: x.dim(),
            scalar,
            bivector: wedge_coefficients(x, y)
                .into_iter()
                .map(|w| g * w)
                .collect(),
        }
    }

    pub fn bivector_coeff(&self, j: usize, k: usize) -> Complex64 {
        match j.cmp(&k) {
            std::cmp::Ordering::Less => self.bivector[pair_index(self.m, j, k)],
            std::cmp::Ordering::Greater => -self.bivector[pair_index(self.m, k, j)],
            std::cmp::Ordering::Equal => ZERO,
        }
    }

    pub fn to_multivector(&self) -> Multivector {
        let mut out = Multivector::zero(self.m).expect("validated dimension");
        out.coeffs[0] = self.scalar;
        let mut idx = 0;
        for j in 0..self.m {
            for k in j + 1..self.m {
                out.coeffs[(1 << j) | (1 << k)] = self.bivector[idx];
                idx += 1;
            }
        }
        out
    }

    /// Left product `self * f`, exploiting the sparse scalar-plus-bivector shape.
    pub fn left_mul(&self, f: &Multivector) -> Multivector {
        let mut out = f.scale(self.scalar);
        let mut idx = 0;
        for j in 0..self.m {
            for k in j + 1..self.m {
                let b = self.bivector[idx];
                idx += 1;
                if b == ZERO {
                    continue;
                }
                let blade = ((1 << j) | (1 << k)) as u32;
                for (mask, &c) in f.coeffs.iter().enumerate() {
                    if c == ZERO {
                        continue;
                    }
                    let sign = blade_product_sign(blade, mask as u32);
                    out.coeffs[blade as usize ^ mask] += b * c * sign;
                }
            }
        }
        out
    }
}

/// The quantities every kernel depends on: `s = <x,y>`, `t = |x ∧ y|`,
/// `z = |x||y|` and, when `z > 0`, the cosine `w = <ξ,η>` of the angle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GeometricInvariants {
    pub s: f64,
    pub t: f64,
    pub z: f64,
    pub w: Option<f64>,
}

/// Computes `s, t, z, w` for a pair of vectors.
///
/// `t` is taken from the wedge coefficients directly rather than from `z² - s²`,
/// which keeps it accurate for nearly parallel vectors.
pub fn invariants_of(x: &Vector, y: &Vector) -> GeometricInvariants {
    let s = x.dot(y);
    let t = wedge_coefficients(x, y)
        .iter()
        .map(|c| c * c)
        .sum::<f64>()
        .sqrt();
    let z = x.norm() * y.norm();
    let w = if z > 0.0 {
        Some((s / z).clamp(-1.0, 1.0))
    } else {
        None
    };
    GeometricInvariants { s, t, z, w }
}

/// JSON form `{"m": int, "terms": [{"blade": [ints], "re": float, "im": float}]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MultivectorJson {
    pub m: usize,
    pub terms: Vec<BladeTermJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BladeTermJson {
    pub blade: Vec<usize>,
    pub re: f64,
    pub im: f64,
}

impl From<&Multivector> for MultivectorJson {
    fn from(mv: &Multivector) -> Self {
        Self {
            m: mv.m,
            terms: mv
                .coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| **c != ZERO)
                .map(|(mask, c)| BladeTermJson {
                    blade: blade_indices(mask as u32),
                    re: c.re,
                    im: c.im,
                })
                .collect(),
        }
    }
}

impl TryFrom<&MultivectorJson> for Multivector {
    type Error = Error;

    fn try_from(json: &MultivectorJson) -> Result<Self> {
        let mut out = Multivector::zero(json.m)?;
        for term in &json.terms {
            let mask = blade_mask(json.m, &term.blade)?;
            out.coeffs[mask as usize] += Complex64::new(term.re, term.im);
        }
        Ok(out)
    }
}
