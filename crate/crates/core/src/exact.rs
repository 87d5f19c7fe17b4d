//! Exact rational and Gaussian-rational helpers shared by the symbolic layers.

use num_bigint::{BigInt, BigUint};
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational number.
pub type Q = BigRational;
/// Exact Gaussian rational `a + b I`.
pub type QC = Complex<BigRational>;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn q_from_uint(n: BigUint) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qc(re: Q) -> QC {
    QC::new(re, Q::zero())
}

pub fn qc_zero() -> QC {
    QC::new(Q::zero(), Q::zero())
}

pub fn qc_one() -> QC {
    QC::new(Q::one(), Q::zero())
}

/// The imaginary unit `I`.
pub fn qc_i() -> QC {
    QC::new(Q::zero(), Q::one())
}

/// `(-1)^n` as a rational.
pub fn sign_pow(n: i64) -> Q {
    if n.rem_euclid(2) == 0 {
        Q::one()
    } else {
        -Q::one()
    }
}

/// `I^n` as a Gaussian rational.
pub fn i_pow(n: i64) -> QC {
    match n.rem_euclid(4) {
        0 => qc(Q::one()),
        1 => qc_i(),
        2 => qc(-Q::one()),
        _ => -qc_i(),
    }
}

pub fn to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        // numerator/denominator may overflow individually; divide in log space
        let (n, d) = (x.numer(), x.denom());
        let sign = if n.is_negative() { -1.0 } else { 1.0 };
        let ln = big_ln(&n.abs().to_biguint().unwrap()) - big_ln(&d.to_biguint().unwrap());
        sign * ln.exp()
    })
}

fn big_ln(n: &BigUint) -> f64 {
    let bits = n.bits();
    if bits < 1000 {
        n.to_f64().unwrap().ln()
    } else {
        let shift = bits - 64;
        (n >> shift).to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
    }
}

pub fn qc_to_c64(x: &QC) -> Complex64 {
    Complex64::new(to_f64(&x.re), to_f64(&x.im))
}

/// Exact rational value of a finite double.
pub fn q_from_f64(x: f64) -> Q {
    Q::from_float(x).expect("finite value")
}

pub fn qc_from_c64(x: Complex64) -> QC {
    QC::new(q_from_f64(x.re), q_from_f64(x.im))
}

pub fn qc_is_zero(x: &QC) -> bool {
    x.re.is_zero() && x.im.is_zero()
}

/// Squared modulus `|x|^2`, exact.
pub fn qc_norm_sqr(x: &QC) -> Q {
    &x.re * &x.re + &x.im * &x.im
}

/// Division of Gaussian rationals; `None` when the divisor vanishes.
pub fn qc_div(a: &QC, b: &QC) -> Option<QC> {
    let n = qc_norm_sqr(b);
    if n.is_zero() {
        return None;
    }
    let num = a * b.conj();
    Some(QC::new(num.re / &n, num.im / n))
}

pub fn qc_scale(a: &QC, s: &Q) -> QC {
    QC::new(&a.re * s, &a.im * s)
}
