//! Coefficient field with two interchangeable backends.
//!
//! A [`Scalar`] is either an exact Gaussian rational or a double-precision
//! complex number. Arithmetic between two exact values stays exact; as soon
//! as a floating value takes part, the result is floating.

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Exact Gaussian rational `p/q + i r/s`.
pub type GaussRational = Complex<BigRational>;

/// Relative zero threshold for floating coefficients.
pub const ZERO_TOL: f64 = 1e-12;
/// Exponent-class matching tolerance for floating generalized series.
pub const CLASS_TOL: f64 = 1e-9;
/// Window used to decide that a floating difference of roots is an integer.
pub const INTEGER_TOL: f64 = 1e-8;
/// Upper edge of the ambiguous window for integer detection.
pub const BORDERLINE_TOL: f64 = 1e-6;

/// A complex coefficient, either exact or floating.
#[derive(Clone)]
pub enum Scalar {
    Exact(Box<GaussRational>),
    Float(Complex64),
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Exact(Box::new(GaussRational::zero()))
    }

    pub fn one() -> Self {
        Scalar::from_i64(1)
    }

    pub fn from_i64(n: i64) -> Self {
        Scalar::Exact(Box::new(Complex::new(
            BigRational::from_integer(BigInt::from(n)),
            BigRational::zero(),
        )))
    }

    /// Exact real rational `p / q`. Panics when `q == 0`.
    pub fn ratio(p: i64, q: i64) -> Self {
        Scalar::Exact(Box::new(Complex::new(
            BigRational::new(BigInt::from(p), BigInt::from(q)),
            BigRational::zero(),
        )))
    }

    /// Exact Gaussian rational from its real and imaginary parts.
    pub fn exact(re: BigRational, im: BigRational) -> Self {
        Scalar::Exact(Box::new(Complex::new(re, im)))
    }

    /// Exact `a + b i` with integer parts.
    pub fn gaussian(a: i64, b: i64) -> Self {
        Scalar::exact(
            BigRational::from_integer(BigInt::from(a)),
            BigRational::from_integer(BigInt::from(b)),
        )
    }

    pub fn float(re: f64, im: f64) -> Self {
        Scalar::Float(Complex64::new(re, im))
    }

    pub fn from_c64(z: Complex64) -> Self {
        Scalar::Float(z)
    }

    /// The imaginary unit, exact.
    pub fn i() -> Self {
        Scalar::gaussian(0, 1)
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    pub fn as_exact(&self) -> Option<&GaussRational> {
        match self {
            Scalar::Exact(q) => Some(q),
            Scalar::Float(_) => None,
        }
    }

    pub fn to_c64(&self) -> Complex64 {
        match self {
            Scalar::Exact(q) => Complex64::new(rat_to_f64(&q.re), rat_to_f64(&q.im)),
            Scalar::Float(z) => *z,
        }
    }

    /// The same value in floating mode.
    pub fn to_float(&self) -> Scalar {
        Scalar::Float(self.to_c64())
    }

    pub fn re_f64(&self) -> f64 {
        self.to_c64().re
    }

    pub fn im_f64(&self) -> f64 {
        self.to_c64().im
    }

    /// Modulus as a double.
    pub fn abs(&self) -> f64 {
        self.to_c64().norm()
    }

    /// True only for an exact zero or a floating value that is exactly `0.0`.
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(q) => q.is_zero(),
            Scalar::Float(z) => z.re == 0.0 && z.im == 0.0,
        }
    }

    /// Zero test under the configured tolerance relative to `scale`.
    ///
    /// Exact values are negligible only when they are exactly zero.
    pub fn is_negligible(&self, scale: f64) -> bool {
        match self {
            Scalar::Exact(q) => q.is_zero(),
            Scalar::Float(z) => z.norm() <= ZERO_TOL * scale.max(1.0),
        }
    }

    /// Returns the integer this value equals, exactly in exact mode or within
    /// `tol` in floating mode.
    pub fn as_integer(&self, tol: f64) -> Option<i64> {
        match self {
            Scalar::Exact(q) => {
                if q.im.is_zero() && q.re.is_integer() {
                    q.re.to_integer().to_i64()
                } else {
                    None
                }
            }
            Scalar::Float(z) => {
                let r = z.re.round();
                if (z.re - r).abs() <= tol && z.im.abs() <= tol && r.abs() < 9.0e15 {
                    Some(r as i64)
                } else {
                    None
                }
            }
        }
    }

    /// Distance to the nearest Gaussian integer with zero imaginary part,
    /// measured as the larger of the two component offsets.
    pub fn integer_defect(&self) -> f64 {
        let z = self.to_c64();
        (z.re - z.re.round()).abs().max(z.im.abs())
    }

    pub fn conj(&self) -> Scalar {
        match self {
            Scalar::Exact(q) => Scalar::Exact(Box::new(q.conj())),
            Scalar::Float(z) => Scalar::Float(z.conj()),
        }
    }

    /// Multiplicative inverse. Exact zero panics; floating zero yields infinities.
    pub fn inv(&self) -> Scalar {
        Scalar::one() / self
    }

    /// Integer power, negative exponents allowed for nonzero values.
    pub fn powi(&self, n: i64) -> Scalar {
        let mut base = if n < 0 { self.inv() } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = Scalar::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        if !self.is_exact() {
            acc = acc.to_float();
        }
        acc
    }

    /// Orders by real part, then imaginary part. Exact comparisons are exact.
    pub fn cmp_re_im(&self, other: &Scalar) -> Ordering {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a.re.cmp(&b.re).then(a.im.cmp(&b.im)),
            _ => {
                let (a, b) = (self.to_c64(), other.to_c64());
                a.re.partial_cmp(&b.re)
                    .unwrap_or(Ordering::Equal)
                    .then(a.im.partial_cmp(&b.im).unwrap_or(Ordering::Equal))
            }
        }
    }

    /// Exact square when possible, floating otherwise.
    pub fn sqrt(&self) -> Scalar {
        let z = self.to_c64().sqrt();
        if self.is_exact() {
            if let Some(q) = recognize_gaussian(z) {
                if &(&q * &q) == self {
                    return q;
                }
            }
        }
        Scalar::Float(z)
    }

    /// Rounds the exact real part towards the nearest integer (ties away from zero).
    pub fn round_re(&self) -> i64 {
        self.re_f64().round() as i64
    }

    /// Rational components as `(p/q, r/s)` strings; floating values are
    /// converted exactly from their binary representation.
    pub fn to_rational_strings(&self) -> (String, String) {
        match self {
            Scalar::Exact(q) => (q.re.to_string(), q.im.to_string()),
            Scalar::Float(z) => {
                let re = BigRational::from_float(z.re).unwrap_or_else(BigRational::zero);
                let im = BigRational::from_float(z.im).unwrap_or_else(BigRational::zero);
                (re.to_string(), im.to_string())
            }
        }
    }

    /// Parses `"p/q"` or `"p"` into an exact rational.
    pub fn parse_rational(text: &str) -> Option<BigRational> {
        let text = text.trim();
        match text.split_once('/') {
            Some((p, q)) => {
                let p: BigInt = p.trim().parse().ok()?;
                let q: BigInt = q.trim().parse().ok()?;
                if q.is_zero() {
                    None
                } else {
                    Some(BigRational::new(p, q))
                }
            }
            None => text.parse::<BigInt>().ok().map(BigRational::from_integer),
        }
    }

    /// Exact rational equal to the binary value of `x`.
    pub fn exact_from_f64(re: f64, im: f64) -> Option<Scalar> {
        Some(Scalar::exact(
            BigRational::from_float(re)?,
            BigRational::from_float(im)?,
        ))
    }
}

fn rat_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        let n = q.numer().to_f64().unwrap_or(f64::NAN);
        let d = q.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Best rational approximation with denominator at most `max_den`, found by
/// continued-fraction expansion. Returns `None` when the error stays above
/// `tol`.
pub fn recognize_rational(x: f64, max_den: i64, tol: f64) -> Option<BigRational> {
    if !x.is_finite() {
        return None;
    }
    let (mut h0, mut h1) = (0i128, 1i128);
    let (mut k0, mut k1) = (1i128, 0i128);
    let mut rest = x;
    for _ in 0..64 {
        let a = rest.floor();
        if a.abs() > 1e15 {
            break;
        }
        let a_int = a as i128;
        let h2 = a_int * h1 + h0;
        let k2 = a_int * k1 + k0;
        if k2 > max_den as i128 {
            break;
        }
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
        let approx = h1 as f64 / k1 as f64;
        if (approx - x).abs() <= tol * x.abs().max(1.0) {
            return Some(BigRational::new(BigInt::from(h1), BigInt::from(k1)));
        }
        let frac = rest - a;
        if frac.abs() < 1e-300 {
            break;
        }
        rest = 1.0 / frac;
    }
    None
}

/// Recognizes a floating complex value as a small-denominator Gaussian rational.
pub fn recognize_gaussian(z: Complex64) -> Option<Scalar> {
    recognize_gaussian_within(z, 1e-13)
}

/// As [`recognize_gaussian`], accepting a relative mismatch up to `tol`.
/// Loose tolerances can return a wrong nearby rational, so callers verify.
pub fn recognize_gaussian_within(z: Complex64, tol: f64) -> Option<Scalar> {
    const MAX_DEN: i64 = 100_000;
    let part = |x: f64| if x.abs() <= tol { Some(BigRational::zero()) } else { recognize_rational(x, MAX_DEN, tol) };
    Some(Scalar::exact(part(z.re)?, part(z.im)?))
}

fn exact_add(x: &GaussRational, y: &GaussRational) -> GaussRational {
    let re = if y.re.is_zero() { x.re.clone() } else if x.re.is_zero() { y.re.clone() } else { &x.re + &y.re };
    let im = if y.im.is_zero() { x.im.clone() } else if x.im.is_zero() { y.im.clone() } else { &x.im + &y.im };
    Complex::new(re, im)
}

fn exact_sub(x: &GaussRational, y: &GaussRational) -> GaussRational {
    let re = if y.re.is_zero() { x.re.clone() } else { &x.re - &y.re };
    let im = if y.im.is_zero() { x.im.clone() } else { &x.im - &y.im };
    Complex::new(re, im)
}

fn exact_mul(x: &GaussRational, y: &GaussRational) -> GaussRational {
    match (x.im.is_zero(), y.im.is_zero()) {
        (true, true) => Complex::new(&x.re * &y.re, BigRational::zero()),
        (true, false) => Complex::new(&x.re * &y.re, &x.re * &y.im),
        (false, true) => Complex::new(&x.re * &y.re, &x.im * &y.re),
        (false, false) => Complex::new(&x.re * &y.re - &x.im * &y.im, &x.re * &y.im + &x.im * &y.re),
    }
}

macro_rules! scalar_binop {
    ($trait:ident, $method:ident, $op:tt, $exact:ident) => {
        impl<'a> $trait<&'a Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'a Scalar) -> Scalar {
                match (self, rhs) {
                    (Scalar::Exact(x), Scalar::Exact(y)) => Scalar::Exact(Box::new($exact(x, y))),
                    _ => Scalar::Float(self.to_c64() $op rhs.to_c64()),
                }
            }
        }
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $trait<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'a Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
        impl<'a> $trait<Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self.$method(&rhs)
            }
        }
    };
}

scalar_binop!(Add, add, +, exact_add);
scalar_binop!(Sub, sub, -, exact_sub);
scalar_binop!(Mul, mul, *, exact_mul);

impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn div(self, rhs: &'a Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Exact(x), Scalar::Exact(y)) => {
                assert!(!y.is_zero(), "exact division by zero");
                if y.im.is_zero() {
                    Scalar::Exact(Box::new(Complex::new(&x.re / &y.re, &x.im / &y.re)))
                } else {
                    Scalar::Exact(Box::new(&**x / &**y))
                }
            }
            _ => Scalar::Float(self.to_c64() / rhs.to_c64()),
        }
    }
}

impl Div<Scalar> for Scalar {
    type Output = Scalar;
    fn div(self, rhs: Scalar) -> Scalar {
        &self / &rhs
    }
}

impl<'a> Div<&'a Scalar> for Scalar {
    type Output = Scalar;
    fn div(self, rhs: &'a Scalar) -> Scalar {
        &self / rhs
    }
}

impl Div<Scalar> for &Scalar {
    type Output = Scalar;
    fn div(self, rhs: Scalar) -> Scalar {
        self / &rhs
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Exact(q) => Scalar::Exact(Box::new(-(**q).clone())),
            Scalar::Float(z) => Scalar::Float(-z),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Scalar) -> bool {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a == b,
            _ => self.to_c64() == other.to_c64(),
        }
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_i64(n)
    }
}

impl From<Complex64> for Scalar {
    fn from(z: Complex64) -> Self {
        Scalar::Float(z)
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(q) => {
                if q.im.is_zero() {
                    write!(f, "{}", q.re)
                } else if q.re.is_zero() {
                    write!(f, "{}i", q.im)
                } else if q.im.is_negative() {
                    write!(f, "{}-{}i", q.re, -q.im.clone())
                } else {
                    write!(f, "{}+{}i", q.re, q.im)
                }
            }
            Scalar::Float(z) => {
                if z.im == 0.0 {
                    write!(f, "{}", z.re)
                } else {
                    write!(f, "{}{:+}i", z.re, z.im)
                }
            }
        }
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}
