//! Truncated power series `c_0 + c_1 x + ... + c_N x^N + O(x^{N+1})`.

use super::scalar::Scalar;
use crate::error::{Error, Result};
use num_complex::Complex64;
use std::ops::{Add, Mul, Neg, Sub};

/// A power series known through `x^trunc`.
#[derive(Clone, Debug, PartialEq)]
pub struct Series {
    coeffs: Vec<Scalar>,
}

impl Series {
    /// The zero series with truncation order `trunc`.
    pub fn zero(trunc: usize) -> Self {
        Series { coeffs: vec![Scalar::zero(); trunc + 1] }
    }

    pub fn one(trunc: usize) -> Self {
        Series::constant(Scalar::one(), trunc)
    }

    pub fn constant(c: Scalar, trunc: usize) -> Self {
        let mut s = Series::zero(trunc);
        s.coeffs[0] = c;
        s
    }

    /// `c x^k`, or zero when `k` exceeds the truncation.
    pub fn monomial(k: usize, c: Scalar, trunc: usize) -> Self {
        let mut s = Series::zero(trunc);
        if k <= trunc {
            s.coeffs[k] = c;
        }
        s
    }

    /// Builds a series from leading coefficients, zero-padding or cutting to `trunc`.
    pub fn from_coeffs(mut coeffs: Vec<Scalar>, trunc: usize) -> Self {
        coeffs.resize(trunc + 1, Scalar::zero());
        Series { coeffs }
    }

    /// Integer coefficients, exact.
    pub fn from_ints(ints: &[i64], trunc: usize) -> Self {
        Series::from_coeffs(ints.iter().map(|&n| Scalar::from_i64(n)).collect(), trunc)
    }

    pub fn trunc(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Scalar> {
        self.coeffs
    }

    /// Coefficient of `x^k`; indices past the truncation read as zero.
    pub fn coeff(&self, k: usize) -> Scalar {
        self.coeffs.get(k).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn coeff_ref(&self, k: usize) -> Option<&Scalar> {
        self.coeffs.get(k)
    }

    pub fn set_coeff(&mut self, k: usize, c: Scalar) {
        if k < self.coeffs.len() {
            self.coeffs[k] = c;
        }
    }

    pub fn is_exact(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_exact)
    }

    pub fn to_float(&self) -> Series {
        Series { coeffs: self.coeffs.iter().map(Scalar::to_float).collect() }
    }

    /// Largest coefficient modulus.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(Scalar::abs).fold(0.0, f64::max)
    }

    /// Index of the first non-negligible coefficient, or `None` when the
    /// series vanishes through its truncation.
    pub fn valuation(&self) -> Option<usize> {
        first_significant(&self.coeffs)
    }

    /// Number of leading coefficients that are exactly zero.
    pub fn exact_zero_prefix(&self) -> usize {
        self.coeffs.iter().take_while(|c| c.is_zero()).count()
    }

    pub fn is_zero(&self) -> bool {
        self.valuation().is_none()
    }

    /// Index of the last nonzero coefficient.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }

    /// Cuts to a smaller truncation order (or pads with zeros when larger).
    pub fn truncate(&self, trunc: usize) -> Series {
        Series::from_coeffs(self.coeffs.clone(), trunc)
    }

    /// Same as [`Series::truncate`]; reads better for polynomial data whose
    /// omitted coefficients are genuinely zero.
    pub fn padded(&self, trunc: usize) -> Series {
        self.truncate(trunc)
    }

    pub fn scale(&self, c: &Scalar) -> Series {
        Series { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    /// Multiplication by `x^k`; the truncation order grows by `k`.
    pub fn shift_up(&self, k: usize) -> Series {
        let mut coeffs = vec![Scalar::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Series { coeffs }
    }

    /// Division by `x^k`, discarding the first `k` coefficients. The caller
    /// is responsible for them being zero. Returns `None` when nothing of
    /// the series would remain.
    pub fn shift_down(&self, k: usize) -> Option<Series> {
        if k > self.trunc() {
            return None;
        }
        Some(Series { coeffs: self.coeffs[k..].to_vec() })
    }

    /// Formal derivative. The result is known one order less.
    pub fn derivative(&self) -> Series {
        if self.trunc() == 0 {
            return Series::zero(0);
        }
        let coeffs = (1..self.coeffs.len())
            .map(|k| &self.coeffs[k] * &Scalar::from_i64(k as i64))
            .collect();
        Series { coeffs }
    }

    /// Antiderivative with zero constant term, known one order more.
    pub fn integral(&self) -> Series {
        let mut coeffs = vec![Scalar::zero()];
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs.push(c / &Scalar::from_i64(k as i64 + 1));
        }
        Series { coeffs }
    }

    /// Multiplicative inverse; requires a non-negligible constant term.
    pub fn inverse(&self) -> Result<Series> {
        let c0 = &self.coeffs[0];
        if first_significant(&self.coeffs[..1]).is_none() {
            return Err(Error::NotInvertible("series with zero constant term".into()));
        }
        let inv0 = c0.inv();
        let n = self.trunc();
        let mut out = vec![Scalar::zero(); n + 1];
        out[0] = inv0.clone();
        for k in 1..=n {
            let mut acc = Scalar::zero();
            for j in 1..=k {
                acc = &acc + &(&self.coeffs[j] * &out[k - j]);
            }
            out[k] = -(&acc * &inv0);
        }
        Ok(Series { coeffs: out })
    }

    /// Quotient `self / other`; `other` must have a nonzero constant term.
    pub fn divide(&self, other: &Series) -> Result<Series> {
        Ok(self * &other.inverse()?)
    }

    /// `exp(f)` for `f` with zero constant term, via `n e_n = Σ k f_k e_{n-k}`.
    pub fn exp(&self) -> Result<Series> {
        if first_significant(&self.coeffs[..1]).is_some() {
            return Err(Error::Precondition("exp of a series needs a zero constant term".into()));
        }
        let n = self.trunc();
        let mut out = vec![Scalar::zero(); n + 1];
        out[0] = if self.is_exact() { Scalar::one() } else { Scalar::float(1.0, 0.0) };
        for m in 1..=n {
            let mut acc = Scalar::zero();
            for k in 1..=m {
                acc = &acc + &(&(&self.coeffs[k] * &Scalar::from_i64(k as i64)) * &out[m - k]);
            }
            out[m] = &acc / &Scalar::from_i64(m as i64);
        }
        Ok(Series { coeffs: out })
    }

    /// Re-expansion about `x0`: returns `g(t) = f(t + x0)` computed from the
    /// known coefficients. Exact for polynomials.
    pub fn taylor_shift(&self, x0: &Scalar) -> Series {
        // Repeated synthetic division (Horner) gives the shifted coefficients.
        let mut c = self.coeffs.clone();
        let n = c.len();
        if x0.is_zero() {
            return self.clone();
        }
        for i in 0..n {
            for j in (i..n - 1).rev() {
                let t = &c[j + 1] * x0;
                c[j] = &c[j] + &t;
            }
        }
        Series { coeffs: c }
    }

    /// Horner evaluation of the truncated polynomial at a complex point.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c.to_c64())
    }

    /// Horner evaluation in scalar arithmetic.
    pub fn eval_scalar(&self, z: &Scalar) -> Scalar {
        self.coeffs.iter().rev().fold(Scalar::zero(), |acc, c| &(&acc * z) + c)
    }

    /// Addition that insists on equal truncation orders.
    pub fn checked_add(&self, other: &Series) -> Result<Series> {
        self.same_trunc(other)?;
        Ok(self + other)
    }

    /// Cauchy product that insists on equal truncation orders.
    pub fn checked_mul(&self, other: &Series) -> Result<Series> {
        self.same_trunc(other)?;
        Ok(self * other)
    }

    fn same_trunc(&self, other: &Series) -> Result<()> {
        if self.trunc() != other.trunc() {
            return Err(Error::TruncationMismatch { left: self.trunc(), right: other.trunc() });
        }
        Ok(())
    }
}

/// First coefficient that is not negligible against the running maximum
/// of the coefficients before it.
pub(crate) fn first_significant(coeffs: &[Scalar]) -> Option<usize> {
    let mut running = 0.0f64;
    for (i, c) in coeffs.iter().enumerate() {
        if !c.is_negligible(running) {
            return Some(i);
        }
        running = running.max(c.abs());
    }
    None
}

/// Binary operation selector for [`series_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesOp {
    Add,
    Mul,
}

/// Coefficientwise sum or truncated Cauchy product of two series of equal
/// truncation order.
pub fn series_arith(a: &Series, b: &Series, op: SeriesOp) -> Result<Series> {
    match op {
        SeriesOp::Add => a.checked_add(b),
        SeriesOp::Mul => a.checked_mul(b),
    }
}

impl Add for &Series {
    type Output = Series;
    /// Sum known through the smaller of the two truncation orders.
    fn add(self, rhs: &Series) -> Series {
        let n = self.trunc().min(rhs.trunc());
        Series { coeffs: (0..=n).map(|k| &self.coeffs[k] + &rhs.coeffs[k]).collect() }
    }
}

impl Sub for &Series {
    type Output = Series;
    fn sub(self, rhs: &Series) -> Series {
        let n = self.trunc().min(rhs.trunc());
        Series { coeffs: (0..=n).map(|k| &self.coeffs[k] - &rhs.coeffs[k]).collect() }
    }
}

impl Mul for &Series {
    type Output = Series;
    /// Cauchy product truncated at the smaller truncation order.
    fn mul(self, rhs: &Series) -> Series {
        let n = self.trunc().min(rhs.trunc());
        let mut out = vec![Scalar::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(n + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(n + 1 - i) {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Series { coeffs: out }
    }
}

impl Neg for &Series {
    type Output = Series;
    fn neg(self) -> Series {
        Series { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

macro_rules! owned_series_op {
    ($trait:ident, $method:ident) => {
        impl $trait for Series {
            type Output = Series;
            fn $method(self, rhs: Series) -> Series {
                (&self).$method(&rhs)
            }
        }
    };
}

owned_series_op!(Add, add);
owned_series_op!(Sub, sub);
owned_series_op!(Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn difference_of_squares() {
        let a = Series::from_ints(&[1, 1], 4);
        let b = Series::from_ints(&[1, -1], 4);
        assert_eq!(series_arith(&a, &b, SeriesOp::Mul).unwrap(), Series::from_ints(&[1, 0, -1], 4));
    }

    #[test]
    fn geometric_series_identity() {
        let geo = Series::from_ints(&[1, 1, 1, 1, 1, 1], 5);
        let b = Series::from_ints(&[1, -1], 5);
        assert_eq!(&geo * &b, Series::one(5));
        assert_eq!(b.inverse().unwrap(), geo);
    }

    #[test]
    fn annihilator() {
        let a = Series::from_ints(&[3, -2, 7], 6);
        assert!((&a * &Series::zero(6)).is_zero());
    }

    #[test]
    fn truncation_mismatch_is_an_error() {
        let a = Series::one(3);
        let b = Series::one(4);
        assert!(matches!(series_arith(&a, &b, SeriesOp::Add), Err(Error::TruncationMismatch { .. })));
    }

    #[test]
    fn exp_of_x_gives_factorials() {
        let e = Series::from_ints(&[0, 1], 6).exp().unwrap();
        assert_eq!(e.coeff(5), Scalar::ratio(1, 120));
    }

    #[test]
    fn taylor_shift_matches_binomial_expansion() {
        // (x)^3 at x = t + 2 gives 8 + 12t + 6t^2 + t^3
        let p = Series::from_ints(&[0, 0, 0, 1], 3);
        assert_eq!(p.taylor_shift(&Scalar::from_i64(2)), Series::from_ints(&[8, 12, 6, 1], 3));
    }

    #[test]
    fn derivative_and_integral() {
        let p = Series::from_ints(&[5, 2, 3], 4);
        assert_eq!(p.integral().derivative(), p);
        assert_eq!(p.derivative(), Series::from_ints(&[2, 6], 3));
    }
}
