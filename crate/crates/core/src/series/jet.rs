//! Truncated Taylor expansions in a nilpotent parameter `ε`.
//!
//! A jet of order `k` carries `c_0 + c_1 ε + ... + c_k ε^k` with `ε^{k+1} = 0`.
//! Evaluating a recurrence at `r + ε` therefore produces its value and its
//! first `k` derivatives in `r` (divided by the factorials) in one pass.

use super::scalar::Scalar;
use crate::error::{Error, Result};
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Clone, Debug, PartialEq)]
pub struct Jet {
    coeffs: Vec<Scalar>,
}

impl Jet {
    pub fn constant(c: Scalar, order: usize) -> Self {
        let mut coeffs = vec![Scalar::zero(); order + 1];
        coeffs[0] = c;
        Jet { coeffs }
    }

    /// `c + ε`: the jet of the identity map at `c`.
    pub fn variable(c: Scalar, order: usize) -> Self {
        let mut j = Jet::constant(c, order);
        if order >= 1 {
            j.coeffs[1] = Scalar::one();
        }
        j
    }

    /// `ε^p`, or zero when `p` exceeds the order.
    pub fn epsilon_power(p: usize, order: usize) -> Self {
        let mut coeffs = vec![Scalar::zero(); order + 1];
        if p <= order {
            coeffs[p] = Scalar::one();
        }
        Jet { coeffs }
    }

    pub fn from_coeffs(coeffs: Vec<Scalar>) -> Self {
        assert!(!coeffs.is_empty(), "a jet needs at least one coefficient");
        Jet { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    /// Coefficient of `ε^i`; zero beyond the order.
    pub fn coeff(&self, i: usize) -> Scalar {
        self.coeffs.get(i).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn value(&self) -> &Scalar {
        &self.coeffs[0]
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(Scalar::abs).fold(0.0, f64::max)
    }

    /// First index whose coefficient is not negligible against `scale`;
    /// `None` means the jet vanishes through its order.
    pub fn valuation(&self, scale: f64) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_negligible(scale))
    }

    pub fn scale(&self, c: &Scalar) -> Jet {
        Jet { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    pub fn truncate(&self, order: usize) -> Jet {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(order + 1, Scalar::zero());
        Jet { coeffs }
    }

    /// Inverse of a jet with non-negligible value.
    pub fn inverse(&self) -> Result<Jet> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(Error::JetValuation { numerator: None, denominator: 0 });
        }
        let inv0 = c0.inv();
        let k = self.order();
        let mut out = vec![Scalar::zero(); k + 1];
        out[0] = inv0.clone();
        for n in 1..=k {
            let mut acc = Scalar::zero();
            for j in 1..=n {
                acc = &acc + &(&self.coeffs[j] * &out[n - j]);
            }
            out[n] = -(&acc * &inv0);
        }
        Ok(Jet { coeffs: out })
    }

    /// Quotient with valuation cancellation.
    ///
    /// When the denominator has valuation `v`, the numerator's first `v`
    /// coefficients must vanish (exactly, or below the tolerance relative
    /// to `scale` in floating mode). Both are then divided by `ε^v` and the
    /// result loses `v` orders of precision.
    pub fn div_cancelling(&self, den: &Jet, scale: f64) -> Result<Jet> {
        let den_scale = den.max_abs();
        let v = match den.valuation(den_scale) {
            Some(v) => v,
            None => return Err(Error::JetValuation { numerator: None, denominator: den.order() + 1 }),
        };
        let num_scale = scale.max(self.max_abs());
        if let Some(nv) = self.valuation(num_scale) {
            if nv < v {
                return Err(Error::JetValuation { numerator: Some(nv), denominator: v });
            }
        }
        if v == 0 {
            let k = self.order().min(den.order());
            return Ok(&self.truncate(k) * &den.truncate(k).inverse()?);
        }
        let k = self.order().min(den.order());
        if v > k {
            return Err(Error::JetValuation { numerator: None, denominator: v });
        }
        let num = Jet { coeffs: self.coeffs[v..=k].to_vec() };
        let den = Jet { coeffs: den.coeffs[v..=k].to_vec() };
        Ok(&num * &den.inverse()?)
    }
}

impl Add for &Jet {
    type Output = Jet;
    fn add(self, rhs: &Jet) -> Jet {
        let k = self.order().min(rhs.order());
        Jet { coeffs: (0..=k).map(|i| &self.coeffs[i] + &rhs.coeffs[i]).collect() }
    }
}

impl Sub for &Jet {
    type Output = Jet;
    fn sub(self, rhs: &Jet) -> Jet {
        let k = self.order().min(rhs.order());
        Jet { coeffs: (0..=k).map(|i| &self.coeffs[i] - &rhs.coeffs[i]).collect() }
    }
}

impl Mul for &Jet {
    type Output = Jet;
    fn mul(self, rhs: &Jet) -> Jet {
        let k = self.order().min(rhs.order());
        let mut out = vec![Scalar::zero(); k + 1];
        for i in 0..=k {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=(k - i) {
                out[i + j] = &out[i + j] + &(&self.coeffs[i] * &rhs.coeffs[j]);
            }
        }
        Jet { coeffs: out }
    }
}

impl Neg for &Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        Jet { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}
