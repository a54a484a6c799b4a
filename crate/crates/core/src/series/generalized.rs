//! Finite sums of `x^ρ (log x)^m · f(x)` with `f` a truncated power series.
//!
//! This is the representation of every solution the engine produces. Terms
//! whose exponents differ by an integer and that carry the same log power are
//! merged, so each term's exponent is a representative of its class modulo
//! the integers. Each body keeps its own truncation order, measured relative
//! to its term's exponent.

use super::power::{first_significant, Series};
use super::scalar::{Scalar, CLASS_TOL};
use crate::error::{Error, Result};
use num_complex::Complex64;
use std::cmp::Ordering;
use std::ops::{Add, Mul, Neg, Sub};

/// One summand `x^exponent (log x)^log_power · body(x)`.
#[derive(Clone, Debug, PartialEq)]
pub struct GsTerm {
    pub exponent: Scalar,
    pub log_power: u32,
    pub body: Series,
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct GeneralizedSeries {
    terms: Vec<GsTerm>,
}

/// Integer `a - b` when the two exponents lie in the same class.
pub fn class_offset(a: &Scalar, b: &Scalar) -> Option<i64> {
    (a - b).as_integer(CLASS_TOL)
}

impl GeneralizedSeries {
    /// The empty sum.
    pub fn zero() -> Self {
        GeneralizedSeries { terms: Vec::new() }
    }

    /// Builds and normalizes a sum of terms.
    pub fn new(terms: Vec<GsTerm>) -> Self {
        let mut g = GeneralizedSeries { terms };
        g.normalize();
        g
    }

    pub fn from_series(body: Series) -> Self {
        GeneralizedSeries::term(Scalar::zero(), 0, body)
    }

    pub fn term(exponent: Scalar, log_power: u32, body: Series) -> Self {
        GeneralizedSeries::new(vec![GsTerm { exponent, log_power, body }])
    }

    /// `x^exponent (log x)^log_power` with a constant body known through `trunc`.
    pub fn monomial(exponent: Scalar, log_power: u32, trunc: usize) -> Self {
        GeneralizedSeries::term(exponent, log_power, Series::one(trunc))
    }

    pub fn terms(&self) -> &[GsTerm] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_exact(&self) -> bool {
        self.terms.iter().all(|t| t.exponent.is_exact() && t.body.is_exact())
    }

    pub fn to_float(&self) -> Self {
        GeneralizedSeries::new(
            self.terms
                .iter()
                .map(|t| GsTerm { exponent: t.exponent.to_float(), log_power: t.log_power, body: t.body.to_float() })
                .collect(),
        )
    }

    pub fn max_log_power(&self) -> Option<u32> {
        self.terms.iter().map(|t| t.log_power).max()
    }

    /// Smallest body truncation order among the terms.
    pub fn min_trunc(&self) -> Option<usize> {
        self.terms.iter().map(|t| t.body.trunc()).min()
    }

    /// Exponent of the term with the smallest real part.
    pub fn base_exponent(&self) -> Option<Scalar> {
        self.terms
            .iter()
            .min_by(|a, b| a.exponent.cmp_re_im(&b.exponent))
            .map(|t| t.exponent.clone())
    }

    pub fn max_abs(&self) -> f64 {
        self.terms.iter().map(|t| t.body.max_abs()).fold(0.0, f64::max)
    }

    /// The part carrying exactly `(log x)^m`, returned without the log factor.
    pub fn log_part(&self, m: u32) -> GeneralizedSeries {
        GeneralizedSeries::new(
            self.terms
                .iter()
                .filter(|t| t.log_power == m)
                .map(|t| GsTerm { exponent: t.exponent.clone(), log_power: 0, body: t.body.clone() })
                .collect(),
        )
    }

    /// Coefficient of `x^exponent (log x)^log_power`, zero when absent.
    pub fn coeff_at(&self, exponent: &Scalar, log_power: u32) -> Scalar {
        for t in &self.terms {
            if t.log_power != log_power {
                continue;
            }
            if let Some(k) = class_offset(exponent, &t.exponent) {
                if k >= 0 {
                    return t.body.coeff(k as usize);
                }
            }
        }
        Scalar::zero()
    }

    /// Lowest-order nonzero coefficient: smallest real exponent, then the
    /// highest log power at that exponent.
    pub fn leading(&self) -> Option<(Scalar, u32, Scalar)> {
        let mut best: Option<(Scalar, u32, Scalar)> = None;
        for t in &self.terms {
            let v = match first_significant(t.body.coeffs()) {
                Some(v) => v,
                None => continue,
            };
            let e = &t.exponent + &Scalar::from_i64(v as i64);
            let c = t.body.coeff(v);
            let better = match &best {
                None => true,
                Some((be, bm, _)) => match e.re_f64().partial_cmp(&be.re_f64()).unwrap_or(Ordering::Equal) {
                    Ordering::Less => (be.re_f64() - e.re_f64()) > CLASS_TOL,
                    _ => (e.re_f64() - be.re_f64()).abs() <= CLASS_TOL && t.log_power > *bm,
                },
            };
            if better {
                best = Some((e, t.log_power, c));
            }
        }
        best
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        GeneralizedSeries::new(
            self.terms
                .iter()
                .map(|t| GsTerm { exponent: t.exponent.clone(), log_power: t.log_power, body: t.body.scale(c) })
                .collect(),
        )
    }

    /// Multiplication by an ordinary power series.
    pub fn mul_series(&self, s: &Series) -> Self {
        self * &GeneralizedSeries::from_series(s.clone())
    }

    /// Multiplication by `x^e`.
    pub fn shift_exponent(&self, e: &Scalar) -> Self {
        GeneralizedSeries::new(
            self.terms
                .iter()
                .map(|t| GsTerm { exponent: &t.exponent + e, log_power: t.log_power, body: t.body.clone() })
                .collect(),
        )
    }

    /// Cuts every body to at most `trunc` coefficients past its exponent.
    pub fn truncate(&self, trunc: usize) -> Self {
        GeneralizedSeries::new(
            self.terms
                .iter()
                .map(|t| GsTerm {
                    exponent: t.exponent.clone(),
                    log_power: t.log_power,
                    body: t.body.truncate(t.body.trunc().min(trunc)),
                })
                .collect(),
        )
    }

    /// Strips leading coefficients that are negligible, and drops terms with
    /// nothing else. A coefficient at exponent `e` is negligible when it is
    /// at most `rel_tol` times the largest coefficient of the whole sum at
    /// exponents up to `e` (by real part), or times one if that is larger.
    pub fn prune(&self, rel_tol: f64) -> Self {
        let mut sizes: Vec<(f64, f64)> = self
            .terms
            .iter()
            .flat_map(|t| {
                let base = t.exponent.re_f64();
                t.body.coeffs().iter().enumerate().map(move |(n, c)| (base + n as f64, c.abs()))
            })
            .collect();
        sizes.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut running = 0.0f64;
        for entry in sizes.iter_mut() {
            running = running.max(entry.1);
            entry.1 = running;
        }
        let scale_at = |e: f64| -> f64 {
            let upto = sizes.partition_point(|(x, _)| *x <= e + CLASS_TOL);
            if upto == 0 { 0.0 } else { sizes[upto - 1].1 }
        };
        let mut terms = Vec::new();
        for t in &self.terms {
            let base = t.exponent.re_f64();
            let lead = t.body.coeffs().iter().enumerate().position(|(n, c)| c.abs() > rel_tol * scale_at(base + n as f64).max(1.0));
            let Some(lead) = lead else { continue };
            let body = t.body.shift_down(lead).expect("lead within body");
            terms.push(GsTerm {
                exponent: &t.exponent + &Scalar::from_i64(lead as i64),
                log_power: t.log_power,
                body,
            });
        }
        GeneralizedSeries::new(terms)
    }

    /// Formal derivative. Relative truncation orders are kept because the
    /// exponent drop absorbs the lost order.
    pub fn differentiate(&self) -> Self {
        let mut out = Vec::new();
        for t in &self.terms {
            let e = &t.exponent - &Scalar::one();
            let scaled: Vec<Scalar> = t
                .body
                .coeffs()
                .iter()
                .enumerate()
                .map(|(n, c)| c * &(&t.exponent + &Scalar::from_i64(n as i64)))
                .collect();
            out.push(GsTerm {
                exponent: e.clone(),
                log_power: t.log_power,
                body: Series::from_coeffs(scaled, t.body.trunc()),
            });
            if t.log_power > 0 {
                out.push(GsTerm {
                    exponent: e,
                    log_power: t.log_power - 1,
                    body: t.body.scale(&Scalar::from_i64(t.log_power as i64)),
                });
            }
        }
        GeneralizedSeries::new(out)
    }

    /// Antiderivative with zero integration constant.
    ///
    /// Uses `∫x^s (log x)^m = x^{s+1}(log x)^m/(s+1) - m/(s+1) ∫x^s (log x)^{m-1}`
    /// and `∫x^{-1}(log x)^m = (log x)^{m+1}/(m+1)`.
    pub fn integrate(&self) -> Self {
        let mut out = Vec::new();
        for t in &self.terms {
            let m = t.log_power as usize;
            let trunc = t.body.trunc();
            let e = &t.exponent + &Scalar::one();
            // Bodies for log powers 0..=m+1 of the result.
            let mut bodies = vec![vec![Scalar::zero(); trunc + 1]; m + 2];
            for (n, c) in t.body.coeffs().iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let s1 = &e + &Scalar::from_i64(n as i64);
                if s1.is_zero() || (!s1.is_exact() && s1.abs() <= CLASS_TOL) {
                    bodies[m + 1][n] = &bodies[m + 1][n] + &(c / &Scalar::from_i64(m as i64 + 1));
                    continue;
                }
                // Σ_j (-1)^j m!/(m-j)! / s1^{j+1} (log x)^{m-j}
                let inv = s1.inv();
                let mut factor = c * &inv;
                for j in 0..=m {
                    bodies[m - j][n] = &bodies[m - j][n] + &factor;
                    factor = &(&factor * &inv) * &Scalar::from_i64(-((m - j) as i64));
                }
            }
            for (lp, coeffs) in bodies.into_iter().enumerate() {
                out.push(GsTerm {
                    exponent: e.clone(),
                    log_power: lp as u32,
                    body: Series::from_coeffs(coeffs, trunc),
                });
            }
        }
        GeneralizedSeries::new(out)
    }

    /// Principal-branch evaluation: `Σ body(x) · exp(ρ Log x) · (Log x)^m`.
    pub fn evaluate(&self, x: Complex64) -> Result<Complex64> {
        if x == Complex64::new(0.0, 0.0) {
            return self.evaluate_at_zero();
        }
        let lx = x.ln();
        let mut acc = Complex64::new(0.0, 0.0);
        for t in &self.terms {
            let body = t.body.eval(x);
            let power = (t.exponent.to_c64() * lx).exp();
            acc += body * power * lx.powu(t.log_power);
        }
        Ok(acc)
    }

    /// Evaluation on the real line using `|x|` in place of `x`.
    pub fn evaluate_abs(&self, x: f64) -> Result<Complex64> {
        self.evaluate(Complex64::new(x.abs(), 0.0))
    }

    fn evaluate_at_zero(&self) -> Result<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for t in &self.terms {
            let Some(v) = t.body.coeffs().iter().position(|c| !c.is_zero()) else { continue };
            let e = &t.exponent + &Scalar::from_i64(v as i64);
            if e.re_f64() > 0.0 {
                continue;
            }
            if e.is_zero() && t.log_power == 0 {
                acc += t.body.coeff(v).to_c64();
                continue;
            }
            return Err(Error::Evaluation("term does not vanish at the origin".into()));
        }
        Ok(acc)
    }

    /// Inverse of a sum that reduces to a single log-free term.
    pub fn inverse(&self) -> Result<Self> {
        let g = if self.is_exact() { self.clone() } else { self.prune(1e-9) };
        if g.terms.len() != 1 || g.terms[0].log_power != 0 {
            return Err(Error::NotInvertible(
                "only a single log-free term x^ρ·f(x) can be inverted".into(),
            ));
        }
        let t = &g.terms[0];
        let inv = t.body.inverse()?;
        Ok(GeneralizedSeries::term(-&t.exponent, 0, inv))
    }

    /// Canonical form: leading exact zeros move into the exponent, terms of
    /// one class and log power merge, zero bodies disappear.
    fn normalize(&mut self) {
        let mut stripped: Vec<GsTerm> = Vec::with_capacity(self.terms.len());
        for t in self.terms.drain(..) {
            if let Some(s) = strip_exact_zeros(t) {
                stripped.push(s);
            }
        }
        let mut groups: Vec<Vec<GsTerm>> = Vec::new();
        'outer: for t in stripped {
            for g in groups.iter_mut() {
                if g[0].log_power == t.log_power && class_offset(&t.exponent, &g[0].exponent).is_some() {
                    g.push(t);
                    continue 'outer;
                }
            }
            groups.push(vec![t]);
        }
        let mut merged: Vec<GsTerm> = Vec::with_capacity(groups.len());
        for g in groups {
            if g.len() == 1 {
                merged.extend(g);
                continue;
            }
            let offsets: Vec<i64> = g
                .iter()
                .map(|t| class_offset(&t.exponent, &g[0].exponent).expect("grouped by class"))
                .collect();
            let (base_idx, &min_off) = offsets.iter().enumerate().min_by_key(|(_, o)| **o).expect("nonempty");
            let trunc = g
                .iter()
                .zip(&offsets)
                .map(|(t, o)| (o - min_off) as usize + t.body.trunc())
                .min()
                .expect("nonempty");
            let mut body = Series::zero(trunc);
            for (t, o) in g.iter().zip(&offsets) {
                let shifted = t.body.shift_up((o - min_off) as usize).truncate(trunc);
                body = &body + &shifted;
            }
            let term = GsTerm { exponent: g[base_idx].exponent.clone(), log_power: g[0].log_power, body };
            if let Some(s) = strip_exact_zeros(term) {
                merged.push(s);
            }
        }
        merged.sort_by(|a, b| a.exponent.cmp_re_im(&b.exponent).then(b.log_power.cmp(&a.log_power)));
        self.terms = merged;
    }
}

fn strip_exact_zeros(t: GsTerm) -> Option<GsTerm> {
    let p = t.body.exact_zero_prefix();
    if p > t.body.trunc() {
        return None;
    }
    if p == 0 {
        return Some(t);
    }
    Some(GsTerm {
        exponent: &t.exponent + &Scalar::from_i64(p as i64),
        log_power: t.log_power,
        body: t.body.shift_down(p).expect("prefix within body"),
    })
}

impl Add for &GeneralizedSeries {
    type Output = GeneralizedSeries;
    fn add(self, rhs: &GeneralizedSeries) -> GeneralizedSeries {
        let mut terms = self.terms.clone();
        terms.extend(rhs.terms.iter().cloned());
        GeneralizedSeries::new(terms)
    }
}

impl Neg for &GeneralizedSeries {
    type Output = GeneralizedSeries;
    fn neg(self) -> GeneralizedSeries {
        GeneralizedSeries {
            terms: self
                .terms
                .iter()
                .map(|t| GsTerm { exponent: t.exponent.clone(), log_power: t.log_power, body: -&t.body })
                .collect(),
        }
    }
}

impl Sub for &GeneralizedSeries {
    type Output = GeneralizedSeries;
    fn sub(self, rhs: &GeneralizedSeries) -> GeneralizedSeries {
        self + &(-rhs)
    }
}

impl Mul for &GeneralizedSeries {
    type Output = GeneralizedSeries;
    fn mul(self, rhs: &GeneralizedSeries) -> GeneralizedSeries {
        let mut terms = Vec::with_capacity(self.terms.len() * rhs.terms.len());
        for a in &self.terms {
            for b in &rhs.terms {
                terms.push(GsTerm {
                    exponent: &a.exponent + &b.exponent,
                    log_power: a.log_power + b.log_power,
                    body: &a.body * &b.body,
                });
            }
        }
        GeneralizedSeries::new(terms)
    }
}

macro_rules! owned_gs_op {
    ($trait:ident, $method:ident) => {
        impl $trait for GeneralizedSeries {
            type Output = GeneralizedSeries;
            fn $method(self, rhs: GeneralizedSeries) -> GeneralizedSeries {
                (&self).$method(&rhs)
            }
        }
    };
}

owned_gs_op!(Add, add);
owned_gs_op!(Sub, sub);
owned_gs_op!(Mul, mul);
