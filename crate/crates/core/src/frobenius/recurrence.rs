//! The coefficient recurrence of the Frobenius method evaluated on jets.
//!
//! For `x^n y^(n) + Σ_k x^k p_k(x) y^(k) = 0` and the ansatz
//! `Σ_m D_m x^{m+s}`, equating powers gives
//! `q(N + s) D_N = -Σ_{m<N} Q_{N-m}(m + s) D_m` with
//! `Q_j(s) = Σ_k p_k[j] s(s-1)...(s-k+1)`. Running it at `s = ρ + ε`
//! yields the coefficients and their derivatives in `ρ` together.

use crate::error::{Error, Result};
use crate::ode::FrobeniusForm;
use crate::series::{Jet, Scalar};

/// How the indicial polynomial factors around the root being expanded.
#[derive(Clone, Debug)]
pub(crate) struct Factorization {
    /// Integer offsets `r_i - ρ` of roots in the same class as `ρ`, with multiplicity.
    pub class_offsets: Vec<i64>,
    /// `ρ - r_i` for the roots in other classes.
    pub other_gaps: Vec<Scalar>,
}

/// `s(s-1)...(s-k+1)` for `k = 0..=n`.
fn falling_jets(s: &Jet, n: usize) -> Vec<Jet> {
    let mut out = Vec::with_capacity(n + 1);
    let mut acc = Jet::constant(Scalar::one(), s.order());
    out.push(acc.clone());
    for k in 0..n {
        acc = &acc * &(s - &Jet::constant(Scalar::from_i64(k as i64), s.order()));
        out.push(acc.clone());
    }
    out
}

/// `E_N(s) = Σ_{m<N} Σ_k p_k[N-m] · s_m(s_m - 1)... · D_m`, from the cached
/// products `terms[m][k] = falling(m + s, k) · D_m`. Row `k = n` is the
/// leading unit, whose constant term already sits in `q`.
fn forcing(form: &FrobeniusForm, terms: &[Vec<Jet>], big_n: usize) -> Jet {
    let order = terms.iter().flat_map(|t| t.iter().map(Jet::order)).min().unwrap_or(0);
    let mut acc = Jet::constant(Scalar::zero(), order);
    for (m, row) in terms.iter().enumerate() {
        for (k, t) in row.iter().enumerate() {
            let c = form.row_coeff(k, big_n - m);
            if !c.is_zero() {
                acc = &acc + &t.scale(&c);
            }
        }
    }
    acc
}

/// Runs the recurrence at `base + ε` with `D_0 = seed`, dividing by the
/// factored indicial polynomial so that every cancellation of `ε` powers
/// is exact.
pub(crate) fn run_factored(
    form: &FrobeniusForm,
    base: &Scalar,
    factors: &Factorization,
    seed: Jet,
    terms: usize,
) -> Result<Vec<Jet>> {
    let n = form.order();
    let order = seed.order();
    let mut ds = vec![seed];
    let mut cache: Vec<Vec<Jet>> = Vec::with_capacity(terms + 1);
    for big_n in 1..=terms {
        let m = big_n - 1;
        let s = Jet::variable(base + &Scalar::from_i64(m as i64), order);
        let falling = falling_jets(&s, n);
        cache.push(falling.iter().map(|f| f * &ds[m]).collect());
        let e = forcing(form, &cache, big_n);
        let nn = big_n as i64;
        let resonant = factors.class_offsets.iter().filter(|&&d| d == nn).count();
        let mut unit = Jet::constant(Scalar::one(), e.order());
        for &d in factors.class_offsets.iter().filter(|&&d| d != nn) {
            unit = &unit * &Jet::variable(Scalar::from_i64(nn - d), e.order());
        }
        for g in &factors.other_gaps {
            unit = &unit * &Jet::variable(g + &Scalar::from_i64(nn), e.order());
        }
        if resonant > e.order() {
            return Err(Error::JetValuation { numerator: None, denominator: resonant });
        }
        if let Some(first) = e.coeffs()[..resonant].iter().position(|c| !c.is_zero()) {
            return Err(Error::JetValuation { numerator: Some(first), denominator: resonant });
        }
        let reduced = Jet::from_coeffs(e.coeffs()[resonant..].to_vec());
        let unit = unit.truncate(reduced.order());
        ds.push(-&(&reduced * &unit.inverse()?));
    }
    Ok(ds)
}

/// Recurrence coefficients `D_0..D_terms` at `r + ε` with `D_0 = 1`, jets of
/// the given order, dividing by `q(N + r + ε)` evaluated directly.
///
/// Meant for points where `q(N + r)` does not vanish for `N ≥ 1`; a
/// vanishing denominator is reported as a valuation error.
pub fn coefficient_jets(form: &FrobeniusForm, r: &Scalar, order: usize, terms: usize) -> Result<Vec<Jet>> {
    let n = form.order();
    let q = crate::indicial::indicial_polynomial(form);
    let mut ds = vec![Jet::constant(Scalar::one(), order)];
    let mut cache: Vec<Vec<Jet>> = Vec::with_capacity(terms + 1);
    for big_n in 1..=terms {
        let m = big_n - 1;
        let s = Jet::variable(r + &Scalar::from_i64(m as i64), order);
        let falling = falling_jets(&s, n);
        cache.push(falling.iter().map(|f| f * &ds[m]).collect());
        let e = forcing(form, &cache, big_n);
        let at = Jet::variable(r + &Scalar::from_i64(big_n as i64), order);
        let den = q.iter().rev().fold(Jet::constant(Scalar::zero(), order), |acc, c| {
            &(&acc * &at) + &Jet::constant(c.clone(), order)
        });
        let scale = e.max_abs();
        ds.push(-&e.div_cancelling(&den, scale)?);
    }
    Ok(ds)
}

/// Plain coefficients `D_0 = 1, D_1, ...` at a scalar exponent.
pub fn coefficients_at(form: &FrobeniusForm, r: &Scalar, terms: usize) -> Result<Vec<Scalar>> {
    Ok(coefficient_jets(form, r, 0, terms)?.into_iter().map(|j| j.value().clone()).collect())
}
