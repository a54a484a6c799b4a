//! Random equation generators shared by the property suites and the
//! acceptance harness.
#![allow(dead_code)]

use odeseries::ode::{FrobeniusForm, Ode};
use odeseries::series::{Scalar, Series};
use rand::rngs::StdRng;
use rand::Rng;

/// A small rational `p/q` with `|p| ≤ 3`, `q ∈ {1, 2, 3}`.
pub fn small_rational(rng: &mut StdRng) -> Scalar {
    Scalar::ratio(rng.random_range(-3..=3), rng.random_range(1..=3))
}

fn nonzero_rational(rng: &mut StdRng) -> Scalar {
    loop {
        let s = small_rational(rng);
        if !s.is_zero() {
            return s;
        }
    }
}

fn random_poly(rng: &mut StdRng, degree: usize) -> Vec<Scalar> {
    (0..=degree).map(|_| small_rational(rng)).collect()
}

fn times_x_power(p: Vec<Scalar>, k: usize) -> Vec<Scalar> {
    let mut out = vec![Scalar::zero(); k];
    out.extend(p);
    out
}

/// Coefficients `c_0..c_{n-1}` of `r(r-1)...(r-n+1) + Σ_k c_k (falling factorial of order k)`
/// whose indicial polynomial is `Π (r - roots[i])`, found by matching
/// monomial coefficients from the top.
pub fn constants_for_roots(roots: &[Scalar]) -> Vec<Scalar> {
    let n = roots.len();
    // Target monic polynomial, ascending.
    let mut target = vec![Scalar::one()];
    for r in roots {
        let mut next = vec![Scalar::zero(); target.len() + 1];
        for (i, c) in target.iter().enumerate() {
            next[i + 1] = &next[i + 1] + c;
            next[i] = &next[i] - &(c * r);
        }
        target = next;
    }
    let falling = |k: usize| -> Vec<Scalar> {
        let mut p = vec![Scalar::one()];
        for j in 0..k {
            let mut next = vec![Scalar::zero(); p.len() + 1];
            for (i, c) in p.iter().enumerate() {
                next[i + 1] = &next[i + 1] + c;
                next[i] = &next[i] - &(c * &Scalar::from_i64(j as i64));
            }
            p = next;
        }
        p
    };
    let mut rest: Vec<Scalar> = target.iter().zip(falling(n).iter().chain(std::iter::repeat(&Scalar::zero()))).map(|(t, f)| t - f).collect();
    let mut consts = vec![Scalar::zero(); n];
    for k in (0..n).rev() {
        let c = rest[k].clone();
        for (i, f) in falling(k).iter().enumerate() {
            rest[i] = &rest[i] - &(&c * f);
        }
        consts[k] = c;
    }
    consts
}

/// A polynomial equation with a regular singular point at the origin and
/// coefficient degrees at most 4. With `integer_roots` the indicial roots are
/// forced to small integers so every exceptional configuration occurs.
pub fn random_regular_singular(rng: &mut StdRng, order: usize, trunc: usize, integer_roots: bool) -> Ode {
    let lead_tail = 4 - order;
    let mut unit = random_poly(rng, lead_tail.min(1));
    unit[0] = nonzero_rational(rng);
    let mut rows_low: Vec<Vec<Scalar>> = (0..order).map(|k| times_x_power(random_poly(rng, 4 - k), k)).collect();
    if integer_roots {
        let roots: Vec<Scalar> = (0..order).map(|_| Scalar::from_i64(rng.random_range(-2..=3))).collect();
        // Row k's x^k coefficient is u0 · c_k.
        for (k, c) in constants_for_roots(&roots).into_iter().enumerate() {
            rows_low[k][k] = &unit[0] * &c;
        }
    }
    let mut rows = vec![times_x_power(unit, order)];
    rows.extend(rows_low.into_iter().rev());
    Ode::from_polynomials(rows, trunc).expect("valid instance")
}

/// Frobenius form with prescribed indicial roots and random analytic tails
/// of degree at most two.
pub fn form_with_roots(rng: &mut StdRng, roots: &[Scalar], trunc: usize) -> FrobeniusForm {
    let consts = constants_for_roots(roots);
    let p = consts
        .into_iter()
        .map(|c| {
            let mut coeffs = vec![c];
            coeffs.extend((0..2).map(|_| small_rational(rng)));
            Series::from_coeffs(coeffs, trunc)
        })
        .collect();
    FrobeniusForm::new(p).expect("two or three rows")
}

/// Distinct roots of order three whose pairwise differences are not integers.
pub fn nonexceptional_roots(rng: &mut StdRng) -> Vec<Scalar> {
    let offsets = [Scalar::ratio(1, 3), Scalar::ratio(1, 2), Scalar::ratio(1, 5), Scalar::gaussian(0, 1)];
    let mut picks: Vec<usize> = (0..4).collect();
    for i in (1..4).rev() {
        picks.swap(i, rng.random_range(0..=i));
    }
    picks[..3].iter().map(|&i| &offsets[i] + &Scalar::from_i64(rng.random_range(-2..=2))).collect()
}
