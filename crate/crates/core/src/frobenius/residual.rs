//! Applying a differential operator to a generalized series.

use crate::error::Result;
use crate::ode::Ode;
use crate::series::generalized::{class_offset, GsTerm};
use crate::series::{GeneralizedSeries, Scalar, Series};
use std::collections::BTreeMap;

/// Coefficients of `L(g) - f` known with certainty.
#[derive(Clone, Debug, PartialEq)]
pub struct Residual {
    /// The residual through `reliable_through` (exclusive).
    pub series: GeneralizedSeries,
    /// Offset of the first non-vanishing coefficient above the lowest
    /// exponent of `g`, by real part. When everything known vanishes this
    /// equals `reliable_through`.
    pub valuation: i64,
    /// Offset, above the same base, of the first coefficient that depends
    /// on data beyond the truncation of `g` or of the equation.
    pub reliable_through: i64,
    /// Largest ratio between a coefficient and the sum of the magnitudes
    /// that produced it; zero means exact cancellation everywhere.
    pub max_relative: f64,
}

/// Relative threshold under which a floating coefficient counts as cancelled.
pub const RESIDUAL_TOL: f64 = 1e-10;

#[derive(Default)]
struct Cell {
    value: Option<Scalar>,
    envelope: f64,
}

impl Cell {
    fn add(&mut self, c: Scalar) {
        self.envelope += c.abs();
        self.value = Some(match self.value.take() {
            Some(v) => &v + &c,
            None => c,
        });
    }
}

/// `L(g) - f` for the equation `e`, computed coefficientwise. Offsets are
/// measured from the lowest exponent of `g`.
pub fn residual(e: &Ode, g: &GeneralizedSeries) -> Result<Residual> {
    residual_from(e, g, &g.base_exponent().unwrap_or_else(Scalar::zero))
}

/// As [`residual`], with offsets measured from `base`, typically the
/// indicial root a solution was expanded at.
pub fn residual_from(e: &Ode, g: &GeneralizedSeries, base: &Scalar) -> Result<Residual> {
    let n = e.order();
    let mut reps: Vec<Scalar> = Vec::new();
    let class_of = |reps: &mut Vec<Scalar>, x: &Scalar| -> (usize, i64) {
        for (i, r) in reps.iter().enumerate() {
            if let Some(k) = class_offset(x, r) {
                return (i, k);
            }
        }
        reps.push(x.clone());
        (reps.len() - 1, 0)
    };
    let base_re = base.re_f64();
    let mut cells: BTreeMap<(usize, i64, u32), Cell> = BTreeMap::new();
    let mut limit = f64::INFINITY;
    for t in g.terms() {
        let (cls, off) = class_of(&mut reps, &t.exponent);
        let m = t.log_power as usize;
        let tt = t.body.trunc();
        for k in 0..=n {
            let row = e.row(k);
            let Some(vk) = row.coeffs().iter().position(|c| !c.is_zero()) else { continue };
            let known = if e.is_polynomial() { f64::INFINITY } else { (row.trunc() + 1) as f64 };
            let bound = known.min((tt + 1 + vk) as f64);
            limit = limit.min(t.exponent.re_f64() - k as f64 + bound);
        }
        for (i, b) in t.body.coeffs().iter().enumerate() {
            if b.is_zero() {
                continue;
            }
            let s = &t.exponent + &Scalar::from_i64(i as i64);
            // Coefficients of (log x)^l in x^{k-s} d^k/dx^k [x^s (log x)^m].
            let mut logs = vec![Scalar::zero(); m + 1];
            logs[m] = Scalar::one();
            for k in 0..=n {
                let row = e.row(k);
                for (j, a) in row.coeffs().iter().enumerate() {
                    if a.is_zero() {
                        continue;
                    }
                    let ab = a * b;
                    let offset = off + i as i64 + j as i64 - k as i64;
                    for (l, c) in logs.iter().enumerate() {
                        if !c.is_zero() {
                            cells.entry((cls, offset, l as u32)).or_default().add(&ab * c);
                        }
                    }
                }
                let shift = &s - &Scalar::from_i64(k as i64);
                let mut next = vec![Scalar::zero(); m + 1];
                for l in 0..=m {
                    let mut v = &logs[l] * &shift;
                    if l < m {
                        v = &v + &(&logs[l + 1] * &Scalar::from_i64(l as i64 + 1));
                    }
                    next[l] = v;
                }
                logs = next;
            }
        }
    }
    if let Some(f) = e.rhs() {
        let (cls, off) = class_of(&mut reps, &Scalar::zero());
        if !e.is_polynomial() {
            limit = limit.min((f.trunc() + 1) as f64);
        }
        for (i, c) in f.coeffs().iter().enumerate() {
            if !c.is_zero() {
                cells.entry((cls, off + i as i64, 0)).or_default().add(-c);
            }
        }
    }
    let reliable_through = if limit.is_finite() { (limit - base_re - 1e-9).ceil() as i64 } else { i64::MAX };
    let mut valuation = reliable_through;
    let mut max_relative: f64 = 0.0;
    let mut bodies: BTreeMap<(usize, u32), Vec<(i64, Scalar)>> = BTreeMap::new();
    for ((cls, off, l), cell) in cells {
        let exponent = &reps[cls] + &Scalar::from_i64(off);
        if exponent.re_f64() >= limit - 1e-9 {
            continue;
        }
        let rel_off = (exponent.re_f64() - base_re + 1e-9).floor() as i64;
        let Some(value) = cell.value else { continue };
        let ratio = if cell.envelope > 0.0 { value.abs() / cell.envelope } else { 0.0 };
        let vanishes = if value.is_exact() { value.is_zero() } else { ratio <= RESIDUAL_TOL };
        if !value.is_exact() {
            max_relative = max_relative.max(ratio);
        } else if !value.is_zero() {
            max_relative = max_relative.max(ratio.max(f64::MIN_POSITIVE));
        }
        if !vanishes {
            valuation = valuation.min(rel_off);
        }
        bodies.entry((cls, l)).or_default().push((off, value));
    }
    let mut terms = Vec::new();
    for ((cls, l), entries) in bodies {
        let lo = entries.iter().map(|(o, _)| *o).min().unwrap_or(0);
        let hi = entries.iter().map(|(o, _)| *o).max().unwrap_or(0);
        let mut coeffs = vec![Scalar::zero(); (hi - lo + 1) as usize];
        for (o, v) in entries {
            coeffs[(o - lo) as usize] = v;
        }
        let len = coeffs.len() - 1;
        terms.push(GsTerm { exponent: &reps[cls] + &Scalar::from_i64(lo), log_power: l, body: Series::from_coeffs(coeffs, len) });
    }
    Ok(Residual { series: GeneralizedSeries::new(terms), valuation, reliable_through, max_relative })
}
