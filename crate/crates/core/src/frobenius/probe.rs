//! Plain power-series ansatz at an arbitrary point, including irregular
//! singular points where the formal solution may be trivial or divergent.

use crate::classify::classify_point;
use crate::indicial::falling_factorial_poly;
use crate::ode::Ode;
use crate::series::{poly, Scalar, Series};
use nalgebra::{DMatrix, DVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum ProbeStatus {
    /// Nontrivial formal solutions whose coefficients look convergent.
    Solutions,
    /// Every coefficient is forced to zero through the truncation order.
    TrivialOnly,
    /// Nontrivial formal solutions whose coefficients grow factorially.
    DivergentFormal,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FormalProbe {
    pub status: ProbeStatus,
    /// Basis of the formal solutions found through the truncation order.
    pub candidates: Vec<Series>,
    /// The recurrence `Σ_d P_d(m) a_{m+shift-d} = 0`, with `P_d` given by
    /// ascending coefficients in `m`.
    pub recurrence: Vec<Vec<Scalar>>,
    pub shift: i64,
    /// `|a_{n+1} / a_n|` for the first candidate, where defined.
    pub ratios: Vec<f64>,
    /// Smallest radius estimate among the candidates; infinite when every
    /// candidate terminates or decays faster than geometrically.
    pub radius_estimate: f64,
}

/// Substitutes `Σ a_m x^m` into the equation (right-hand side ignored),
/// solves the resulting recurrence through `trunc` and estimates the radius
/// of convergence of every independent formal solution.
pub fn formal_probe(e: &Ode, trunc: usize) -> FormalProbe {
    let n = e.order();
    let rows: Vec<Series> = (0..=n).map(|k| e.row_at(k, trunc + n + 1)).collect();
    let shift = rows
        .iter()
        .enumerate()
        .filter_map(|(k, r)| r.coeffs().iter().position(|c| !c.is_zero()).map(|v| k as i64 - v as i64))
        .max()
        .unwrap_or(0);
    // P_d(m) = Σ_k A_k[k + d - shift] · falling(m + shift - d, k)
    let depth = rows.iter().map(|r| r.trunc()).max().unwrap_or(0) + n;
    let mut recurrence: Vec<Vec<Scalar>> = Vec::new();
    for d in 0..=depth as i64 {
        let mut p: Vec<Scalar> = Vec::new();
        for (k, row) in rows.iter().enumerate() {
            let idx = k as i64 + d - shift;
            if idx < 0 {
                continue;
            }
            let c = row.coeff(idx as usize);
            if c.is_zero() {
                continue;
            }
            let fall = falling_factorial_poly(k);
            let moved = compose_shift(&fall, shift - d);
            p = poly::add(&p, &poly::scale(&moved, &c));
        }
        recurrence.push(p);
    }
    while recurrence.len() > 1 && recurrence.last().is_some_and(|p| p.is_empty()) {
        recurrence.pop();
    }
    let candidates = solve_recurrence(&recurrence, shift, trunc);
    let ratios = candidates
        .first()
        .map(|c| {
            c.coeffs()
                .windows(2)
                .filter(|w| !w[0].is_zero())
                .map(|w| w[1].abs() / w[0].abs())
                .take(16)
                .collect()
        })
        .unwrap_or_default();
    let radii: Vec<f64> = candidates.iter().map(radius_estimate).collect();
    let radius = radii.iter().cloned().fold(f64::INFINITY, f64::min);
    // Formal power series at ordinary and regular singular points converge.
    let regular = classify_point(e).is_ok_and(|c| c.is_regular());
    let status = if candidates.is_empty() {
        ProbeStatus::TrivialOnly
    } else if radius == 0.0 && !regular {
        ProbeStatus::DivergentFormal
    } else {
        ProbeStatus::Solutions
    };
    FormalProbe { status, candidates, recurrence, shift, ratios, radius_estimate: radius }
}

/// `p(m + h)` as a polynomial in `m`.
fn compose_shift(p: &[Scalar], h: i64) -> Vec<Scalar> {
    let lin = vec![Scalar::from_i64(h), Scalar::one()];
    let mut acc: Vec<Scalar> = Vec::new();
    for c in p.iter().rev() {
        acc = poly::add(&poly::mul(&acc, &lin), std::slice::from_ref(c));
    }
    acc
}

/// Coefficient vectors over the free parameters; returns one series per
/// surviving parameter.
fn solve_recurrence(recurrence: &[Vec<Scalar>], shift: i64, trunc: usize) -> Vec<Series> {
    // coeffs[i][p]: coefficient of parameter p in a_i.
    let mut coeffs: Vec<Vec<Scalar>> = Vec::new();
    let mut params = 0usize;
    let new_param = |coeffs: &mut Vec<Vec<Scalar>>, params: &mut usize| -> Vec<Scalar> {
        *params += 1;
        for c in coeffs.iter_mut() {
            c.push(Scalar::zero());
        }
        let mut v = vec![Scalar::zero(); *params];
        v[*params - 1] = Scalar::one();
        v
    };
    let scale_of = |coeffs: &Vec<Vec<Scalar>>| coeffs.iter().flatten().map(Scalar::abs).fold(0.0, f64::max);
    // Indices below the first equation's leading unknown are free.
    let first_newest = shift.max(0) as usize;
    for _ in 0..first_newest.min(trunc + 1) {
        let v = new_param(&mut coeffs, &mut params);
        coeffs.push(v);
    }
    for newest in first_newest..=trunc {
        let m = newest as i64 - shift;
        let lead = poly::eval(&recurrence[0], &Scalar::from_i64(m));
        let mut rest = vec![Scalar::zero(); params];
        for (d, p) in recurrence.iter().enumerate().skip(1) {
            let idx = newest as i64 - d as i64;
            if idx < 0 {
                break;
            }
            let w = poly::eval(p, &Scalar::from_i64(m));
            if w.is_zero() {
                continue;
            }
            for (r, c) in rest.iter_mut().zip(&coeffs[idx as usize]) {
                *r = &*r + &(&w * c);
            }
        }
        let lead_zero = if lead.is_exact() { lead.is_zero() } else { lead.abs() <= 1e-12 * (1.0 + rest.iter().map(Scalar::abs).fold(0.0, f64::max)) };
        if !lead_zero {
            let inv = -lead.inv();
            coeffs.push(rest.iter().map(|r| r * &inv).collect());
            continue;
        }
        let v = new_param(&mut coeffs, &mut params);
        coeffs.push(v);
        rest.push(Scalar::zero());
        // The equation is now a constraint among earlier parameters.
        let scale = scale_of(&coeffs).max(1.0);
        let pivot = rest
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_negligible(scale))
            .max_by(|a, b| a.1.abs().partial_cmp(&b.1.abs()).unwrap_or(std::cmp::Ordering::Equal))
            .map(|(i, _)| i);
        if let Some(p) = pivot {
            // parameter p = -Σ_{q≠p} rest[q]/rest[p] · parameter q
            let inv = rest[p].inv();
            for row in coeffs.iter_mut() {
                let cp = row[p].clone();
                if cp.is_zero() {
                    continue;
                }
                for q in 0..params {
                    if q != p {
                        row[q] = &row[q] - &(&(&cp * &rest[q]) * &inv);
                    }
                }
                row[p] = Scalar::zero();
            }
        }
    }
    let scale = scale_of(&coeffs).max(1.0);
    (0..params)
        .filter_map(|p| {
            let series: Vec<Scalar> = coeffs.iter().map(|row| row[p].clone()).collect();
            if series.iter().all(|c| c.is_negligible(scale)) {
                None
            } else {
                Some(Series::from_coeffs(series, trunc))
            }
        })
        .collect()
}

/// Least-squares slope of `ln|a_n|` against `n`, with the mean index.
fn growth_rate(points: &[(f64, f64)]) -> (f64, f64) {
    let len = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / len;
    let my = points.iter().map(|p| p.1).sum::<f64>() / len;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (if sxx > 0.0 { sxy / sxx } else { 0.0 }, mx)
}

/// Radius of convergence read off the last half of the nonzero coefficients.
///
/// `ln|a_n|` grows at rate `-ln R` for a convergent series and at a rate
/// near `k ln n` when `a_n` grows like `(n!)^k`. The rate is fitted on three
/// consecutive windows of the last half. When the coefficients are growing
/// at the end and the rate rises by more than half of the change in `ln n`
/// between both pairs of windows, at a steady pace, the series is reported
/// divergent (radius zero); when the rate falls that way, the series is
/// taken as entire. Divergence that has not overtaken the decay within the
/// computed terms stays invisible.
///
/// Otherwise the radius is the larger of `exp(-rate)` on the last window
/// and `exp(-β)` from a fit `ln|a_n| ≈ c + α ln n + β n` over the whole
/// last half. The plain rate reads low while an `n^α` factor is still
/// growing; the fit reads low when a small component takes over late.
/// Fewer than eight nonzero coefficients count as a terminating series.
pub fn radius_estimate(s: &Series) -> f64 {
    let points: Vec<(f64, f64)> = s
        .coeffs()
        .iter()
        .enumerate()
        .skip(1)
        .filter(|(_, c)| c.abs() > 0.0)
        .map(|(n, c)| (n as f64, c.abs().ln()))
        .collect();
    if points.len() < 8 {
        return f64::INFINITY;
    }
    let last = points.last().map_or(0.0, |p| p.0);
    let late: Vec<(f64, f64)> = points.iter().copied().filter(|p| p.0 > last / 2.0).collect();
    let width = late.len() / 3;
    if width < 2 {
        return f64::INFINITY;
    }
    let windows = [&late[..width], &late[width..2 * width], &late[2 * width..]];
    let fits = windows.map(growth_rate);
    let acceleration = |(r0, at0): (f64, f64), (r1, at1): (f64, f64)| (r1 - r0) / (at1 / at0).ln();
    let (k1, k2) = (acceleration(fits[0], fits[1]), acceleration(fits[1], fits[2]));
    let rate = fits[2].0;
    // (n!)^k growth keeps roughly the same k from window to window.
    let steady = k2.abs() >= 0.5 * k1.abs();
    if steady && rate > 0.0 && k1 > 0.5 && k2 > 0.5 {
        0.0
    } else if steady && k1 < -0.5 && k2 < -0.5 {
        f64::INFINITY
    } else {
        let fitted = power_law_rate(&late).map_or(0.0, |beta| (-beta).exp());
        (-rate).exp().max(fitted)
    }
}

/// Least-squares fit of `ln|a_n| = c + α ln n + β n`, returning `β`. The
/// `n^α` factor stands in for the algebraic singularity on the circle of
/// convergence, which dominates the plain slope until `n` is well past `α`.
fn power_law_rate(points: &[(f64, f64)]) -> Option<f64> {
    let design = DMatrix::from_fn(points.len(), 3, |i, j| match j {
        0 => 1.0,
        1 => points[i].0.ln(),
        _ => points[i].0,
    });
    let rhs = DVector::from_iterator(points.len(), points.iter().map(|p| p.1));
    let fit = design.svd(true, true).solve(&rhs, 1e-12).ok()?;
    fit[2].is_finite().then_some(fit[2])
}
