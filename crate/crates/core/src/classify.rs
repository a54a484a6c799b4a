//! Ordinary, regular singular and irregular points, Euler equations and the
//! characterization of equations regular at both the origin and infinity.

use crate::error::{Error, Result};
use crate::ode::{transform_to_infinity, Ode};
use crate::series::poly;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PointKind {
    Ordinary,
    RegularSingular,
    IrregularSingular,
}

/// Classification of the chart origin with the data that decided it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SingularityClass {
    pub kind: PointKind,
    /// Pole order of `A_k / A_n` for `k = 0..n`, or `None` when `A_k` vanishes.
    pub pole_orders: Vec<Option<i64>>,
    /// Set when some non-polynomial row vanished through its truncation
    /// order, so the verdict only holds if it keeps vanishing beyond it.
    pub decided_through: Option<usize>,
}

impl SingularityClass {
    pub fn is_regular(&self) -> bool {
        self.kind != PointKind::IrregularSingular
    }
}

/// Classifies the origin of the equation's chart.
///
/// Pole orders are measured after cancelling the leading row's valuation,
/// so an equation multiplied through by `x^k` classifies the same way.
pub fn classify_point(e: &Ode) -> Result<SingularityClass> {
    let n = e.order();
    let v = e.row(n).valuation().ok_or(Error::LeadingZero)? as i64;
    let mut pole_orders = Vec::with_capacity(n);
    let mut undecided = false;
    let mut kind = if v == 0 { PointKind::Ordinary } else { PointKind::RegularSingular };
    let mut any_pole = false;
    for k in 0..n {
        let order = match e.row(k).valuation() {
            Some(vk) => Some(v - vk as i64),
            None => {
                if !e.is_polynomial() {
                    undecided = true;
                }
                None
            }
        };
        if let Some(p) = order {
            if p > (n - k) as i64 {
                kind = PointKind::IrregularSingular;
            }
            any_pole |= p > 0;
        }
        pole_orders.push(order);
    }
    if kind != PointKind::IrregularSingular {
        kind = if any_pole { PointKind::RegularSingular } else { PointKind::Ordinary };
    }
    Ok(SingularityClass { kind, pole_orders, decided_through: undecided.then(|| e.trunc()) })
}

/// Classifies the point at infinity of a polynomial equation.
pub fn classify_infinity(e: &Ode) -> Result<SingularityClass> {
    classify_point(&transform_to_infinity(e)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EulerReport {
    /// Every row `A_k` is a constant multiple of `x^k`.
    pub is_euler: bool,
    /// Both the origin and infinity are ordinary or regular singular.
    pub both_ends_regular: bool,
    /// `k` when the rows fit the window with leading row `A_1 x + ... + A_{k+n} x^{k+n}`,
    /// `A_1, A_{k+n} ≠ 0`, and row `n - j` of degree at most `k + n - j`.
    pub pattern_k: Option<usize>,
}

/// Euler detection and the two-ended regularity characterization for a
/// polynomial equation at the origin.
pub fn euler_characterize(e: &Ode) -> Result<EulerReport> {
    let n = e.order();
    let rows: Vec<_> = (0..=n).map(|k| e.row_poly(k)).collect::<Result<_>>()?;
    let is_euler = rows.iter().enumerate().all(|(k, r)| r.iter().enumerate().all(|(i, c)| i == k || c.is_zero()))
        && !rows[n].get(n).is_none_or(|c| c.is_zero());
    let lead = &rows[n];
    let pattern_k = match poly::degree(lead) {
        Some(d) if d >= n && lead.first().is_none_or(|c| c.is_zero()) && lead.get(1).is_some_and(|c| !c.is_zero()) => {
            let k = d - n;
            let fits = (1..=n).all(|j| poly::degree(&rows[n - j]).is_none_or(|dj| dj <= k + n - j));
            fits.then_some(k)
        }
        _ => None,
    };
    let at_origin = classify_point(e)?;
    let at_infinity = classify_infinity(e)?;
    Ok(EulerReport { is_euler, both_ends_regular: at_origin.is_regular() && at_infinity.is_regular(), pattern_k })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::Scalar;

    fn rows(r: &[&[i64]]) -> Ode {
        Ode::from_int_rows(r, 8).unwrap()
    }

    #[test]
    fn irregular_examples() {
        // x^2 y'' - y' - y/2
        let e = Ode::from_polynomials(
            vec![vec![Scalar::zero(), Scalar::zero(), Scalar::one()], vec![Scalar::from_i64(-1)], vec![Scalar::ratio(-1, 2)]],
            8,
        )
        .unwrap();
        assert_eq!(classify_point(&e).unwrap().kind, PointKind::IrregularSingular);
        let e = Ode::from_polynomials(
            vec![
                vec![Scalar::zero(), Scalar::zero(), Scalar::zero(), Scalar::one()],
                vec![Scalar::zero(), Scalar::zero(), Scalar::from_i64(-1)],
                vec![Scalar::from_i64(-1)],
                vec![Scalar::ratio(-1, 2)],
            ],
            8,
        )
        .unwrap();
        assert_eq!(classify_point(&e).unwrap().kind, PointKind::IrregularSingular);
        assert_eq!(classify_infinity(&e).unwrap().kind, PointKind::RegularSingular);
    }

    #[test]
    fn regular_and_ordinary() {
        let e = rows(&[&[0, 0, 0, 1], &[0, 0, 1], &[0, 1], &[0, 0, 0, 1]]);
        let c = classify_point(&e).unwrap();
        assert_eq!(c.kind, PointKind::RegularSingular);
        assert_eq!(c.pole_orders, vec![Some(0), Some(2), Some(1)]);
        let e = rows(&[&[1], &[0], &[1]]);
        assert_eq!(classify_point(&e).unwrap().kind, PointKind::Ordinary);
        assert_eq!(classify_infinity(&e).unwrap().kind, PointKind::IrregularSingular);
    }

    #[test]
    fn euler_flags() {
        let e = rows(&[&[0, 0, 1], &[0, 3], &[1]]);
        let r = euler_characterize(&e).unwrap();
        assert!(r.is_euler && r.both_ends_regular);
        assert_eq!(r.pattern_k, None);
        // (z + 2z^2) u'' + (1 + z) u' + 3u
        let r = euler_characterize(&rows(&[&[0, 1, 2], &[1, 1], &[3]])).unwrap();
        assert!(!r.is_euler && r.both_ends_regular);
        assert_eq!(r.pattern_k, Some(0));
        let r = euler_characterize(&rows(&[&[0, 0, 0, 1], &[0, -1], &[1]])).unwrap();
        assert!(!r.both_ends_regular);
    }

    #[test]
    fn undecided_rows_are_flagged() {
        use crate::ode::Chart;
        use crate::series::Series;
        let e = Ode::new(
            vec![Series::from_ints(&[0, 0, 1], 4), Series::zero(4), Series::from_ints(&[1], 4)],
            Chart::Finite(Scalar::zero()),
            None,
            false,
        )
        .unwrap();
        assert_eq!(classify_point(&e).unwrap().decided_through, Some(4));
    }
}
