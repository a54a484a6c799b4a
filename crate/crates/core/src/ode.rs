//! Linear ODEs of order two and three and the coordinate changes used on
//! them: translation, inversion `x = 1/t`, Moebius pullback and the
//! normalization `x^n y^(n) + x^{n-1} a(x) y^(n-1) + ...`.

use crate::error::{Error, Result};
use crate::series::{poly, Scalar, Series};

/// Where the local coordinate of an equation is centred.
#[derive(Clone, Debug, PartialEq)]
pub enum Chart {
    Finite(Scalar),
    Infinity,
}

/// `A_n(x) y^(n) + ... + A_1(x) y' + A_0(x) y = f(x)`.
///
/// Rows are stored by derivative order, so `row(k)` multiplies `y^(k)`.
/// Polynomial equations remember that their omitted coefficients are zero,
/// which lets transforms pad them without losing precision.
#[derive(Clone, Debug, PartialEq)]
pub struct Ode {
    rows: Vec<Series>,
    chart: Chart,
    rhs: Option<Series>,
    polynomial: bool,
}

impl Ode {
    /// Builds an equation from rows listed highest derivative first.
    pub fn new(rows_high_first: Vec<Series>, chart: Chart, rhs: Option<Series>, polynomial: bool) -> Result<Self> {
        let order = rows_high_first.len().saturating_sub(1);
        if !(2..=3).contains(&order) {
            return Err(Error::validation("coeffs", format!("expected 3 or 4 rows, got {}", rows_high_first.len())));
        }
        let mut rows = rows_high_first;
        rows.reverse();
        if rows[order].is_zero() {
            return Err(Error::LeadingZero);
        }
        Ok(Ode { rows, chart, rhs, polynomial })
    }

    /// Polynomial rows (ascending coefficients, highest derivative first)
    /// at the origin. The truncation order is at least `trunc` and large
    /// enough to hold every coefficient.
    pub fn from_polynomials(rows_high_first: Vec<Vec<Scalar>>, trunc: usize) -> Result<Self> {
        let deg = rows_high_first.iter().map(|r| r.len().saturating_sub(1)).max().unwrap_or(0);
        let t = trunc.max(deg);
        let rows = rows_high_first.into_iter().map(|r| Series::from_coeffs(r, t)).collect();
        Ode::new(rows, Chart::Finite(Scalar::zero()), None, true)
    }

    /// Integer polynomial rows, a shorthand for tests and examples.
    pub fn from_int_rows(rows_high_first: &[&[i64]], trunc: usize) -> Result<Self> {
        Ode::from_polynomials(
            rows_high_first.iter().map(|r| r.iter().map(|&n| Scalar::from_i64(n)).collect()).collect(),
            trunc,
        )
    }

    pub fn with_rhs(mut self, rhs: Series) -> Self {
        self.rhs = Some(rhs);
        self
    }

    pub fn without_rhs(mut self) -> Self {
        self.rhs = None;
        self
    }

    pub fn with_chart(mut self, chart: Chart) -> Self {
        self.chart = chart;
        self
    }

    pub fn order(&self) -> usize {
        self.rows.len() - 1
    }

    /// Coefficient of `y^(k)`.
    pub fn row(&self, k: usize) -> &Series {
        &self.rows[k]
    }

    pub fn rows_high_first(&self) -> Vec<Series> {
        self.rows.iter().rev().cloned().collect()
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn rhs(&self) -> Option<&Series> {
        self.rhs.as_ref()
    }

    pub fn is_polynomial(&self) -> bool {
        self.polynomial
    }

    pub fn trunc(&self) -> usize {
        self.rows.iter().map(Series::trunc).min().unwrap_or(0)
    }

    pub fn is_exact(&self) -> bool {
        self.rows.iter().all(Series::is_exact) && self.rhs.as_ref().is_none_or(Series::is_exact)
    }

    pub fn to_float(&self) -> Ode {
        Ode {
            rows: self.rows.iter().map(Series::to_float).collect(),
            chart: self.chart.clone(),
            rhs: self.rhs.as_ref().map(Series::to_float),
            polynomial: self.polynomial,
        }
    }

    /// Row `k` at truncation `trunc`: padded with zeros for polynomial
    /// equations, cut otherwise.
    pub fn row_at(&self, k: usize, trunc: usize) -> Series {
        let r = &self.rows[k];
        if self.polynomial {
            r.padded(trunc)
        } else {
            r.truncate(trunc.min(r.trunc()))
        }
    }

    /// Right-hand side at truncation `trunc`, following the same rule as [`Ode::row_at`].
    pub fn rhs_at(&self, trunc: usize) -> Option<Series> {
        self.rhs.as_ref().map(|f| if self.polynomial { f.padded(trunc) } else { f.truncate(trunc.min(f.trunc())) })
    }

    /// Ascending polynomial coefficients of row `k`; requires a polynomial equation.
    pub fn row_poly(&self, k: usize) -> Result<Vec<Scalar>> {
        if !self.polynomial {
            return Err(Error::NonPolynomial);
        }
        Ok(poly::trim(self.rows[k].coeffs()))
    }

    fn rhs_poly(&self) -> Option<Vec<Scalar>> {
        self.rhs.as_ref().map(|f| poly::trim(f.coeffs()))
    }
}

/// Re-centres the equation at `x0`: returns the equation for `t = x - x0`.
pub fn shift_to_origin(e: &Ode, x0: &Scalar) -> Ode {
    let chart = match &e.chart {
        Chart::Finite(c) => Chart::Finite(c + x0),
        Chart::Infinity => Chart::Infinity,
    };
    Ode {
        rows: e.rows.iter().map(|r| r.taylor_shift(x0)).collect(),
        chart,
        rhs: e.rhs.as_ref().map(|f| f.taylor_shift(x0)),
        polynomial: e.polynomial,
    }
}

/// Polynomials `S_{k,j}(t)` with `d^k/dx^k = Σ_j S_{k,j}(t) d^j/dt^j` under `x = 1/t`.
fn inversion_stack(order: usize) -> Vec<Vec<Vec<Scalar>>> {
    let mut stack: Vec<Vec<Vec<Scalar>>> = vec![vec![vec![Scalar::one()]]];
    let minus_t2 = vec![Scalar::zero(), Scalar::zero(), Scalar::from_i64(-1)];
    for k in 0..order {
        let prev = &stack[k];
        let mut next = vec![Vec::new(); k + 2];
        for (j, s) in prev.iter().enumerate() {
            next[j] = poly::add(&next[j], &poly::mul(&minus_t2, &poly::derivative(s)));
            next[j + 1] = poly::add(&next[j + 1], &poly::mul(&minus_t2, s));
        }
        stack.push(next);
    }
    stack
}

/// Substitutes `x = 1/t` into a polynomial equation.
///
/// The rows become Laurent polynomials in `t`; the result is multiplied by
/// the power of `t` that makes the smallest valuation among all rows zero,
/// and by `(-1)^n`, so that applying the transform twice returns the
/// original rows.
pub fn transform_to_infinity(e: &Ode) -> Result<Ode> {
    if !e.polynomial {
        return Err(Error::NonPolynomial);
    }
    let n = e.order();
    let stack = inversion_stack(n);
    let rows: Vec<Vec<Scalar>> = (0..=n).map(|k| e.row_poly(k)).collect::<Result<_>>()?;
    let rhs = e.rhs_poly();
    let d = rows
        .iter()
        .chain(rhs.iter())
        .filter_map(|r| poly::degree(r))
        .max()
        .unwrap_or(0);
    // t^d A_k(1/t) is the coefficient-reversed polynomial padded to degree d.
    let reversed = |p: &[Scalar]| -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); d + 1];
        for (i, c) in p.iter().enumerate() {
            out[d - i] = c.clone();
        }
        poly::trim(&out)
    };
    let mut new_rows: Vec<Vec<Scalar>> = vec![Vec::new(); n + 1];
    for (k, row) in rows.iter().enumerate() {
        let rk = reversed(row);
        for (j, s) in stack[k].iter().enumerate() {
            new_rows[j] = poly::add(&new_rows[j], &poly::mul(&rk, s));
        }
    }
    let new_rhs = rhs.as_ref().map(|f| reversed(f));
    let valuation = |p: &Vec<Scalar>| p.iter().position(|c| !c.is_zero());
    let v = new_rows
        .iter()
        .chain(new_rhs.iter())
        .filter_map(valuation)
        .min()
        .unwrap_or(0);
    let sign = if n % 2 == 1 { Scalar::from_i64(-1) } else { Scalar::one() };
    let finish = |p: &Vec<Scalar>| -> Vec<Scalar> {
        let shifted: Vec<Scalar> = p.iter().skip(v).cloned().collect();
        poly::scale(&shifted, &sign)
    };
    let new_rows: Vec<Vec<Scalar>> = new_rows.iter().map(finish).collect();
    let new_rhs = new_rhs.as_ref().map(finish);
    let deg = new_rows
        .iter()
        .chain(new_rhs.iter())
        .filter_map(|r| poly::degree(r))
        .max()
        .unwrap_or(0);
    let trunc = e.trunc().max(deg);
    let chart = match e.chart {
        Chart::Infinity => Chart::Finite(Scalar::zero()),
        Chart::Finite(_) => Chart::Infinity,
    };
    let rows_high_first = new_rows.into_iter().rev().map(|r| Series::from_coeffs(r, trunc)).collect();
    let out = Ode::new(rows_high_first, chart, new_rhs.map(|f| Series::from_coeffs(f, trunc)), true)?;
    Ok(out)
}

/// Pulls a second-order polynomial equation back along
/// `z = (αw + β)/(γw + δ)`.
///
/// Denominators are cleared with the smallest power of `γw + δ` that makes
/// every row polynomial; when `γ = 0` no power is needed.
pub fn moebius_pullback(e: &Ode, map: [Scalar; 4]) -> Result<Ode> {
    if e.order() != 2 {
        return Err(Error::Precondition("Moebius pullback is defined for second-order equations".into()));
    }
    if !e.polynomial {
        return Err(Error::NonPolynomial);
    }
    let [alpha, beta, gamma, delta] = map;
    let det = &(&alpha * &delta) - &(&beta * &gamma);
    if det.is_zero() || det.abs() <= 1e-14 {
        return Err(Error::DegenerateMap);
    }
    let lin = poly::trim(&[delta.clone(), gamma.clone()]);
    let num = poly::trim(&[beta.clone(), alpha.clone()]);
    let affine = gamma.is_zero();
    // p(z) (γw+δ)^deg p, a polynomial in w.
    let cleared = |p: &[Scalar]| -> (Vec<Scalar>, usize) {
        let dp = poly::degree(p).unwrap_or(0);
        let mut acc = Vec::new();
        for (i, c) in p.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let term = poly::mul(&poly::pow(&num, i), &poly::pow(&lin, dp - i));
            acc = poly::add(&acc, &poly::scale(&term, c));
        }
        (acc, dp)
    };
    let (a, da) = cleared(&e.row_poly(2)?);
    let (b, db) = cleared(&e.row_poly(1)?);
    let (c, dc) = cleared(&e.row_poly(0)?);
    // Each summand is (cleared poly) * (γw+δ)^power with the powers below.
    let mut pieces: Vec<(usize, Vec<Scalar>, i64)> = vec![(2, a.clone(), 4 - da as i64)];
    if !affine {
        pieces.push((1, poly::scale(&a, &(&Scalar::from_i64(2) * &gamma)), 3 - da as i64));
    }
    if !b.is_empty() {
        pieces.push((1, poly::scale(&b, &det), 2 - db as i64));
    }
    if !c.is_empty() {
        pieces.push((0, poly::scale(&c, &(&det * &det)), -(dc as i64)));
    }
    let clear = if affine { 0 } else { pieces.iter().map(|(_, _, p)| -p).max().unwrap_or(0).max(0) };
    let mut rows: Vec<Vec<Scalar>> = vec![Vec::new(); 3];
    for (k, p, power) in pieces {
        let total = power + clear;
        let factor = if affine {
            vec![delta.powi(total)]
        } else {
            poly::pow(&lin, total as usize)
        };
        rows[k] = poly::add(&rows[k], &poly::mul(&p, &factor));
    }
    let deg = rows.iter().filter_map(|r| poly::degree(r)).max().unwrap_or(0);
    let trunc = e.trunc().max(deg);
    Ode::new(
        rows.into_iter().rev().map(|r| Series::from_coeffs(r, trunc)).collect(),
        e.chart.clone(),
        None,
        true,
    )
}

/// `x^n y^(n) + Σ_{k<n} x^k p_k(x) y^(k) = 0` with analytic `p_k`.
///
/// For order three `a = p_2`, `b = p_1`, `c = p_0`; for order two
/// `b = p_1`, `c = p_0`.
///
/// A form may instead keep an analytic unit `u` with `u(0) = 1` in front of
/// the highest derivative, `x^n u(x) y^(n) + ...`. The indicial polynomial is
/// unchanged, and the recurrence avoids the large cancellations that dividing
/// by `u` causes when `u` has a zero close to the origin.
#[derive(Clone, Debug, PartialEq)]
pub struct FrobeniusForm {
    p: Vec<Series>,
    lead: Series,
}

impl FrobeniusForm {
    /// From `p_0, ..., p_{n-1}`; all are cut to their common truncation order.
    pub fn new(p: Vec<Series>) -> Result<Self> {
        let t = p.iter().map(Series::trunc).min().unwrap_or(0);
        let one = if p.iter().all(Series::is_exact) { Scalar::one() } else { Scalar::float(1.0, 0.0) };
        FrobeniusForm::with_lead(p, Series::constant(one, t))
    }

    /// `x^n lead(x) y^(n) + Σ x^k p_k(x) y^(k) = 0`, scaled so that the
    /// constant term of `lead` is one.
    pub fn with_lead(p: Vec<Series>, lead: Series) -> Result<Self> {
        if !(2..=3).contains(&p.len()) {
            return Err(Error::validation("coeffs", "a Frobenius form has 2 or 3 coefficient series"));
        }
        let u0 = lead.coeff(0);
        if u0.is_zero() {
            return Err(Error::LeadingZero);
        }
        let t = p.iter().map(Series::trunc).min().unwrap_or(0).min(lead.trunc());
        let inv = u0.inv();
        let p = p.into_iter().map(|s| s.truncate(t).scale(&inv)).collect();
        Ok(FrobeniusForm { p, lead: lead.truncate(t).scale(&inv) })
    }

    /// Third order from `a, b, c`.
    pub fn order3(a: Series, b: Series, c: Series) -> Self {
        FrobeniusForm::new(vec![c, b, a]).expect("three series")
    }

    /// Second order from `b, c`.
    pub fn order2(b: Series, c: Series) -> Self {
        FrobeniusForm::new(vec![c, b]).expect("two series")
    }

    pub fn order(&self) -> usize {
        self.p.len()
    }

    /// Coefficient series `p_k` multiplying `x^k y^(k)`.
    pub fn p(&self, k: usize) -> &Series {
        &self.p[k]
    }

    /// The unit multiplying `x^n y^(n)`; identically one for a normalized form.
    pub fn lead(&self) -> &Series {
        &self.lead
    }

    /// Coefficient of `x^j` in the series multiplying `x^k y^(k)`, for
    /// `k = 0..=n`, where row `n` is the leading unit.
    pub fn row_coeff(&self, k: usize, j: usize) -> Scalar {
        if k == self.order() {
            self.lead.coeff(j)
        } else {
            self.p[k].coeff(j)
        }
    }

    /// Whether the leading unit is identically one.
    pub fn is_normalized(&self) -> bool {
        self.lead.coeffs().iter().skip(1).all(Scalar::is_zero)
    }

    pub fn a(&self) -> Option<&Series> {
        (self.order() == 3).then(|| &self.p[2])
    }

    pub fn b(&self) -> &Series {
        &self.p[1]
    }

    pub fn c(&self) -> &Series {
        &self.p[0]
    }

    pub fn trunc(&self) -> usize {
        self.p[0].trunc()
    }

    pub fn is_exact(&self) -> bool {
        self.p.iter().all(Series::is_exact) && self.lead.is_exact()
    }

    pub fn to_float(&self) -> FrobeniusForm {
        FrobeniusForm { p: self.p.iter().map(Series::to_float).collect(), lead: self.lead.to_float() }
    }

    pub fn truncate(&self, trunc: usize) -> FrobeniusForm {
        FrobeniusForm { p: self.p.iter().map(|s| s.truncate(trunc)).collect(), lead: self.lead.truncate(trunc) }
    }

    /// The same equation divided by its leading unit.
    pub fn normalized(&self) -> Result<FrobeniusForm> {
        if self.is_normalized() {
            return Ok(self.clone());
        }
        let inv = self.lead.inverse()?;
        FrobeniusForm::new(self.p.iter().map(|s| s * &inv).collect())
    }

    /// True when every coefficient, the leading unit included, is constant
    /// through the truncation order.
    pub fn is_euler(&self) -> bool {
        self.is_normalized() && self.p.iter().all(|s| s.coeffs().iter().skip(1).all(Scalar::is_zero))
    }

    /// The equation `x^n u y^(n) + Σ x^k p_k y^(k) = 0` as an [`Ode`] at the origin.
    pub fn to_ode(&self) -> Ode {
        let n = self.order();
        let mut rows = vec![self.lead.shift_up(n)];
        for k in (0..n).rev() {
            rows.push(self.p[k].shift_up(k));
        }
        Ode::new(rows, Chart::Finite(Scalar::zero()), None, false).expect("valid order")
    }
}

/// Divides through so the leading coefficient becomes exactly `x^n`.
///
/// Fails at an irregular singular point. Polynomial equations are padded
/// before dividing so the result is known through `trunc`; for general
/// series the truncation order drops by the valuation of the leading row.
pub fn to_frobenius_form(e: &Ode, trunc: usize) -> Result<FrobeniusForm> {
    to_frobenius_rows(e, trunc)?.normalized()
}

/// The Frobenius form that keeps `A_n / x^v` as its leading unit instead of
/// dividing the other rows by it.
pub fn to_frobenius_rows(e: &Ode, trunc: usize) -> Result<FrobeniusForm> {
    let n = e.order();
    let lead = e.row(n);
    let v = lead.valuation().ok_or(Error::LeadingZero)?;
    for k in 0..n {
        if let Some(vk) = e.row(k).valuation() {
            if (vk as i64) < v as i64 - (n - k) as i64 {
                return Err(Error::IrregularPoint(format!(
                    "row {k} has a pole of order {} after normalization",
                    v as i64 - vk as i64
                )));
            }
        }
    }
    let work = if e.polynomial { trunc + v + n } else { e.trunc() };
    let unit = e.row_at(n, work).shift_down(v).ok_or(Error::LeadingZero)?;
    let mut p = Vec::with_capacity(n);
    for k in 0..n {
        let row = e.row_at(k, work);
        let shift = (n - k) as i64 - v as i64;
        let moved = if shift >= 0 {
            row.shift_up(shift as usize)
        } else {
            row.shift_down((-shift) as usize).unwrap_or_else(|| Series::zero(0))
        };
        p.push(moved);
    }
    let t = p.iter().map(Series::trunc).min().unwrap_or(0).min(unit.trunc()).min(trunc);
    FrobeniusForm::with_lead(p.into_iter().map(|s| s.truncate(t)).collect(), unit.truncate(t))
}
