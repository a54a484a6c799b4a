//! Wronskians: the closed form obtained from the first-order equation
//! `a w' + b w = 0` of a second-order operator, and the determinant of a
//! computed fundamental system.

use crate::error::{Error, Result};
use crate::ode::Ode;
use crate::series::{GeneralizedSeries, Scalar, Series};

use super::FundamentalSystem;

/// `W(x) = K · x^exponent · exp(Σ_k principal_part[k-1] · x^{-k}) · body(x)`.
///
/// An empty principal part means `W` is a generalized series; otherwise the
/// exponential factor has an essential singularity at the origin and `W` has
/// neither an analytic nor a formal power-series expansion there.
#[derive(Clone, Debug, PartialEq)]
pub struct OdeWronskian {
    pub exponent: Scalar,
    pub principal_part: Vec<Scalar>,
    pub body: Series,
}

impl OdeWronskian {
    pub fn is_essential(&self) -> bool {
        !self.principal_part.is_empty()
    }

    /// The wronskian as a generalized series, unless it is essential.
    pub fn to_generalized(&self) -> Option<GeneralizedSeries> {
        (!self.is_essential()).then(|| GeneralizedSeries::term(self.exponent.clone(), 0, self.body.clone()))
    }
}

/// Solves `a w' + b w = 0` for the second-order equation `a y'' + b y' + c y = 0`
/// with `K = 1`.
///
/// The Laurent expansion of `b/a` at the origin decides the shape: its
/// residue `A₁` contributes `x^{-A₁}`, higher poles give the essential
/// factor, and the analytic remainder is exponentiated as a power series.
pub fn wronskian_ode_solution(e: &Ode) -> Result<OdeWronskian> {
    if e.order() != 2 {
        return Err(Error::Precondition(format!("wronskian formula needs order 2, got {}", e.order())));
    }
    abel(e.row(2), e.row(1), e.is_exact())
}

/// `exp(-∫ b/a)` for the Laurent quotient of two series, in the shape of
/// [`OdeWronskian`].
pub fn abel(a: &Series, b: &Series, exact: bool) -> Result<OdeWronskian> {
    let va = a.valuation().ok_or(Error::LeadingZero)?;
    let trunc = a.trunc() - va;
    let Some(vb) = b.valuation() else {
        let one = if exact { Scalar::one() } else { Scalar::float(1.0, 0.0) };
        return Ok(OdeWronskian { exponent: Scalar::zero(), principal_part: Vec::new(), body: Series::constant(one, trunc) });
    };
    let a_hat = a.shift_down(va).expect("valuation within series");
    let b_hat = b.shift_down(vb).expect("valuation within series");
    // b/a = x^lowest · ratio
    let ratio = b_hat.truncate(trunc.min(b_hat.trunc())).divide(&a_hat)?;
    let lowest = vb as i64 - va as i64;
    let laurent = |j: i64| -> Scalar {
        let k = j - lowest;
        if k < 0 {
            Scalar::zero()
        } else {
            ratio.coeff(k as usize)
        }
    };

    let residue = laurent(-1);
    let principal_part: Vec<Scalar> = if lowest <= -2 {
        let deepest = (-lowest - 1) as usize;
        let mut part: Vec<Scalar> =
            (1..=deepest).map(|k| &laurent(-(k as i64) - 1) / &Scalar::from_i64(k as i64)).collect();
        while part.last().is_some_and(|c| c.is_zero()) {
            part.pop();
        }
        part
    } else {
        Vec::new()
    };

    let analytic_trunc = (ratio.trunc() as i64 + lowest).max(0) as usize;
    let analytic = Series::from_coeffs((0..=analytic_trunc as i64).map(laurent).collect(), analytic_trunc);
    let body = (-&analytic.integral()).exp()?;
    Ok(OdeWronskian { exponent: -residue, principal_part, body })
}

/// Determinant of the matrix `M[i][j] = φ_j^{(i)}` in generalized-series
/// arithmetic.
pub fn wronskian_of_system(fs: &FundamentalSystem) -> GeneralizedSeries {
    wronskian_of(&fs.solutions)
}

/// Wronskian of an arbitrary list of generalized series.
pub fn wronskian_of(functions: &[GeneralizedSeries]) -> GeneralizedSeries {
    let n = functions.len();
    let mut matrix: Vec<Vec<GeneralizedSeries>> = vec![functions.to_vec()];
    for i in 1..n {
        let next = matrix[i - 1].iter().map(GeneralizedSeries::differentiate).collect();
        matrix.push(next);
    }
    determinant(&matrix)
}

pub(crate) fn determinant(m: &[Vec<GeneralizedSeries>]) -> GeneralizedSeries {
    match m.len() {
        0 => GeneralizedSeries::from_series(Series::one(0)),
        1 => m[0][0].clone(),
        n => {
            let mut acc = GeneralizedSeries::zero();
            for col in 0..n {
                let minor: Vec<Vec<GeneralizedSeries>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|(j, _)| *j != col).map(|(_, g)| g.clone()).collect())
                    .collect();
                let cofactor = &m[0][col] * &determinant(&minor);
                acc = if col % 2 == 0 { &acc + &cofactor } else { &acc - &cofactor };
            }
            acc
        }
    }
}
