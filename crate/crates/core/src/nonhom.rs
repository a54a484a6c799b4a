//! Inhomogeneous equations and the constructions that build new solutions
//! from known ones: variation of parameters, reduction of order and the
//! third solution from two.

use crate::error::{Error, Result};
use crate::frobenius::{abel, determinant, residual, FundamentalSystem, RESIDUAL_TOL};
use crate::ode::Ode;
use crate::series::generalized::class_offset;
use crate::series::{GeneralizedSeries, Scalar, Series};

/// A particular solution `y_p = Σ C_i φ_i` with the integrands `C_i'`.
#[derive(Clone, Debug, PartialEq)]
pub struct ParticularSolution {
    pub y_p: GeneralizedSeries,
    pub c_primes: Vec<GeneralizedSeries>,
}

/// Correction passes applied to a floating particular solution.
const MAX_REFINEMENTS: usize = 4;

/// Particular solution of `L(y) = f` by variation of parameters.
///
/// The `C_i'` solve the Cramer system whose first `n - 1` rows force the
/// lower derivatives of `Σ C_i' φ_i` to vanish and whose last row equals
/// `f / A_n`. Each `C_i` is the series antiderivative with zero constant.
pub fn variation_of_parameters(e: &Ode, fs: &FundamentalSystem) -> Result<ParticularSolution> {
    let f = e.rhs().ok_or_else(|| Error::Precondition("equation has no right-hand side".into()))?;
    let n = e.order();
    if fs.solutions.len() != n {
        return Err(Error::Precondition(format!("need {n} solutions, got {}", fs.solutions.len())));
    }
    let mut derivatives: Vec<Vec<GeneralizedSeries>> = vec![fs.solutions.clone()];
    for i in 1..n {
        let next = derivatives[i - 1].iter().map(GeneralizedSeries::differentiate).collect();
        derivatives.push(next);
    }
    // Column j replaced by the last unit vector: signed minor of row n-1.
    let cofactors: Vec<GeneralizedSeries> = (0..n)
        .map(|j| {
            let minor: Vec<Vec<GeneralizedSeries>> = derivatives[..n - 1]
                .iter()
                .map(|row| row.iter().enumerate().filter(|(i, _)| *i != j).map(|(_, g)| g.clone()).collect())
                .collect();
            let m = determinant(&minor);
            if (n - 1 + j).is_multiple_of(2) { m } else { -&m }
        })
        .collect();
    let w = derivatives[n - 1]
        .iter()
        .zip(&cofactors)
        .fold(GeneralizedSeries::zero(), |acc, (d, c)| &acc + &(d * c));
    if w.leading().is_none() {
        return Err(Error::DependentSystem);
    }
    let w_inv = w.inverse().map_err(|_| Error::DependentSystem)?;
    // Polynomial data is known to every order, so pad it past the
    // valuation it loses when divided out.
    let (lead, f) = if e.is_polynomial() {
        let reach = fs.trunc + e.row(n).valuation().unwrap_or(0);
        (e.row(n).padded(reach), f.padded(reach))
    } else {
        (e.row(n).clone(), f.clone())
    };
    let lead_inv = as_generalized(&lead).inverse()?;
    let solve = |forcing: &GeneralizedSeries| -> (GeneralizedSeries, Vec<GeneralizedSeries>) {
        let scaled = &(forcing * &lead_inv) * &w_inv;
        let mut c_primes = Vec::with_capacity(n);
        let mut y_p = GeneralizedSeries::zero();
        for (phi, cofactor) in fs.solutions.iter().zip(&cofactors) {
            let c_prime = cofactor * &scaled;
            y_p = &y_p + &(&c_prime.integrate() * phi);
            c_primes.push(c_prime);
        }
        (y_p, c_primes)
    };
    let (mut y_p, mut c_primes) = solve(&as_generalized(&f));
    if !y_p.is_exact() {
        // The sum Σ C_i φ_i can cancel heavily when the C_i' grow fast.
        // The map from forcing to y_p is linear, so solving again with the
        // defect as forcing removes most of the rounding each pass.
        let mut defect = residual(e, &y_p)?;
        for _ in 0..MAX_REFINEMENTS {
            if defect.max_relative <= RESIDUAL_TOL {
                break;
            }
            let (dy, dc) = solve(&-&defect.series);
            let candidate = &y_p + &dy;
            let next = residual(e, &candidate)?;
            if next.max_relative >= defect.max_relative {
                break;
            }
            y_p = candidate;
            c_primes = c_primes.iter().zip(&dc).map(|(a, b)| a + b).collect();
            defect = next;
        }
    }
    Ok(ParticularSolution { y_p, c_primes })
}

/// Substituting `ψ = μ φ` into a third-order equation with known solution
/// `φ` leaves a second-order equation for `v = μ'`:
/// `A₃φ v'' + (3A₃φ' + A₂φ) v' + (3A₃φ'' + 2A₂φ' + A₁φ) v = 0`.
///
/// The coefficients are divided by the common power of `x` so they become
/// ordinary power series; this needs them to be log-free and in one class.
pub fn reduce_order(e: &Ode, phi: &GeneralizedSeries) -> Result<Ode> {
    if e.order() != 3 {
        return Err(Error::Precondition(format!("reduction of order needs order 3, got {}", e.order())));
    }
    let homogeneous = e.clone().without_rhs();
    check_solution(&homogeneous, phi, "phi")?;
    let d1 = phi.differentiate();
    let d2 = d1.differentiate();
    let a3 = as_generalized(e.row(3));
    let a2 = as_generalized(e.row(2));
    let a1 = as_generalized(e.row(1));
    let three = Scalar::from_i64(3);
    let lead = &a3 * phi;
    let mid = &(&a3 * &d1).scale(&three) + &(&a2 * phi);
    let low = &(&(&a3 * &d2).scale(&three) + &(&a2 * &d1).scale(&Scalar::from_i64(2))) + &(&a1 * phi);
    let rows = common_power_rows(&[lead, mid, low], e.is_exact())?;
    Ode::new(rows, e.chart().clone(), None, false)
}

/// Third solution of a homogeneous third-order equation from two known
/// ones: `y₃ = y₂ ∫ y₁W/W₁₂² − y₁ ∫ y₂W/W₁₂²` with `W₁₂ = y₁y₂' − y₂y₁'`
/// and `W = exp(−∫ A₂/A₃)`.
pub fn third_from_two(e: &Ode, y1: &GeneralizedSeries, y2: &GeneralizedSeries) -> Result<GeneralizedSeries> {
    if e.order() != 3 {
        return Err(Error::Precondition(format!("needs order 3, got {}", e.order())));
    }
    let homogeneous = e.clone().without_rhs();
    check_solution(&homogeneous, y1, "y1")?;
    check_solution(&homogeneous, y2, "y2")?;
    let full = abel(e.row(3), e.row(2), e.is_exact())?;
    let w = full
        .to_generalized()
        .ok_or_else(|| Error::Precondition("exp(-∫A₂/A₃) has an essential singularity".into()))?;
    let w12 = pair_wronskian(y1, y2);
    if w12.leading().is_none() {
        return Err(Error::DependentSystem);
    }
    let inv = (&w12 * &w12).inverse().map_err(|_| Error::DependentSystem)?;
    let kernel = &w * &inv;
    let first = &(y1 * &kernel).integrate() * y2;
    let second = &(y2 * &kernel).integrate() * y1;
    Ok(&first - &second)
}

/// `W(y₁, y₂) = y₁y₂' − y₂y₁'`.
pub fn pair_wronskian(y1: &GeneralizedSeries, y2: &GeneralizedSeries) -> GeneralizedSeries {
    &(y1 * &y2.differentiate()) - &(y2 * &y1.differentiate())
}

fn as_generalized(s: &Series) -> GeneralizedSeries {
    GeneralizedSeries::from_series(s.clone())
}

fn check_solution(e: &Ode, g: &GeneralizedSeries, name: &str) -> Result<()> {
    let r = residual(e, g)?;
    if r.valuation < r.reliable_through {
        return Err(Error::NotASolution(format!(
            "{name} leaves a residual at offset {} (reliable through {}, relative size {:e})",
            r.valuation, r.reliable_through, r.max_relative
        )));
    }
    Ok(())
}

/// Divides the coefficients by the lowest common power of `x`, returning
/// them as power series of one truncation order.
fn common_power_rows(coeffs: &[GeneralizedSeries], exact: bool) -> Result<Vec<Series>> {
    let cleaned: Vec<GeneralizedSeries> =
        coeffs.iter().map(|g| if exact { g.clone() } else { g.prune(RESIDUAL_TOL) }).collect();
    let mut base: Option<Scalar> = None;
    for g in &cleaned {
        for t in g.terms() {
            if t.log_power != 0 {
                return Err(Error::Precondition("reduced coefficients carry logarithms".into()));
            }
            base = Some(match base {
                None => t.exponent.clone(),
                Some(b) => match class_offset(&t.exponent, &b) {
                    Some(k) if k < 0 => t.exponent.clone(),
                    Some(_) => b,
                    None => return Err(Error::Precondition("reduced coefficients mix exponent classes".into())),
                },
            });
        }
    }
    let base = base.ok_or(Error::LeadingZero)?;
    let mut rows = Vec::with_capacity(cleaned.len());
    for g in &cleaned {
        rows.push(match g.terms().first() {
            None => None,
            Some(t) => {
                let k = class_offset(&t.exponent, &base).expect("same class") as usize;
                Some(t.body.shift_up(k))
            }
        });
    }
    let trunc = rows.iter().flatten().map(Series::trunc).min().ok_or(Error::LeadingZero)?;
    Ok(rows.into_iter().map(|r| r.map_or_else(|| Series::zero(trunc), |s| s.truncate(trunc))).collect())
}
