//! Fundamental systems of Frobenius solutions.

use super::recurrence::{run_factored, Factorization};
use super::residual::{residual_from, Residual};
use crate::classify::{classify_point, PointKind};
use crate::error::{Error, Result};
use crate::indicial::{classify_case_with, CaseTag, IndicialData};
use crate::ode::{to_frobenius_rows, FrobeniusForm, Ode};
use crate::series::generalized::GsTerm;
use crate::series::scalar::{BORDERLINE_TOL, INTEGER_TOL};
use crate::series::{GeneralizedSeries, Jet, Scalar, Series};

/// The constant multiplying `log x` times the solution of a larger root in
/// the same class, read off the constructed solution.
#[derive(Clone, Debug, PartialEq)]
pub struct LogConstant {
    /// Index of the solution carrying the logarithm.
    pub solution: usize,
    /// Index of the root whose solution the logarithm multiplies.
    pub partner: usize,
    pub value: Scalar,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FundamentalSystem {
    /// `solutions[i]` belongs to `indicial.roots[i]`.
    pub solutions: Vec<GeneralizedSeries>,
    pub indicial: IndicialData,
    /// Case actually used to build the solutions.
    pub case: CaseTag,
    /// Roots after snapping integer differences inside each class.
    pub exponents: Vec<Scalar>,
    pub trunc: usize,
    pub constants: Vec<LogConstant>,
    /// Set when the roots sat in the ambiguous window between the integer
    /// tolerance and the borderline tolerance and both readings were tried.
    pub borderline: bool,
}

impl FundamentalSystem {
    pub fn order(&self) -> usize {
        self.solutions.len()
    }

    pub fn is_exact(&self) -> bool {
        self.solutions.iter().all(GeneralizedSeries::is_exact)
    }

    /// Residual of each solution in `e`, measured from its indicial root.
    pub fn residuals(&self, e: &Ode) -> Result<Vec<Residual>> {
        self.solutions.iter().zip(&self.exponents).map(|(g, r)| residual_from(e, g, r)).collect()
    }
}

/// Roots grouped into classes modulo the integers.
struct RootPlan {
    /// Snapped root for each input root.
    snapped: Vec<Scalar>,
    /// Class index for each root.
    class: Vec<usize>,
    /// Integer offset of each root inside its class.
    offset: Vec<i64>,
}

fn plan_roots(roots: &[Scalar], tol: f64) -> RootPlan {
    let n = roots.len();
    let mut class = vec![usize::MAX; n];
    let mut offset = vec![0i64; n];
    let mut leaders: Vec<usize> = Vec::new();
    for i in 0..n {
        for (c, &l) in leaders.iter().enumerate() {
            if let Some(k) = (&roots[i] - &roots[l]).as_integer(tol) {
                class[i] = c;
                offset[i] = k;
                break;
            }
        }
        if class[i] == usize::MAX {
            class[i] = leaders.len();
            leaders.push(i);
        }
    }
    let mut snapped = roots.to_vec();
    for c in 0..leaders.len() {
        let members: Vec<usize> = (0..n).filter(|&i| class[i] == c).collect();
        let mut sum = Scalar::zero();
        for &i in &members {
            sum = &sum + &(&roots[i] - &Scalar::from_i64(offset[i]));
        }
        let centre = &sum / &Scalar::from_i64(members.len() as i64);
        for &i in &members {
            snapped[i] = &centre + &Scalar::from_i64(offset[i]);
        }
    }
    RootPlan { snapped, class, offset }
}

fn factorial(n: usize) -> Scalar {
    (1..=n as i64).fold(Scalar::one(), |acc, k| &acc * &Scalar::from_i64(k))
}

/// Solutions for every root under one reading of the root classes.
fn build(form: &FrobeniusForm, roots: &[Scalar], tol: f64, terms: usize) -> Result<(Vec<GeneralizedSeries>, Vec<Scalar>, Vec<LogConstant>)> {
    let plan = plan_roots(roots, tol);
    let n = roots.len();
    let mut solutions: Vec<Option<GeneralizedSeries>> = vec![None; n];
    let mut constants = Vec::new();
    let mut done = vec![false; n];
    for i in 0..n {
        if done[i] {
            continue;
        }
        let rho = plan.snapped[i].clone();
        let same: Vec<usize> = (0..n).filter(|&j| plan.class[j] == plan.class[i] && plan.offset[j] == plan.offset[i]).collect();
        let above = (0..n).filter(|&j| plan.class[j] == plan.class[i] && plan.offset[j] > plan.offset[i]).count();
        let factors = Factorization {
            class_offsets: (0..n).filter(|&j| plan.class[j] == plan.class[i]).map(|j| plan.offset[j] - plan.offset[i]).collect(),
            other_gaps: (0..n).filter(|&j| plan.class[j] != plan.class[i]).map(|j| &rho - &plan.snapped[j]).collect(),
        };
        let s = same.len();
        let order = 2 * above + s - 1;
        let seed = Jet::epsilon_power(above, order);
        let ds = run_factored(form, &rho, &factors, seed, terms)?;
        let mu_fact = factorial(above);
        for (t, &j_idx) in same.iter().enumerate() {
            let j = above + t;
            let mut gs_terms = Vec::new();
            for l in 0..=j {
                let weight = &factorial(j) / &(&mu_fact * &factorial(l));
                let coeffs: Vec<Scalar> = ds.iter().map(|d| &d.coeff(j - l) * &weight).collect();
                gs_terms.push(GsTerm { exponent: rho.clone(), log_power: l as u32, body: Series::from_coeffs(coeffs, terms) });
            }
            let g = GeneralizedSeries::new(gs_terms);
            if above > 0 {
                let nearest = (0..n)
                    .filter(|&k| plan.class[k] == plan.class[i] && plan.offset[k] > plan.offset[i])
                    .min_by_key(|&k| plan.offset[k])
                    .expect("a root above");
                let d = plan.offset[nearest] - plan.offset[i];
                let value = g.coeff_at(&(&rho + &Scalar::from_i64(d)), 1);
                constants.push(LogConstant { solution: j_idx, partner: nearest, value });
            }
            solutions[j_idx] = Some(g);
            done[j_idx] = true;
        }
    }
    Ok((solutions.into_iter().map(|s| s.expect("every root handled")).collect(), plan.snapped, constants))
}

/// Frobenius fundamental system of `x^n y^(n) + Σ x^k p_k y^(k) = 0` with
/// bodies known through `terms` coefficients past each root.
///
/// Exact arithmetic is kept when the form and all indicial roots are
/// Gaussian rationals. Repeated roots and roots differing by integers are
/// handled uniformly: for a root `ρ` with `μ` roots of its class above it,
/// the recurrence is seeded with `(r - ρ)^μ` and the solutions are the
/// derivatives of order `μ, μ+1, ...` in `r` at `ρ`, divided by `μ!`.
pub fn frobenius_solve(form: &FrobeniusForm, terms: usize) -> Result<FundamentalSystem> {
    let indicial = IndicialData::from_form(form);
    let exact = form.is_exact() && indicial.is_exact();
    let work = if exact { form.clone() } else { form.to_float() };
    let terms = terms.min(work.trunc());
    let roots: Vec<Scalar> = if exact { indicial.roots.clone() } else { indicial.roots.iter().map(Scalar::to_float).collect() };
    let (solutions, exponents, constants) = build(&work, &roots, INTEGER_TOL, terms)?;
    let mut fs = FundamentalSystem {
        solutions,
        case: indicial.case,
        exponents,
        trunc: terms,
        constants,
        borderline: false,
        indicial: indicial.clone(),
    };
    if let Some(wide) = indicial.borderline {
        let ode = work.to_ode();
        let worst = |fs: &FundamentalSystem| -> f64 {
            fs.residuals(&ode).map(|rs| rs.iter().map(|r| r.max_relative).fold(0.0, f64::max)).unwrap_or(f64::INFINITY)
        };
        fs.borderline = true;
        if let Ok((solutions, exponents, constants)) = build(&work, &roots, BORDERLINE_TOL, terms) {
            let alt = FundamentalSystem {
                solutions,
                case: classify_case_with(&roots, BORDERLINE_TOL),
                exponents,
                constants,
                ..fs.clone()
            };
            debug_assert_eq!(alt.case, wide);
            if worst(&alt) < worst(&fs) {
                return Ok(alt);
            }
        }
    }
    Ok(fs)
}

/// Classifies the chart origin of `e`, normalizes and solves.
pub fn solve_ode(e: &Ode, terms: usize) -> Result<FundamentalSystem> {
    let class = classify_point(e)?;
    if class.kind == PointKind::IrregularSingular {
        return Err(Error::IrregularPoint("the origin is an irregular singular point; try a formal probe instead".into()));
    }
    frobenius_solve(&to_frobenius_rows(e, terms)?, terms)
}

/// Closed-form basis of an Euler equation: `x^ρ (log x)^i` for each root
/// `ρ` of multiplicity `s` and `i < s`.
pub fn solve_euler(form: &FrobeniusForm, terms: usize) -> Result<FundamentalSystem> {
    if !form.is_euler() {
        return Err(Error::Precondition("the coefficients are not constant".into()));
    }
    let indicial = IndicialData::from_form(form);
    let plan = plan_roots(&indicial.roots, INTEGER_TOL);
    let n = indicial.roots.len();
    let mut solutions = Vec::with_capacity(n);
    for i in 0..n {
        let earlier_equal = (0..i).filter(|&j| plan.class[j] == plan.class[i] && plan.offset[j] == plan.offset[i]).count();
        solutions.push(GeneralizedSeries::monomial(plan.snapped[i].clone(), earlier_equal as u32, terms));
    }
    Ok(FundamentalSystem {
        solutions,
        case: indicial.case,
        exponents: plan.snapped,
        trunc: terms,
        constants: Vec::new(),
        borderline: false,
        indicial,
    })
}
