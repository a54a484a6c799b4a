//! Indicial polynomials, their roots and the exceptional-case taxonomy.

use crate::ode::FrobeniusForm;
use crate::series::poly;
use crate::series::scalar::{recognize_gaussian_within, BORDERLINE_TOL, CLASS_TOL, INTEGER_TOL};
use crate::series::Scalar;
use num_complex::Complex64;
use serde::Serialize;
use std::cmp::Ordering;

/// Root configuration. Order-two tags carry the `O2` prefix; `Pair*` tags
/// cover third-order configurations where only two roots interact.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CaseTag {
    NonExceptional,
    O2Equal,
    O2IntegerDiff(i64),
    PairEqual,
    PairIntegerDiff(i64),
    /// `r1 = r2 = r3`.
    CaseI,
    /// `r1 = r2`, `r1 - r3 = m`.
    CaseII(i64),
    /// `r2 = r3`, `r1 - r2 = m`.
    CaseIII(i64),
    /// `r1 - r2 = m`, `r2 - r3 = p`.
    CaseIV(i64, i64),
}

impl CaseTag {
    pub fn is_exceptional(&self) -> bool {
        *self != CaseTag::NonExceptional
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct IndicialData {
    /// Ascending coefficients of `q(r)`, monic.
    pub poly: Vec<Scalar>,
    /// Roots by decreasing real part, then decreasing imaginary part.
    pub roots: Vec<Scalar>,
    pub case: CaseTag,
    /// The configuration obtained with the wider borderline window, when it
    /// differs from `case`.
    pub borderline: Option<CaseTag>,
}

impl IndicialData {
    pub fn from_form(f: &FrobeniusForm) -> Self {
        let q = indicial_polynomial(f);
        let roots = solve_roots(&q);
        let case = classify_case(&roots);
        let wide = classify_case_with(&roots, BORDERLINE_TOL);
        IndicialData { poly: q, roots, case, borderline: (wide != case).then_some(wide) }
    }

    pub fn is_exact(&self) -> bool {
        self.roots.iter().all(Scalar::is_exact)
    }
}

/// `r(r-1)...(r-k+1)` as ascending coefficients.
pub fn falling_factorial_poly(k: usize) -> Vec<Scalar> {
    (0..k).fold(vec![Scalar::one()], |acc, j| poly::mul(&acc, &[Scalar::from_i64(-(j as i64)), Scalar::one()]))
}

/// `q(r) = r(r-1)...(r-n+1) + Σ_k p_k(0) r(r-1)...(r-k+1)`.
pub fn indicial_polynomial(f: &FrobeniusForm) -> Vec<Scalar> {
    let n = f.order();
    let mut q = falling_factorial_poly(n);
    for k in 0..n {
        q = poly::add(&q, &poly::scale(&falling_factorial_poly(k), &f.p(k).coeff(0)));
    }
    q
}

/// Roots with multiplicity, ordered by decreasing real part with ties
/// broken by decreasing imaginary part.
///
/// Exact polynomials get exact roots whenever all of them are Gaussian
/// rationals; otherwise every root is returned in floating point.
pub fn solve_roots(q: &[Scalar]) -> Vec<Scalar> {
    let q = poly::trim(q);
    let mut roots = if q.iter().all(Scalar::is_exact) {
        exact_roots(&q).unwrap_or_else(|| float_roots(&q).into_iter().map(Scalar::Float).collect())
    } else {
        float_roots(&q).into_iter().map(Scalar::Float).collect()
    };
    sort_roots(&mut roots);
    roots
}

pub fn sort_roots(roots: &mut [Scalar]) {
    roots.sort_by(compare_desc);
}

fn compare_desc(a: &Scalar, b: &Scalar) -> Ordering {
    if a.is_exact() && b.is_exact() {
        return b.cmp_re_im(a);
    }
    let (x, y) = (a.to_c64(), b.to_c64());
    if (x.re - y.re).abs() > CLASS_TOL {
        y.re.partial_cmp(&x.re).unwrap_or(Ordering::Equal)
    } else {
        y.im.partial_cmp(&x.im).unwrap_or(Ordering::Equal)
    }
}

fn exact_roots(q: &[Scalar]) -> Option<Vec<Scalar>> {
    let q = poly::monic(q);
    let deg = q.len().checked_sub(1)?;
    if deg == 0 {
        return Some(Vec::new());
    }
    let g = poly::gcd(&q, &poly::derivative(&q));
    match g.len() - 1 {
        0 => squarefree_exact(&q),
        1 => {
            let r = -&g[0];
            let mut rest = poly::deflate(&poly::deflate(&q, &r), &r);
            let mut out = vec![r.clone(), r];
            if !rest.is_empty() && rest.len() > 1 {
                rest = poly::monic(&rest);
                out.push(-&rest[0]);
            }
            Some(out)
        }
        2 => {
            let r = -(&g[1] / &Scalar::from_i64(2));
            Some(vec![r.clone(), r.clone(), r])
        }
        _ => None,
    }
}

fn squarefree_exact(q: &[Scalar]) -> Option<Vec<Scalar>> {
    let mut p = poly::monic(q);
    let mut out = Vec::new();
    while p.len() > 3 {
        let floats: Vec<Complex64> = p.iter().map(Scalar::to_c64).collect();
        // Clustered roots come out of the eigenvalue solver with only a few
        // correct digits, so recognition is retried at looser tolerances and
        // every candidate is checked exactly.
        let approx = poly::roots_c64(&floats);
        let found = [1e-13, 1e-10, 1e-7, 1e-5]
            .iter()
            .flat_map(|&tol| approx.iter().filter_map(move |&z| recognize_gaussian_within(z, tol)))
            .find(|r| poly::eval(&p, r).is_zero())?;
        p = poly::monic(&poly::deflate(&p, &found));
        out.push(found);
    }
    match p.len() {
        3 => {
            let disc = &(&p[1] * &p[1]) - &(&Scalar::from_i64(4) * &p[0]);
            let s = disc.sqrt();
            if !s.is_exact() {
                return None;
            }
            let two = Scalar::from_i64(2);
            out.push(&(&(-&p[1]) + &s) / &two);
            out.push(&(&(-&p[1]) - &s) / &two);
        }
        2 => out.push(-&p[0]),
        _ => {}
    }
    Some(out)
}

/// Floating roots with explicit detection of clustered roots: a cluster
/// narrower than the integer-detection tolerance is reported as a
/// repeated root at its centre.
pub fn float_roots(q: &[Scalar]) -> Vec<Complex64> {
    let c: Vec<Complex64> = poly::trim(q).iter().map(Scalar::to_c64).collect();
    let deg = c.len().saturating_sub(1);
    if deg == 0 {
        return Vec::new();
    }
    let m: Vec<Complex64> = c.iter().map(|x| x / c[deg]).collect();
    match deg {
        1 => vec![-m[0]],
        2 => {
            let (b, cc) = (m[1], m[0]);
            let disc = b * b - 4.0 * cc;
            let s = disc.sqrt();
            if s.norm() <= INTEGER_TOL {
                let r = -b / 2.0;
                return vec![r, r];
            }
            // Stable pairing avoids cancellation in the smaller root.
            let big = if (-b + s).norm() >= (-b - s).norm() { (-b + s) / 2.0 } else { (-b - s) / 2.0 };
            let small = if big.norm() > 0.0 { cc / big } else { (-b - s) / 2.0 };
            vec![big, small]
        }
        3 => {
            let ev = |z: Complex64| poly::eval_c64(&m, z);
            let d1 = [m[1], 2.0 * m[2], Complex64::new(3.0, 0.0)];
            let d2 = [2.0 * m[2], Complex64::new(6.0, 0.0)];
            let centre = -m[2] / 3.0;
            let spread = poly::eval_c64(&d1, centre).norm().sqrt().max(ev(centre).norm().cbrt());
            if spread <= INTEGER_TOL {
                return vec![centre; 3];
            }
            for z in poly::roots_c64(&d1) {
                let curv = poly::eval_c64(&d2, z);
                if curv.norm() == 0.0 {
                    continue;
                }
                let gap = 2.0 * (2.0 * ev(z) / curv).norm().sqrt();
                if gap <= INTEGER_TOL {
                    let other = -m[2] - 2.0 * z;
                    return vec![z, z, other];
                }
            }
            poly::roots_c64(&m)
        }
        _ => poly::roots_c64(&m),
    }
}

/// Case tag under the integer-detection tolerance.
pub fn classify_case(roots: &[Scalar]) -> CaseTag {
    classify_case_with(roots, INTEGER_TOL)
}

/// Case tag treating differences within `tol` of an integer as integers.
pub fn classify_case_with(roots: &[Scalar], tol: f64) -> CaseTag {
    let diff = |i: usize, j: usize| (&roots[i] - &roots[j]).as_integer(tol);
    match roots.len() {
        2 => match diff(0, 1) {
            Some(0) => CaseTag::O2Equal,
            Some(m) => CaseTag::O2IntegerDiff(m.abs()),
            None => CaseTag::NonExceptional,
        },
        3 => {
            let (d12, d23, d13) = (diff(0, 1), diff(1, 2), diff(0, 2));
            match (d12, d23, d13) {
                (Some(0), Some(0), _) => CaseTag::CaseI,
                (Some(0), _, Some(m)) => CaseTag::CaseII(m.abs()),
                (_, Some(0), Some(m)) => CaseTag::CaseIII(m.abs()),
                (Some(m), Some(p), _) => CaseTag::CaseIV(m.abs(), p.abs()),
                (Some(0), None, _) | (None, Some(0), _) => CaseTag::PairEqual,
                (Some(m), None, _) | (None, Some(m), _) | (None, None, Some(m)) => {
                    if m == 0 {
                        CaseTag::PairEqual
                    } else {
                        CaseTag::PairIntegerDiff(m.abs())
                    }
                }
                _ => CaseTag::NonExceptional,
            }
        }
        _ => CaseTag::NonExceptional,
    }
}
