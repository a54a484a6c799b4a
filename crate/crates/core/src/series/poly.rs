//! Dense univariate polynomials stored as ascending coefficient vectors.

use super::scalar::Scalar;
use nalgebra::DMatrix;
use num_complex::Complex64;

/// Drops trailing exact zeros.
pub fn trim(p: &[Scalar]) -> Vec<Scalar> {
    let mut v = p.to_vec();
    while v.last().is_some_and(Scalar::is_zero) {
        v.pop();
    }
    v
}

/// Degree, or `None` for the zero polynomial.
pub fn degree(p: &[Scalar]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

pub fn add(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    let n = a.len().max(b.len());
    let zero = Scalar::zero();
    trim(&(0..n).map(|i| a.get(i).unwrap_or(&zero) + b.get(i).unwrap_or(&zero)).collect::<Vec<_>>())
}

pub fn scale(a: &[Scalar], c: &Scalar) -> Vec<Scalar> {
    trim(&a.iter().map(|x| x * c).collect::<Vec<_>>())
}

pub fn mul(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Scalar::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = &out[i + j] + &(x * y);
        }
    }
    trim(&out)
}

pub fn pow(a: &[Scalar], n: usize) -> Vec<Scalar> {
    let mut acc = vec![Scalar::one()];
    for _ in 0..n {
        acc = mul(&acc, a);
    }
    acc
}

pub fn derivative(a: &[Scalar]) -> Vec<Scalar> {
    trim(&a.iter().enumerate().skip(1).map(|(k, c)| c * &Scalar::from_i64(k as i64)).collect::<Vec<_>>())
}

pub fn eval(a: &[Scalar], z: &Scalar) -> Scalar {
    a.iter().rev().fold(Scalar::zero(), |acc, c| &(&acc * z) + c)
}

pub fn eval_c64(a: &[Complex64], z: Complex64) -> Complex64 {
    a.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
}

/// Exact division by the monic linear factor `(x - r)`; the remainder is dropped.
pub fn deflate(a: &[Scalar], r: &Scalar) -> Vec<Scalar> {
    let n = a.len();
    if n <= 1 {
        return Vec::new();
    }
    let mut out = vec![Scalar::zero(); n - 1];
    let mut carry = Scalar::zero();
    for k in (1..n).rev() {
        carry = &a[k] + &(&carry * r);
        out[k - 1] = carry.clone();
    }
    trim(&out)
}

/// Quotient and remainder of polynomial division; `b` must be nonzero.
pub fn div_rem(a: &[Scalar], b: &[Scalar]) -> (Vec<Scalar>, Vec<Scalar>) {
    let b = trim(b);
    let db = b.len() - 1;
    let lead_inv = b[db].inv();
    let mut rem = trim(a);
    if rem.len() <= db {
        return (Vec::new(), rem);
    }
    let mut quot = vec![Scalar::zero(); rem.len() - db];
    while rem.len() > db {
        let shift = rem.len() - 1 - db;
        let q = &rem[rem.len() - 1] * &lead_inv;
        for (i, c) in b.iter().enumerate() {
            rem[shift + i] = &rem[shift + i] - &(&q * c);
        }
        rem.pop();
        quot[shift] = q;
        rem = trim(&rem);
    }
    (trim(&quot), rem)
}

/// Monic greatest common divisor by Euclid's algorithm. Meant for exact
/// coefficients, where remainders vanish exactly.
pub fn gcd(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    let (mut x, mut y) = (trim(a), trim(b));
    while !y.is_empty() {
        let (_, r) = div_rem(&x, &y);
        x = y;
        y = r;
    }
    monic(&x)
}

pub fn monic(a: &[Scalar]) -> Vec<Scalar> {
    let a = trim(a);
    match a.last() {
        Some(l) => {
            let inv = l.inv();
            a.iter().map(|c| c * &inv).collect()
        }
        None => a,
    }
}

/// All complex roots of a polynomial with nonzero leading coefficient.
///
/// Roots at the origin are split off exactly. The rest come from the Schur
/// form of the companion matrix, or from Durand–Kerner iteration when the
/// QR sweep fails to converge, and are polished by two Newton steps.
pub fn roots_c64(a: &[Complex64]) -> Vec<Complex64> {
    let mut a = a.to_vec();
    while a.last().is_some_and(|c| c.norm() == 0.0) {
        a.pop();
    }
    let zeros = a.iter().take_while(|c| c.norm() == 0.0).count().min(a.len().saturating_sub(1));
    let mut roots = vec![Complex64::new(0.0, 0.0); zeros];
    a.drain(..zeros);
    let n = match a.len() {
        0 | 1 => return roots,
        l => l - 1,
    };
    let lead = a[n];
    let monic: Vec<Complex64> = a.iter().map(|c| c / lead).collect();
    if n == 1 {
        roots.push(-monic[0]);
        return roots;
    }
    let mut m = DMatrix::<Complex64>::zeros(n, n);
    for i in 1..n {
        m[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..n {
        m[(i, n - 1)] = -monic[i];
    }
    let estimates: Vec<Complex64> = match m.try_schur(f64::EPSILON, 500 * n) {
        Some(schur) => {
            let (_, t) = schur.unpack();
            (0..n).map(|i| t[(i, i)]).collect()
        }
        None => durand_kerner(&monic),
    };
    let deriv: Vec<Complex64> = monic.iter().enumerate().skip(1).map(|(k, c)| c * k as f64).collect();
    roots.extend(estimates.into_iter().map(|mut z| {
        for _ in 0..2 {
            let d = eval_c64(&deriv, z);
            if d.norm() > 0.0 {
                let step = eval_c64(&monic, z) / d;
                if step.is_finite() {
                    z -= step;
                }
            }
        }
        z
    }));
    roots
}

/// Simultaneous Weierstrass iteration for a monic polynomial.
fn durand_kerner(monic: &[Complex64]) -> Vec<Complex64> {
    let n = monic.len() - 1;
    let radius = 1.0 + monic[..n].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..n).map(|k| Complex64::from_polar(radius, 0.4 + 2.0 * std::f64::consts::PI * k as f64 / n as f64)).collect();
    for _ in 0..1000 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let denom = (0..n).filter(|&j| j != i).fold(Complex64::new(1.0, 0.0), |acc, j| acc * (z[i] - z[j]));
            let step = eval_c64(monic, z[i]) / denom;
            if step.is_finite() {
                z[i] -= step;
                moved = moved.max(step.norm());
            }
        }
        if moved < 1e-15 * radius {
            break;
        }
    }
    z
}
