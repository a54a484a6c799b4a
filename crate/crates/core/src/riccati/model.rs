use crate::error::{Error, Result};
use crate::ode::{Chart, Ode};
use crate::series::poly;
use num_complex::Complex64;

/// The rational Riccati equation `dt/dz = -(α t² + β t + γ)/δ` with its
/// ramification set.
///
/// For the model of `a u'' + b u' + c u = 0` (obtained from `t = u'/u`) the
/// data are `α = δ = a`, `β = b`, `γ = c`.
#[derive(Clone, Debug, PartialEq)]
pub struct RiccatiModel {
    pub quadratic: Vec<Complex64>,
    pub linear: Vec<Complex64>,
    pub constant: Vec<Complex64>,
    pub denominator: Vec<Complex64>,
    /// Finite ramification points: the zeros of the denominator.
    pub sigma: Vec<Complex64>,
    /// Whether the fibre over `z = ∞` is invariant as well.
    pub infinity_in_sigma: bool,
}

impl RiccatiModel {
    pub fn new(
        quadratic: Vec<Complex64>,
        linear: Vec<Complex64>,
        constant: Vec<Complex64>,
        denominator: Vec<Complex64>,
    ) -> Result<Self> {
        let trim = |mut p: Vec<Complex64>| {
            while p.last().is_some_and(|c| *c == Complex64::new(0.0, 0.0)) {
                p.pop();
            }
            p
        };
        let (quadratic, linear, constant, denominator) = (trim(quadratic), trim(linear), trim(constant), trim(denominator));
        if denominator.is_empty() {
            return Err(Error::Precondition("Riccati denominator vanishes identically".into()));
        }
        let mut sigma: Vec<Complex64> = Vec::new();
        for r in poly::roots_c64(&denominator) {
            if sigma.iter().all(|s| (s - r).norm() > 1e-9 * (1.0 + r.norm())) {
                sigma.push(r);
            }
        }
        // In w = 1/z the right-hand side picks up a factor 1/w²; the fibre at
        // infinity stays regular only when every numerator degree is at
        // least two below the denominator's.
        let dd = denominator.len() as i64 - 1;
        let infinity_in_sigma =
            [&quadratic, &linear, &constant].iter().any(|p| !p.is_empty() && p.len() as i64 - 1 > dd - 2);
        Ok(RiccatiModel { quadratic, linear, constant, denominator, sigma, infinity_in_sigma })
    }

    /// `dt/dz` at `(z, t)`.
    pub fn slope(&self, z: Complex64, t: Complex64) -> Complex64 {
        let num = poly::eval_c64(&self.quadratic, z) * t * t + poly::eval_c64(&self.linear, z) * t + poly::eval_c64(&self.constant, z);
        -num / poly::eval_c64(&self.denominator, z)
    }

    /// `dw/dz` for `w = 1/t`: `(α + β w + γ w²)/δ`.
    pub fn slope_inverted(&self, z: Complex64, w: Complex64) -> Complex64 {
        let num = poly::eval_c64(&self.quadratic, z) + poly::eval_c64(&self.linear, z) * w + poly::eval_c64(&self.constant, z) * w * w;
        num / poly::eval_c64(&self.denominator, z)
    }

    /// Distance from `z` to the nearest finite ramification point.
    pub fn distance_to_sigma(&self, z: Complex64) -> f64 {
        self.sigma.iter().map(|s| (z - s).norm()).fold(f64::INFINITY, f64::min)
    }
}

/// Riccati model `dt/dz = -(a t² + b t + c)/a` of a second-order equation
/// with polynomial coefficients, through the substitution `t = u'/u`.
pub fn riccati_model(e: &Ode) -> Result<RiccatiModel> {
    if e.order() != 2 {
        return Err(Error::Precondition(format!("Riccati model needs order 2, got {}", e.order())));
    }
    if !matches!(e.chart(), Chart::Finite(c) if c.is_zero()) {
        return Err(Error::Precondition("Riccati model is built in the original coordinate".into()));
    }
    let row = |k: usize| -> Result<Vec<Complex64>> { Ok(e.row_poly(k)?.iter().map(|c| c.to_c64()).collect()) };
    let (a, b, c) = (row(2)?, row(1)?, row(0)?);
    RiccatiModel::new(a.clone(), b, c, a)
}

/// The model obtained from `w = u/u'` instead: `dw/dz = (c w² + b w + a)/a`.
pub fn inverse_riccati_model(e: &Ode) -> Result<RiccatiModel> {
    let m = riccati_model(e)?;
    let neg = |p: &[Complex64]| p.iter().map(|c| -c).collect::<Vec<_>>();
    RiccatiModel::new(neg(&m.constant), neg(&m.linear), neg(&m.quadratic), m.denominator)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shifted_exponential_equation() {
        let e = Ode::from_int_rows(&[&[1], &[0, -1], &[-1]], 4).unwrap();
        let m = riccati_model(&e).unwrap();
        let (z, t) = (Complex64::new(0.3, -1.2), Complex64::new(2.0, 0.5));
        assert!((m.slope(z, t) - (1.0 + z * t - t * t)).norm() < 1e-14);
        assert!(m.sigma.is_empty() && m.infinity_in_sigma);
    }

    #[test]
    fn euler_model_and_inverse() {
        let e = Ode::from_int_rows(&[&[0, 0, 1], &[], &[1]], 4).unwrap();
        let m = riccati_model(&e).unwrap();
        assert_eq!(m.sigma.len(), 1);
        assert!(m.sigma.iter().all(|s| s.norm() < 1e-12));
        assert!(m.infinity_in_sigma);
        let w = inverse_riccati_model(&e).unwrap();
        let (z, t) = (Complex64::new(0.7, 0.2), Complex64::new(-0.4, 1.1));
        assert!((w.slope(z, t) - (z * z + t * t) / (z * z)).norm() < 1e-13);
    }
}
