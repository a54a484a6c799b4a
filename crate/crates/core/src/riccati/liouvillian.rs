//! Evaluation of the Liouvillian solutions attached to a rational solution
//! `γ` of the Riccati model:
//! `u(z) = exp(∫γ) [ℓ + k ∫ exp(−∫ b/a − 2∫γ)]`, with every integral taken
//! along the straight segment from a fixed anchor point.

use crate::error::{Error, Result};
use crate::ode::Ode;
use crate::series::poly;
use gauss_quad::GaussLegendre;
use num_complex::Complex64;

/// `num(z) / den(z)` with complex polynomial coefficients, lowest power first.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalFunction {
    pub num: Vec<Complex64>,
    pub den: Vec<Complex64>,
}

impl RationalFunction {
    pub fn polynomial(num: Vec<Complex64>) -> Self {
        RationalFunction { num, den: vec![Complex64::new(1.0, 0.0)] }
    }

    pub fn zero() -> Self {
        RationalFunction::polynomial(Vec::new())
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        poly::eval_c64(&self.num, z) / poly::eval_c64(&self.den, z)
    }

    pub fn poles(&self) -> Vec<Complex64> {
        poly::roots_c64(&self.den)
    }
}

/// Quadrature settings: composite Gauss–Legendre with `panels` pieces of
/// `nodes` points along each segment from `anchor`; `check_points` are
/// where the Riccati identity for `γ` is verified.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureSpec {
    pub anchor: Complex64,
    pub nodes: usize,
    pub panels: usize,
    pub check_points: Vec<Complex64>,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        let check_points = (0..7).map(|k| Complex64::from_polar(0.3 + 0.25 * k as f64, 0.9 * k as f64)).collect();
        QuadratureSpec { anchor: Complex64::new(0.0, 0.0), nodes: 20, panels: 4, check_points }
    }
}

/// Relative tolerance on `a(A'B − AB') + aA² + bAB + cB²` for `γ = A/B`.
pub const RICCATI_RESIDUAL_TOL: f64 = 1e-9;

/// Numeric evaluator for the two-parameter family of solutions.
#[derive(Clone, Debug)]
pub struct LiouvillianSolution {
    a: Vec<Complex64>,
    b: Vec<Complex64>,
    gamma: RationalFunction,
    anchor: Complex64,
    panels: usize,
    rule: Vec<(f64, f64)>,
    singular: Vec<Complex64>,
    /// Largest relative Riccati residual of `γ` over the check points.
    pub riccati_residual: f64,
}

/// Builds the evaluator after checking that `γ` solves the Riccati model
/// of `a u'' + b u' + c u = 0`. With `c ≡ 0`, `γ = 0` gives
/// `u = ℓ + k ∫ exp(−∫ b/a)`.
pub fn liouvillian_solution(e: &Ode, gamma: &RationalFunction, spec: &QuadratureSpec) -> Result<LiouvillianSolution> {
    if e.order() != 2 {
        return Err(Error::Precondition(format!("needs order 2, got {}", e.order())));
    }
    let row = |k: usize| -> Result<Vec<Complex64>> { Ok(e.row_poly(k)?.iter().map(|c| c.to_c64()).collect()) };
    let (a, b, c) = (row(2)?, row(1)?, row(0)?);
    let (num, den) = (&gamma.num, &gamma.den);
    let (dnum, dden) = (derivative(num), derivative(den));
    let mut worst: f64 = 0.0;
    for &z in &spec.check_points {
        let (av, bv, cv) = (poly::eval_c64(&a, z), poly::eval_c64(&b, z), poly::eval_c64(&c, z));
        let (p, q) = (poly::eval_c64(num, z), poly::eval_c64(den, z));
        let (dp, dq) = (poly::eval_c64(&dnum, z), poly::eval_c64(&dden, z));
        let parts = [av * (dp * q - p * dq), av * p * p, bv * p * q, cv * q * q];
        let total: Complex64 = parts.iter().sum();
        let scale: f64 = parts.iter().map(|t| t.norm()).sum();
        let rel = if scale == 0.0 { 0.0 } else { total.norm() / scale };
        worst = worst.max(rel);
    }
    if worst > RICCATI_RESIDUAL_TOL {
        return Err(Error::RiccatiResidual(worst));
    }
    let rule = GaussLegendre::new(spec.nodes.max(2))
        .map_err(|err| Error::Precondition(format!("quadrature rule: {err}")))?
        .as_node_weight_pairs()
        .to_vec();
    let mut singular = poly::roots_c64(&a);
    singular.extend(gamma.poles());
    Ok(LiouvillianSolution {
        a,
        b,
        gamma: gamma.clone(),
        anchor: spec.anchor,
        panels: spec.panels.max(1),
        rule,
        singular,
        riccati_residual: worst,
    })
}

fn derivative(p: &[Complex64]) -> Vec<Complex64> {
    p.iter().enumerate().skip(1).map(|(k, c)| c * k as f64).collect()
}

impl LiouvillianSolution {
    /// `∫_anchor^z f` along the straight segment.
    fn integrate(&self, z: Complex64, f: &dyn Fn(Complex64) -> Complex64) -> Complex64 {
        let span = z - self.anchor;
        let h = 1.0 / self.panels as f64;
        let mut acc = Complex64::new(0.0, 0.0);
        for p in 0..self.panels {
            let mid = (p as f64 + 0.5) * h;
            for &(x, w) in &self.rule {
                acc += f(self.anchor + span * (mid + 0.5 * h * x)) * (0.5 * h * w);
            }
        }
        acc * span
    }

    fn check_segment(&self, z: Complex64) -> Result<()> {
        let (a, b) = (self.anchor, z);
        for s in &self.singular {
            let ab = b - a;
            let t = if ab.norm_sqr() == 0.0 { 0.0 } else { (((s - a) * ab.conj()).re / ab.norm_sqr()).clamp(0.0, 1.0) };
            if (a + ab * t - s).norm() < 1e-8 * (1.0 + s.norm()) {
                return Err(Error::QuadraturePole(format!("{s}")));
            }
        }
        Ok(())
    }

    fn gamma_integral(&self, z: Complex64) -> Complex64 {
        self.integrate(z, &|x| self.gamma.eval(x))
    }

    /// The two basis values `exp(∫γ)` and `exp(∫γ) ∫ exp(−∫b/a − 2∫γ)` at `z`.
    pub fn basis(&self, z: Complex64) -> Result<[Complex64; 2]> {
        self.check_segment(z)?;
        let inner = |eta: Complex64| -> Complex64 {
            let ratio = self.integrate(eta, &|x| poly::eval_c64(&self.b, x) / poly::eval_c64(&self.a, x));
            (-ratio - self.gamma_integral(eta) * 2.0).exp()
        };
        let front = self.gamma_integral(z).exp();
        Ok([front, front * self.integrate(z, &inner)])
    }

    /// `u(z) = ℓ·basis₀ + k·basis₁`.
    pub fn evaluate(&self, z: Complex64, k: Complex64, ell: Complex64) -> Result<Complex64> {
        let [u0, u1] = self.basis(z)?;
        Ok(ell * u0 + k * u1)
    }
}
