use super::continuation::{continue_along_path, ContinuationOptions, Path, Projective};
use super::model::RiccatiModel;
use crate::error::{Error, Result};
use num_complex::Complex64;

/// `t ↦ (a₁t + a₂)/(a₃t + a₄)`, stored with `a₁a₄ − a₂a₃ = 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MoebiusMap {
    pub m: [Complex64; 4],
}

impl MoebiusMap {
    pub fn new(m: [Complex64; 4]) -> Result<Self> {
        let det = m[0] * m[3] - m[1] * m[2];
        let scale = m.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if det.norm() <= 1e-300 || det.norm() <= 1e-14 * scale * scale {
            return Err(Error::DegenerateMap);
        }
        let s = det.sqrt();
        Ok(MoebiusMap { m: m.map(|c| c / s) })
    }

    pub fn identity() -> Self {
        let (o, z) = (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
        MoebiusMap { m: [o, z, z, o] }
    }

    /// The map sending `0, 1, ∞` to `p0, p1, p_inf`.
    pub fn through(p0: Projective, p1: Projective, p_inf: Projective) -> Result<Self> {
        // Columns λ·p_inf and μ·p0 with λ·p_inf + μ·p0 ∝ p1.
        let [r0, r1] = p_inf.homogeneous();
        let [q0, q1] = p0.homogeneous();
        let [s0, s1] = p1.homogeneous();
        let det = r0 * q1 - q0 * r1;
        if det.norm() == 0.0 {
            return Err(Error::DegenerateMap);
        }
        let lambda = (s0 * q1 - q0 * s1) / det;
        let mu = (r0 * s1 - s0 * r1) / det;
        MoebiusMap::new([lambda * r0, mu * q0, lambda * r1, mu * q1])
    }

    pub fn apply(&self, p: Projective) -> Projective {
        let [x, y] = p.homogeneous();
        let [a, b, c, d] = self.m;
        Projective::from_homogeneous([a * x + b * y, c * x + d * y])
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &MoebiusMap) -> MoebiusMap {
        let [a, b, c, d] = self.m;
        let [e, f, g, h] = other.m;
        MoebiusMap { m: [a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h] }
    }

    pub fn trace(&self) -> Complex64 {
        self.m[0] + self.m[3]
    }

    /// Eigenvalues `λ, 1/λ` of the normalized matrix, larger modulus first.
    fn eigenvalues(&self) -> [Complex64; 2] {
        let tr = self.trace();
        let disc = (tr * tr - 4.0).sqrt();
        let (l1, l2) = ((tr + disc) / 2.0, (tr - disc) / 2.0);
        if l1.norm() >= l2.norm() {
            [l1, l2]
        } else {
            [l2, l1]
        }
    }

    /// Derivatives at the fixed points, `λ₁/λ₂` and `λ₂/λ₁`. A parabolic or
    /// identity map gives `[1, 1]`.
    pub fn multipliers(&self) -> [Complex64; 2] {
        let [l1, l2] = self.eigenvalues();
        [l2 / l1, l1 / l2]
    }

    /// Fixed points in the order matching [`MoebiusMap::multipliers`].
    pub fn fixed_points(&self) -> Vec<Projective> {
        let [a, b, c, d] = self.m;
        self.eigenvalues()
            .iter()
            .map(|l| {
                // (a - l) x + b y = 0, or c x + (d - l) y = 0.
                let v = if (a - l).norm() + b.norm() >= c.norm() + (d - l).norm() { [-b, a - l] } else { [d - l, -c] };
                Projective::from_homogeneous(v)
            })
            .collect()
    }

    /// Largest chordal displacement among a few sample points, zero for the
    /// identity.
    pub fn distance_from_identity(&self) -> f64 {
        let samples = [Projective::finite(0.0, 0.0), Projective::finite(1.0, 0.0), Projective::Infinity, Projective::finite(0.0, 1.0)];
        samples.iter().map(|p| self.apply(*p).chordal(*p)).fold(0.0, f64::max)
    }
}

/// One generator of the global holonomy with its verification defect.
#[derive(Clone, Debug, PartialEq)]
pub struct HolonomyGenerator {
    pub map: MoebiusMap,
    /// Chordal distance between the continued and predicted fourth point.
    pub defect: f64,
}

/// Largest fourth-point defect accepted by [`global_holonomy`].
pub const MOEBIUS_TOL: f64 = 1e-6;

/// The fourth sample used to certify a fitted map.
pub const CHECK_POINT: Projective = Projective::Finite(Complex64::new(-0.5, 0.75));

/// Continues `0`, `1` and `∞` around each loop based at `z0`, fits the
/// Moebius map through the three results and checks it on a fourth value.
pub fn global_holonomy(m: &RiccatiModel, z0: Complex64, loops: &[Path], opts: &ContinuationOptions) -> Result<Vec<HolonomyGenerator>> {
    if m.distance_to_sigma(z0) < opts.clearance {
        return Err(Error::Clearance { distance: m.distance_to_sigma(z0), clearance: opts.clearance });
    }
    loops
        .iter()
        .map(|path| {
            if let Some(start) = path.start() {
                if (start - z0).norm() > 1e-12 * (1.0 + z0.norm()) {
                    return Err(Error::Precondition(format!("loop starts at {start}, not at the base point {z0}")));
                }
            }
            let run = |t: Projective| continue_along_path(m, t, path, opts);
            let map = MoebiusMap::through(run(Projective::finite(0.0, 0.0))?, run(Projective::finite(1.0, 0.0))?, run(Projective::Infinity)?)?;
            let defect = map.apply(CHECK_POINT).chordal(run(CHECK_POINT)?);
            if defect > MOEBIUS_TOL {
                return Err(Error::MoebiusDefect(defect));
            }
            Ok(HolonomyGenerator { map, defect })
        })
        .collect()
}

/// One loop per finite ramification point, each winding once around that
/// point only: straight out from `z0`, around a small circle, and back.
pub fn standard_loops(m: &RiccatiModel, z0: Complex64) -> Vec<Path> {
    m.sigma
        .iter()
        .map(|s| {
            let nearest = m.sigma.iter().filter(|o| (*o - s).norm() > 1e-9).map(|o| (o - s).norm()).fold(f64::INFINITY, f64::min);
            let radius = (0.5 * (z0 - s).norm()).min(0.4 * nearest);
            Path::lollipop(z0, *s, radius)
        })
        .collect()
}

/// `(a, b; c, d) = ((a - c)(b - d)) / ((a - d)(b - c))` for finite points.
pub fn cross_ratio(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    ((a - c) * (b - d)) / ((a - d) * (b - c))
}
