//! Numerical continuation of Riccati solutions along paths in the `z`-plane.
//!
//! The state lives on the projective line and is carried in one of two
//! affine charts, `t` or `w = 1/t`, switching whenever the magnitude in the
//! current chart exceeds one. The stepper is the Dormand–Prince 5(4) pair
//! with the usual proportional step-size controller.

use super::model::RiccatiModel;
use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::TAU;

/// A point of the projective line.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Projective {
    Finite(Complex64),
    Infinity,
}

impl Projective {
    pub fn finite(re: f64, im: f64) -> Self {
        Projective::Finite(Complex64::new(re, im))
    }

    /// Homogeneous coordinates `[x : y]` with `t = x / y`.
    pub fn homogeneous(self) -> [Complex64; 2] {
        match self {
            Projective::Finite(t) => [t, Complex64::new(1.0, 0.0)],
            Projective::Infinity => [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
        }
    }

    pub fn from_homogeneous([x, y]: [Complex64; 2]) -> Self {
        if y.norm() <= 1e-300 * x.norm().max(1e-300) {
            Projective::Infinity
        } else {
            Projective::Finite(x / y)
        }
    }

    /// Chordal distance on the Riemann sphere (at most 1).
    pub fn chordal(self, other: Projective) -> f64 {
        let [a, b] = self.homogeneous();
        let [c, d] = other.homogeneous();
        let num = (a * d - b * c).norm();
        num / ((a.norm_sqr() + b.norm_sqr()).sqrt() * (c.norm_sqr() + d.norm_sqr()).sqrt())
    }
}

/// A path in the `z`-plane; closed paths start and end at the same point.
#[derive(Clone, Debug, PartialEq)]
pub enum Path {
    /// `z(θ) = center + radius·e^{iθ}` for `θ` from `start_angle` through
    /// `turns` full turns, counterclockwise when `turns > 0`.
    Circle { center: Complex64, radius: f64, start_angle: f64, turns: i32 },
    Polyline(Vec<Complex64>),
    Chain(Vec<Path>),
}

impl Path {
    /// Counterclockwise circle around `center` through the base point `z0`.
    pub fn loop_around(z0: Complex64, center: Complex64) -> Path {
        let d = z0 - center;
        Path::Circle { center, radius: d.norm(), start_angle: d.arg(), turns: 1 }
    }

    /// From `z0` straight towards `center`, once around it counterclockwise
    /// at distance `radius`, and back.
    pub fn lollipop(z0: Complex64, center: Complex64, radius: f64) -> Path {
        let dir = (z0 - center) / (z0 - center).norm();
        let touch = center + dir * radius;
        Path::Chain(vec![
            Path::Polyline(vec![z0, touch]),
            Path::Circle { center, radius, start_angle: dir.arg(), turns: 1 },
            Path::Polyline(vec![touch, z0]),
        ])
    }

    /// Traverses `self` and then `next`.
    pub fn then(self, next: Path) -> Path {
        Path::Chain(vec![self, next])
    }

    pub fn reversed(&self) -> Path {
        match self {
            Path::Circle { center, radius, start_angle, turns } => Path::Circle {
                center: *center,
                radius: *radius,
                start_angle: start_angle + TAU * *turns as f64,
                turns: -turns,
            },
            Path::Polyline(p) => Path::Polyline(p.iter().rev().copied().collect()),
            Path::Chain(parts) => Path::Chain(parts.iter().rev().map(Path::reversed).collect()),
        }
    }

    pub fn start(&self) -> Option<Complex64> {
        match self {
            Path::Circle { center, radius, start_angle, .. } => Some(center + Complex64::from_polar(*radius, *start_angle)),
            Path::Polyline(p) => p.first().copied(),
            Path::Chain(parts) => parts.first().and_then(Path::start),
        }
    }

    /// Smallest distance from the path to `p`.
    pub fn distance_to(&self, p: Complex64) -> f64 {
        match self {
            Path::Circle { center, radius, .. } => ((p - center).norm() - radius).abs(),
            Path::Polyline(pts) => pts
                .windows(2)
                .map(|w| segment_distance(w[0], w[1], p))
                .fold(if pts.len() == 1 { (pts[0] - p).norm() } else { f64::INFINITY }, f64::min),
            Path::Chain(parts) => parts.iter().map(|q| q.distance_to(p)).fold(f64::INFINITY, f64::min),
        }
    }

    /// Smooth pieces `s ∈ [0, 1] ↦ (z(s), z'(s))`.
    fn pieces(&self) -> Vec<Piece> {
        match self {
            Path::Circle { center, radius, start_angle, turns } => {
                let sweep = TAU * *turns as f64;
                vec![Piece::Arc { center: *center, radius: *radius, start: *start_angle, sweep }]
            }
            Path::Polyline(pts) => pts.windows(2).map(|w| Piece::Segment { from: w[0], to: w[1] }).collect(),
            Path::Chain(parts) => parts.iter().flat_map(Path::pieces).collect(),
        }
    }
}

fn segment_distance(a: Complex64, b: Complex64, p: Complex64) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let s = ((p - a) * ab.conj()).re / len2;
    (a + ab * s.clamp(0.0, 1.0) - p).norm()
}

#[derive(Clone, Copy, Debug)]
enum Piece {
    Arc { center: Complex64, radius: f64, start: f64, sweep: f64 },
    Segment { from: Complex64, to: Complex64 },
}

impl Piece {
    fn at(&self, s: f64) -> (Complex64, Complex64) {
        match *self {
            Piece::Arc { center, radius, start, sweep } => {
                let e = Complex64::from_polar(radius, start + sweep * s);
                (center + e, Complex64::new(0.0, sweep) * e)
            }
            Piece::Segment { from, to } => (from + (to - from) * s, to - from),
        }
    }
}

/// Tolerances for [`continue_along_path`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ContinuationOptions {
    pub rtol: f64,
    pub atol: f64,
    /// Minimum distance the path must keep from every finite ramification point.
    pub clearance: f64,
    /// Smallest admissible step in the path parameter.
    pub min_step: f64,
    pub max_steps: usize,
}

impl Default for ContinuationOptions {
    fn default() -> Self {
        ContinuationOptions { rtol: 1e-10, atol: 1e-12, clearance: 1e-6, min_step: 1e-13, max_steps: 200_000 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Chart {
    Affine,
    Inverted,
}

/// Continues the solution of `m` through `t0` at the start of `path` to
/// the path's end point.
pub fn continue_along_path(m: &RiccatiModel, t0: Projective, path: &Path, opts: &ContinuationOptions) -> Result<Projective> {
    for s in &m.sigma {
        let d = path.distance_to(*s);
        if d < opts.clearance {
            return Err(Error::Clearance { distance: d, clearance: opts.clearance });
        }
    }
    let (mut chart, mut y) = match t0 {
        Projective::Finite(t) if t.norm() <= 1.0 => (Chart::Affine, t),
        Projective::Finite(t) => (Chart::Inverted, t.inv()),
        Projective::Infinity => (Chart::Inverted, Complex64::new(0.0, 0.0)),
    };
    let mut steps = 0usize;
    for piece in path.pieces() {
        let f = |chart: Chart, s: f64, y: Complex64| -> Complex64 {
            let (z, dz) = piece.at(s);
            let slope = match chart {
                Chart::Affine => m.slope(z, y),
                Chart::Inverted => m.slope_inverted(z, y),
            };
            slope * dz
        };
        let mut s = 0.0;
        let mut h: f64 = 0.01;
        while s < 1.0 {
            if steps >= opts.max_steps {
                return Err(Error::StepUnderflow(format!("{} (step budget exhausted)", piece.at(s).0)));
            }
            h = h.min(1.0 - s);
            let (next, err) = dopri_step(&|s, y| f(chart, s, y), s, y, h);
            let scale = opts.atol + opts.rtol * y.norm().max(next.norm());
            let ratio = err / scale;
            if ratio <= 1.0 && next.is_finite() {
                s += h;
                y = next;
                steps += 1;
                if y.norm() > 1.0 {
                    y = y.inv();
                    chart = match chart {
                        Chart::Affine => Chart::Inverted,
                        Chart::Inverted => Chart::Affine,
                    };
                }
            }
            let factor = if ratio == 0.0 || !ratio.is_finite() {
                if ratio == 0.0 { 5.0 } else { 0.2 }
            } else {
                (0.9 * ratio.powf(-0.2)).clamp(0.2, 5.0)
            };
            h *= factor;
            if h < opts.min_step && s < 1.0 {
                return Err(Error::StepUnderflow(format!("{}", piece.at(s).0)));
            }
        }
    }
    Ok(match chart {
        Chart::Affine => Projective::Finite(y),
        Chart::Inverted if y == Complex64::new(0.0, 0.0) => Projective::Infinity,
        Chart::Inverted => Projective::Finite(y.inv()),
    })
}

/// One Dormand–Prince step: the fifth-order solution and the norm of the
/// embedded error estimate.
fn dopri_step(f: &dyn Fn(f64, Complex64) -> Complex64, s: f64, y: Complex64, h: f64) -> (Complex64, f64) {
    const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
    const A: [[f64; 6]; 7] = [
        [0.0; 6],
        [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
        [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
        [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
        [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
        [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
    ];
    const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
    const B4: [f64; 7] =
        [5179.0 / 57600.0, 0.0, 7571.0 / 16695.0, 393.0 / 640.0, -92097.0 / 339200.0, 187.0 / 2100.0, 1.0 / 40.0];
    let mut k = [Complex64::new(0.0, 0.0); 7];
    for i in 0..7 {
        let mut yi = y;
        for j in 0..i {
            yi += k[j] * (h * A[i][j]);
        }
        k[i] = f(s + C[i] * h, yi);
    }
    let mut y5 = y;
    let mut diff = Complex64::new(0.0, 0.0);
    for i in 0..7 {
        y5 += k[i] * (h * B5[i]);
        diff += k[i] * (h * (B5[i] - B4[i]));
    }
    (y5, diff.norm())
}
