//! One function per subcommand. Each takes a validated document and
//! returns a serializable report.

use super::document::{OdeDocument, Point, ScalarValue, SeriesDocument, FORMAT_VERSION};
use crate::classify::{classify_infinity, classify_point, euler_characterize, EulerReport, PointKind};
use crate::error::{Error, Result};
use crate::frobenius::{formal_probe, residual, residual_from, solve_euler, solve_ode, wronskian_of_system, FundamentalSystem, ProbeStatus, Residual};
use crate::indicial::{CaseTag, IndicialData};
use crate::nonhom::variation_of_parameters;
use crate::ode::{to_frobenius_form, Ode};
use crate::riccati::{global_holonomy, inverse_riccati_model, riccati_model, standard_loops, ContinuationOptions, MoebiusMap, Projective};
use crate::series::{GeneralizedSeries, Scalar};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Command-line overrides applied on top of a document's own options.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub terms: Option<usize>,
    pub mode: Option<super::document::Mode>,
    pub point: Option<String>,
    pub at_infinity: bool,
}

impl Overrides {
    pub fn apply(&self, mut doc: OdeDocument) -> Result<OdeDocument> {
        if let Some(n) = self.terms {
            doc.options.trunc = n;
        }
        if let Some(m) = self.mode {
            doc.options.mode = m;
        }
        if let Some(p) = &self.point {
            doc.point = ScalarValue::Rational(p.clone());
        }
        if self.at_infinity {
            doc.point = ScalarValue::Rational("infinity".into());
        }
        doc.validate()?;
        Ok(doc)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PointReport {
    pub kind: PointKind,
    pub pole_orders: Vec<Option<i64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decided_through: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassifyReport {
    pub format: u32,
    pub kind: &'static str,
    pub point: PointReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub infinity: Option<PointReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub euler: Option<EulerReport>,
}

pub fn cmd_classify(doc: &OdeDocument) -> Result<ClassifyReport> {
    let at_point = classify_point(&doc.to_ode()?)?;
    let unmoved = doc.to_ode_unmoved()?;
    let (infinity, euler) = if unmoved.is_polynomial() {
        let inf = match doc.point()? {
            Point::Infinity => classify_point(&unmoved)?,
            Point::Finite(_) => classify_infinity(&unmoved)?,
        };
        (Some(inf), Some(euler_characterize(&unmoved)?))
    } else {
        (None, None)
    };
    let report = |c: crate::classify::SingularityClass| PointReport { kind: c.kind, pole_orders: c.pole_orders, decided_through: c.decided_through };
    Ok(ClassifyReport { format: FORMAT_VERSION, kind: "classification", point: report(at_point), infinity: infinity.map(report), euler })
}

#[derive(Clone, Debug, Serialize)]
pub struct IndicialReport {
    pub format: u32,
    pub kind: &'static str,
    /// Ascending coefficients of the monic indicial polynomial.
    pub polynomial: Vec<ScalarValue>,
    pub roots: Vec<ScalarValue>,
    pub case: CaseTag,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub borderline: Option<CaseTag>,
}

impl From<&IndicialData> for IndicialReport {
    fn from(d: &IndicialData) -> Self {
        IndicialReport {
            format: FORMAT_VERSION,
            kind: "indicial",
            polynomial: d.poly.iter().map(ScalarValue::from).collect(),
            roots: d.roots.iter().map(ScalarValue::from).collect(),
            case: d.case,
            borderline: d.borderline,
        }
    }
}

pub fn cmd_indicial(doc: &OdeDocument) -> Result<IndicialReport> {
    let form = to_frobenius_form(&doc.to_ode()?, doc.options.trunc)?;
    Ok(IndicialReport::from(&IndicialData::from_form(&form)))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub valuation: i64,
    pub reliable_through: i64,
    pub max_relative: f64,
}

impl From<&Residual> for ResidualReport {
    fn from(r: &Residual) -> Self {
        ResidualReport { valuation: r.valuation, reliable_through: r.reliable_through, max_relative: r.max_relative }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LeadingTerm {
    pub exponent: ScalarValue,
    pub log_power: u32,
    pub coefficient: ScalarValue,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConstantReport {
    pub solution: usize,
    pub partner: usize,
    pub value: ScalarValue,
}

/// Everything `solve` computes, with the equation it was computed from.
#[derive(Clone, Debug, Serialize)]
pub struct SolutionBundle {
    pub format: u32,
    pub kind: &'static str,
    pub equation: OdeDocument,
    pub indicial: IndicialReport,
    pub case: CaseTag,
    /// Exponent each solution's residual is measured from.
    pub exponents: Vec<ScalarValue>,
    pub solutions: Vec<SeriesDocument>,
    pub wronskian_leading: Option<LeadingTerm>,
    pub constants: Vec<ConstantReport>,
    pub residuals: Vec<ResidualReport>,
    pub borderline: bool,
}

fn leading_term(g: &GeneralizedSeries) -> Option<LeadingTerm> {
    g.leading().map(|(e, m, c)| LeadingTerm { exponent: ScalarValue::from(&e), log_power: m, coefficient: ScalarValue::from(&c) })
}

fn system_bundle(doc: &OdeDocument, e: &Ode, fs: &FundamentalSystem) -> Result<SolutionBundle> {
    let residuals = fs.residuals(e)?;
    Ok(SolutionBundle {
        format: FORMAT_VERSION,
        kind: "solution",
        equation: doc.canonical()?,
        indicial: IndicialReport::from(&fs.indicial),
        case: fs.case,
        exponents: fs.exponents.iter().map(ScalarValue::from).collect(),
        solutions: fs.solutions.iter().map(SeriesDocument::from).collect(),
        wronskian_leading: leading_term(&wronskian_of_system(fs)),
        constants: fs
            .constants
            .iter()
            .map(|c| ConstantReport { solution: c.solution, partner: c.partner, value: ScalarValue::from(&c.value) })
            .collect(),
        residuals: residuals.iter().map(ResidualReport::from).collect(),
        borderline: fs.borderline,
    })
}

fn homogeneous_system(doc: &OdeDocument) -> Result<(Ode, FundamentalSystem)> {
    let e = doc.to_ode()?;
    if classify_point(&e)?.kind == PointKind::IrregularSingular {
        return Err(Error::IrregularPoint("no Frobenius basis exists here; run `odeseries probe` for formal solutions".into()));
    }
    let homogeneous = e.clone().without_rhs();
    let fs = solve_ode(&homogeneous, doc.options.trunc)?;
    Ok((homogeneous, fs))
}

pub fn cmd_solve(doc: &OdeDocument) -> Result<SolutionBundle> {
    let (e, fs) = homogeneous_system(doc)?;
    system_bundle(doc, &e, &fs)
}

#[derive(Clone, Debug, Serialize)]
pub struct ProbeReport {
    pub format: u32,
    pub kind: &'static str,
    pub status: ProbeStatus,
    /// `Σ_d P_d(m) a_{m+shift-d} = 0`; `P_d` by ascending powers of `m`.
    pub recurrence: Vec<Vec<ScalarValue>>,
    pub shift: i64,
    /// `null` when every candidate terminates or decays superexponentially.
    pub radius_estimate: Option<f64>,
    pub ratios: Vec<f64>,
    pub candidates: Vec<Vec<ScalarValue>>,
}

pub fn cmd_probe(doc: &OdeDocument) -> Result<ProbeReport> {
    let p = formal_probe(&doc.to_ode()?, doc.options.trunc);
    Ok(ProbeReport {
        format: FORMAT_VERSION,
        kind: "probe",
        status: p.status,
        recurrence: p.recurrence.iter().map(|row| row.iter().map(ScalarValue::from).collect()).collect(),
        shift: p.shift,
        radius_estimate: p.radius_estimate.is_finite().then_some(p.radius_estimate),
        ratios: p.ratios,
        candidates: p.candidates.iter().map(|s| s.coeffs().iter().map(ScalarValue::from).collect()).collect(),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct EulerSolveReport {
    pub format: u32,
    pub kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub characterization: Option<EulerReport>,
    /// Whether the Frobenius form at the point has constant coefficients.
    pub constant_coefficients: bool,
    pub roots: Vec<ScalarValue>,
    pub case: CaseTag,
    pub solutions: Vec<SeriesDocument>,
}

pub fn cmd_euler(doc: &OdeDocument) -> Result<EulerSolveReport> {
    let e = doc.to_ode()?;
    let unmoved = doc.to_ode_unmoved()?;
    let characterization = if unmoved.is_polynomial() { Some(euler_characterize(&unmoved)?) } else { None };
    let form = to_frobenius_form(&e, doc.options.trunc)?;
    if !form.is_euler() {
        return Err(Error::Precondition("the Frobenius form at this point is not an Euler equation".into()));
    }
    let fs = solve_euler(&form, doc.options.trunc)?;
    Ok(EulerSolveReport {
        format: FORMAT_VERSION,
        kind: "euler",
        characterization,
        constant_coefficients: true,
        roots: fs.indicial.roots.iter().map(ScalarValue::from).collect(),
        case: fs.case,
        solutions: fs.solutions.iter().map(SeriesDocument::from).collect(),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct GeneratorReport {
    /// `[a, b, c, d]` of `t ↦ (a t + b)/(c t + d)`, each as `[re, im]`.
    pub matrix: [[f64; 2]; 4],
    pub trace: [f64; 2],
    pub multipliers: [[f64; 2]; 2],
    /// Fixed points as `[re, im]`, or `null` for `∞`.
    pub fixed_points: Vec<Option<[f64; 2]>>,
    pub defect: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct HolonomyReport {
    pub format: u32,
    pub kind: &'static str,
    /// `u'/u` or `u/u'`.
    pub variable: &'static str,
    pub base: [f64; 2],
    pub sigma: Vec<[f64; 2]>,
    pub infinity_in_sigma: bool,
    pub generators: Vec<GeneratorReport>,
}

fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

fn generator_report(map: &MoebiusMap, defect: f64) -> GeneratorReport {
    GeneratorReport {
        matrix: map.m.map(pair),
        trace: pair(map.trace()),
        multipliers: map.multipliers().map(pair),
        fixed_points: map
            .fixed_points()
            .into_iter()
            .map(|p| match p {
                Projective::Finite(z) => Some(pair(z)),
                Projective::Infinity => None,
            })
            .collect(),
        defect,
    }
}

/// Holonomy of the Riccati model around each finite ramification point.
///
/// Without an explicit base the loops start at `1 + max |σ|` on the real axis.
pub fn cmd_holonomy(doc: &OdeDocument, base: Option<Complex64>, inverse: bool) -> Result<HolonomyReport> {
    if doc.order != 2 {
        return Err(Error::Precondition("holonomy is defined for second-order equations".into()));
    }
    let e = doc.to_ode_unmoved()?;
    let model = if inverse { inverse_riccati_model(&e)? } else { riccati_model(&e)? };
    let z0 = base.unwrap_or_else(|| Complex64::new(1.0 + model.sigma.iter().map(|s| s.norm()).fold(0.0, f64::max), 0.0));
    let mut opts = ContinuationOptions::default();
    if let Some(t) = &doc.options.tolerances {
        opts.rtol = t.rtol;
        opts.atol = t.atol;
        opts.clearance = t.clearance;
    }
    let loops = standard_loops(&model, z0);
    let gens = global_holonomy(&model, z0, &loops, &opts)?;
    Ok(HolonomyReport {
        format: FORMAT_VERSION,
        kind: "holonomy",
        variable: if inverse { "u/u'" } else { "u'/u" },
        base: pair(z0),
        sigma: model.sigma.iter().copied().map(pair).collect(),
        infinity_in_sigma: model.infinity_in_sigma,
        generators: gens.iter().map(|g| generator_report(&g.map, g.defect)).collect(),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ParticularBundle {
    pub format: u32,
    pub kind: &'static str,
    pub equation: OdeDocument,
    pub particular: SeriesDocument,
    pub integrands: Vec<SeriesDocument>,
    pub residual: ResidualReport,
}

pub fn cmd_particular(doc: &OdeDocument) -> Result<ParticularBundle> {
    if doc.rhs.is_none() {
        return Err(Error::validation("rhs", "variation of parameters needs a right-hand side"));
    }
    let (_, fs) = homogeneous_system(doc)?;
    let e = doc.to_ode()?;
    let ps = variation_of_parameters(&e, &fs)?;
    let r = residual(&e, &ps.y_p)?;
    Ok(ParticularBundle {
        format: FORMAT_VERSION,
        kind: "particular",
        equation: doc.canonical()?,
        particular: SeriesDocument::from(&ps.y_p),
        integrands: ps.c_primes.iter().map(SeriesDocument::from).collect(),
        residual: ResidualReport::from(&r),
    })
}

/// A grid on the real axis for `eval`.
#[derive(Clone, Debug)]
pub struct Grid {
    pub from: f64,
    pub to: f64,
    pub points: usize,
}

impl Grid {
    pub fn values(&self) -> Vec<f64> {
        match self.points {
            0 => Vec::new(),
            1 => vec![self.from],
            n => (0..n).map(|i| self.from + (self.to - self.from) * i as f64 / (n - 1) as f64).collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EvalRow {
    pub x: f64,
    /// `[re, im]`, or `null` where the series cannot be evaluated.
    pub value: Option<[f64; 2]>,
    /// Change in the value when the last half of the known terms is dropped.
    pub tail: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct EvalTable {
    pub format: u32,
    pub kind: &'static str,
    pub solution: usize,
    pub rows: Vec<EvalRow>,
}

impl EvalTable {
    /// Whitespace-separated columns for plotting tools: `x value`, plus an
    /// imaginary column when any value is complex.
    pub fn to_text(&self) -> String {
        let complex = self.rows.iter().any(|r| r.value.is_some_and(|v| v[1] != 0.0));
        let mut out = String::new();
        for r in &self.rows {
            let line = match (r.value, complex) {
                (Some([re, im]), true) => format!("{:.17e}\t{:.17e}\t{:.17e}\n", r.x, re, im),
                (Some([re, _]), false) => format!("{:.17e}\t{:.17e}\n", r.x, re),
                (None, _) => format!("{:.17e}\tnan\n", r.x),
            };
            out.push_str(&line);
        }
        out
    }
}

/// Evaluates solution `index` of the fundamental system on a real grid.
///
/// Points are taken on the principal branch, so negative `x` picks up the
/// phase `e^{iπρ}` of non-integer exponents.
pub fn cmd_eval(doc: &OdeDocument, index: usize, grid: &Grid) -> Result<EvalTable> {
    let (_, fs) = homogeneous_system(doc)?;
    let g = fs
        .solutions
        .get(index)
        .ok_or_else(|| Error::validation("solution", format!("index {index} out of range (order {})", fs.order())))?
        .to_float();
    let half_trunc = g.min_trunc().unwrap_or(0) / 2;
    let short = g.truncate(half_trunc);
    let rows = grid
        .values()
        .into_iter()
        .map(|x| {
            let z = Complex64::new(x, 0.0);
            let full = g.evaluate(z).ok().filter(|v| v.is_finite());
            let tail = full.zip(short.evaluate(z).ok()).map(|(a, b)| (a - b).norm());
            EvalRow { x, value: full.map(pair), tail }
        })
        .collect();
    Ok(EvalTable { format: FORMAT_VERSION, kind: "evaluation", solution: index, rows })
}

/// The fields of a solution or particular bundle that `residual` re-checks.
#[derive(Clone, Debug, Deserialize)]
pub struct BundleInput {
    pub kind: String,
    pub equation: OdeDocument,
    #[serde(default)]
    pub exponents: Vec<ScalarValue>,
    #[serde(default)]
    pub solutions: Vec<SeriesDocument>,
    #[serde(default)]
    pub residuals: Vec<ResidualReport>,
    pub particular: Option<SeriesDocument>,
    pub residual: Option<ResidualReport>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ResidualCheck {
    pub format: u32,
    pub kind: &'static str,
    pub recomputed: Vec<ResidualReport>,
    /// Whether every recomputed valuation and reliable bound equals the
    /// recorded one.
    pub reproduced: bool,
}

/// Recomputes the residuals recorded in a bundle.
pub fn cmd_residual(bundle: &BundleInput) -> Result<ResidualCheck> {
    bundle.equation.validate()?;
    let e = bundle.equation.to_ode()?;
    let (recomputed, recorded) = match bundle.kind.as_str() {
        "solution" => {
            if bundle.exponents.len() != bundle.solutions.len() {
                return Err(Error::validation("exponents", "one exponent per solution is required"));
            }
            let homogeneous = e.without_rhs();
            let mut out = Vec::with_capacity(bundle.solutions.len());
            for (s, base) in bundle.solutions.iter().zip(&bundle.exponents) {
                let base: Scalar = base.to_scalar()?;
                out.push(ResidualReport::from(&residual_from(&homogeneous, &s.to_series()?, &base)?));
            }
            (out, bundle.residuals.clone())
        }
        "particular" => {
            let y = bundle.particular.as_ref().ok_or_else(|| Error::validation("particular", "missing"))?;
            let r = ResidualReport::from(&residual(&e, &y.to_series()?)?);
            (vec![r], bundle.residual.iter().cloned().collect())
        }
        other => return Err(Error::validation("kind", format!("cannot re-check a `{other}` document"))),
    };
    let reproduced = recomputed.len() == recorded.len()
        && recomputed.iter().zip(&recorded).all(|(a, b)| a.valuation == b.valuation && a.reliable_through == b.reliable_through);
    Ok(ResidualCheck { format: FORMAT_VERSION, kind: "residual", recomputed, reproduced })
}
