//! The versioned JSON documents read and written by the command-line tool.
//!
//! Equations and result bundles share one format so that any emitted bundle
//! can be fed back in as a regression fixture.

use crate::error::{Error, Result};
use crate::ode::{shift_to_origin, transform_to_infinity, FrobeniusForm, Ode};
use crate::series::{GeneralizedSeries, GsTerm, Scalar, Series, DEFAULT_TRUNC};
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

pub const FORMAT_VERSION: u32 = 1;

/// A number as it appears in a document.
///
/// Canonical output uses `"p/q"` for exact reals, `["p/q", "r/s"]` for exact
/// complex values and `[re, im]` for floating values. Plain JSON numbers are
/// accepted on input.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScalarValue {
    Rational(String),
    Gaussian([String; 2]),
    Complex([f64; 2]),
    Real(f64),
}

impl ScalarValue {
    /// Reads the value with its own precision: strings are exact, numbers
    /// are floating.
    pub fn to_scalar(&self) -> Result<Scalar> {
        let rational = |s: &str| Scalar::parse_rational(s).ok_or_else(|| Error::validation("scalar", format!("`{s}` is not a rational number")));
        Ok(match self {
            ScalarValue::Rational(s) => Scalar::exact(rational(s)?, BigRational::zero()),
            ScalarValue::Gaussian([re, im]) => Scalar::exact(rational(re)?, rational(im)?),
            ScalarValue::Complex([re, im]) => Scalar::float(*re, *im),
            ScalarValue::Real(x) => Scalar::float(*x, 0.0),
        })
    }

    /// Reads the value in the requested arithmetic; floating input becomes
    /// the exact rational equal to its binary value in exact mode.
    pub fn to_scalar_in(&self, mode: Mode) -> Result<Scalar> {
        let s = self.to_scalar()?;
        Ok(match mode {
            Mode::Float => s.to_float(),
            Mode::Exact if s.is_exact() => s,
            Mode::Exact => {
                let z = s.to_c64();
                Scalar::exact_from_f64(z.re, z.im).ok_or_else(|| Error::validation("scalar", format!("{z} is not finite")))?
            }
        })
    }
}

impl From<&Scalar> for ScalarValue {
    fn from(s: &Scalar) -> Self {
        if s.is_exact() {
            let (re, im) = s.to_rational_strings();
            if im == "0" {
                ScalarValue::Rational(re)
            } else {
                ScalarValue::Gaussian([re, im])
            }
        } else {
            ScalarValue::Complex([s.re_f64(), s.im_f64()])
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Exact,
    Float,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Form {
    /// Rows `A_n, ..., A_0` of `Σ A_k(x) y^(k) = f(x)`, as polynomials.
    #[default]
    General,
    /// Series `p_{n-1}, ..., p_0` of `x^n y^(n) + Σ x^k p_k(x) y^(k) = 0`.
    Frobenius,
}

/// Step-size controls for path continuation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    pub rtol: f64,
    pub atol: f64,
    pub clearance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    #[serde(default = "default_trunc")]
    pub trunc: usize,
    #[serde(default)]
    pub mode: Mode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<Tolerances>,
}

fn default_trunc() -> usize {
    DEFAULT_TRUNC
}

impl Default for Options {
    fn default() -> Self {
        Options { trunc: DEFAULT_TRUNC, mode: Mode::Exact, tolerances: None }
    }
}

fn origin() -> ScalarValue {
    ScalarValue::Rational("0".into())
}

/// A linear equation of order two or three at a chosen point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OdeDocument {
    pub format: u32,
    pub order: usize,
    #[serde(default)]
    pub form: Form,
    /// A finite point or the string `"infinity"`.
    #[serde(default = "origin")]
    pub point: ScalarValue,
    /// Coefficient rows, highest derivative first; entry `i` multiplies `x^i`.
    pub coeffs: Vec<Vec<ScalarValue>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rhs: Option<Vec<ScalarValue>>,
    #[serde(default)]
    pub options: Options,
}

/// Where the equation is to be studied.
#[derive(Clone, Debug, PartialEq)]
pub enum Point {
    Finite(Scalar),
    Infinity,
}

impl OdeDocument {
    /// Parses and validates a document, reporting the position of syntax
    /// errors.
    pub fn parse(text: &str) -> Result<Self> {
        let doc: OdeDocument = serde_json::from_str(text).map_err(located)?;
        doc.validate()?;
        Ok(doc)
    }

    pub fn validate(&self) -> Result<()> {
        if self.format != FORMAT_VERSION {
            return Err(Error::validation("format", format!("unsupported version {}", self.format)));
        }
        if !(2..=3).contains(&self.order) {
            return Err(Error::validation("order", format!("must be 2 or 3, got {}", self.order)));
        }
        let rows = match self.form {
            Form::General => self.order + 1,
            Form::Frobenius => self.order,
        };
        if self.coeffs.len() != rows {
            return Err(Error::validation("coeffs", format!("expected {rows} rows, got {}", self.coeffs.len())));
        }
        let n = self.options.trunc;
        for (i, row) in self.coeffs.iter().enumerate().chain(self.rhs.iter().map(|r| (rows, r))) {
            let field = if i == rows { "rhs".to_string() } else { format!("coeffs[{i}]") };
            if row.len() > n + 1 {
                return Err(Error::validation(field, format!("{} entries exceed trunc + 1 = {}", row.len(), n + 1)));
            }
            for (j, v) in row.iter().enumerate() {
                v.to_scalar().map_err(|e| Error::validation(format!("{field}[{j}]"), e.to_string()))?;
            }
        }
        if self.form == Form::General && self.coeffs.first().is_some_and(|lead| lead.iter().all(|v| v.to_scalar().is_ok_and(|s| s.is_zero()))) {
            return Err(Error::validation("coeffs[0]", "leading coefficient is identically zero"));
        }
        if self.form == Form::Frobenius && self.rhs.is_some() {
            return Err(Error::validation("rhs", "the Frobenius form is homogeneous"));
        }
        self.point()?;
        Ok(())
    }

    pub fn point(&self) -> Result<Point> {
        match &self.point {
            ScalarValue::Rational(s) if s.trim() == "infinity" => Ok(Point::Infinity),
            v => v.to_scalar_in(self.options.mode).map(Point::Finite).map_err(|e| Error::validation("point", e.to_string())),
        }
    }

    fn row(&self, values: &[ScalarValue]) -> Result<Vec<Scalar>> {
        values.iter().map(|v| v.to_scalar_in(self.options.mode)).collect()
    }

    /// The equation in its original coordinate, before moving to `point`.
    pub fn to_ode_unmoved(&self) -> Result<Ode> {
        let n = self.options.trunc;
        match self.form {
            Form::General => {
                let rows = self.coeffs.iter().map(|r| self.row(r)).collect::<Result<Vec<_>>>()?;
                let e = Ode::from_polynomials(rows, n)?;
                Ok(match &self.rhs {
                    Some(f) => e.with_rhs(Series::from_coeffs(self.row(f)?, n)),
                    None => e,
                })
            }
            Form::Frobenius => {
                let mut p = self.coeffs.iter().map(|r| Ok(Series::from_coeffs(self.row(r)?, n))).collect::<Result<Vec<_>>>()?;
                p.reverse();
                Ok(FrobeniusForm::new(p)?.to_ode())
            }
        }
    }

    /// The equation re-centred so that `point` sits at the origin.
    pub fn to_ode(&self) -> Result<Ode> {
        let e = self.to_ode_unmoved()?;
        match self.point()? {
            Point::Finite(x0) if x0.is_zero() => Ok(e),
            _ if self.form == Form::Frobenius => Err(Error::validation("point", "a Frobenius form is given at the origin")),
            Point::Finite(x0) => Ok(shift_to_origin(&e, &x0)),
            Point::Infinity => transform_to_infinity(&e),
        }
    }

    /// The same document with every number in canonical spelling for its
    /// arithmetic mode.
    pub fn canonical(&self) -> Result<Self> {
        let canon = |row: &Vec<ScalarValue>| -> Result<Vec<ScalarValue>> { Ok(self.row(row)?.iter().map(ScalarValue::from).collect()) };
        let point = match self.point()? {
            Point::Infinity => ScalarValue::Rational("infinity".into()),
            Point::Finite(x) => ScalarValue::from(&x),
        };
        Ok(OdeDocument {
            format: self.format,
            order: self.order,
            form: self.form,
            point,
            coeffs: self.coeffs.iter().map(canon).collect::<Result<_>>()?,
            rhs: self.rhs.as_ref().map(canon).transpose()?,
            options: self.options.clone(),
        })
    }
}

/// Maps a JSON error onto a validation failure naming its position.
pub fn located(err: serde_json::Error) -> Error {
    Error::validation(format!("line {}, column {}", err.line(), err.column()), err.to_string())
}

/// One summand `x^exponent (log x)^log_power · Σ coeffs[k] x^k`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermDocument {
    pub exponent: ScalarValue,
    pub log_power: u32,
    pub trunc: usize,
    pub coeffs: Vec<ScalarValue>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesDocument {
    pub terms: Vec<TermDocument>,
}

impl From<&GeneralizedSeries> for SeriesDocument {
    fn from(g: &GeneralizedSeries) -> Self {
        let terms = g
            .terms()
            .iter()
            .map(|t| {
                let mut coeffs: Vec<ScalarValue> = t.body.coeffs().iter().map(ScalarValue::from).collect();
                while coeffs.len() > 1 && t.body.coeff(coeffs.len() - 1).is_zero() {
                    coeffs.pop();
                }
                TermDocument { exponent: ScalarValue::from(&t.exponent), log_power: t.log_power, trunc: t.body.trunc(), coeffs }
            })
            .collect();
        SeriesDocument { terms }
    }
}

impl SeriesDocument {
    pub fn to_series(&self) -> Result<GeneralizedSeries> {
        let terms = self
            .terms
            .iter()
            .map(|t| {
                if t.coeffs.len() > t.trunc + 1 {
                    return Err(Error::validation("terms", "more coefficients than trunc + 1"));
                }
                let coeffs = t.coeffs.iter().map(ScalarValue::to_scalar).collect::<Result<Vec<_>>>()?;
                Ok(GsTerm { exponent: t.exponent.to_scalar()?, log_power: t.log_power, body: Series::from_coeffs(coeffs, t.trunc) })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(GeneralizedSeries::new(terms))
    }
}
