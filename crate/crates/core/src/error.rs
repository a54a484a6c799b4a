use thiserror::Error;

/// Everything that can go wrong, grouped so the command-line front end can
/// map failures onto exit codes.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("truncation orders differ ({left} vs {right})")]
    TruncationMismatch { left: usize, right: usize },

    #[error("jet valuation mismatch: numerator {numerator:?}, denominator {denominator}")]
    JetValuation { numerator: Option<usize>, denominator: usize },

    #[error("not invertible: {0}")]
    NotInvertible(String),

    #[error("evaluation failed: {0}")]
    Evaluation(String),

    #[error("coefficients must be polynomials")]
    NonPolynomial,

    #[error("degenerate Moebius map (zero determinant)")]
    DegenerateMap,

    #[error("leading coefficient vanishes through the truncation order")]
    LeadingZero,

    #[error("irregular singular point: {0}")]
    IrregularPoint(String),

    #[error("not a solution: {0}")]
    NotASolution(String),

    #[error("dependent system: wronskian has no nonzero leading term")]
    DependentSystem,

    #[error("path comes within {distance:e} of a ramification point (clearance {clearance:e})")]
    Clearance { distance: f64, clearance: f64 },

    #[error("step size underflow at z = {0}")]
    StepUnderflow(String),

    #[error("holonomy fit is not Moebius: fourth-point defect {0:e}")]
    MoebiusDefect(f64),

    #[error("rational function is not a solution of the Riccati model (residual {0:e})")]
    RiccatiResidual(f64),

    #[error("quadrature path meets a singularity near {0}")]
    QuadraturePole(String),

    #[error("mathematical precondition failed: {0}")]
    Precondition(String),

    #[error("invalid document: {field}: {message}")]
    Validation { field: String, message: String },

    #[error("i/o: {0}")]
    Io(String),
}

impl Error {
    pub fn validation(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Validation { field: field.into(), message: message.into() }
    }

    /// Process exit code: 2 for malformed input, 3 for mathematical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Validation { .. } | Error::Io(_) | Error::TruncationMismatch { .. } => 2,
            _ => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
