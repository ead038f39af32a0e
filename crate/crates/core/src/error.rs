use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch in {context}: expected {expected}, found {found}")]
    Shape {
        context: String,
        expected: String,
        found: String,
    },

    #[error("non-finite entry in {0}")]
    NonFinite(String),

    #[error("invalid Gram matrix: {0}")]
    Gram(String),

    #[error("singular matrix in {context} (reciprocal condition {rcond:.3e})")]
    Singular { context: String, rcond: f64 },

    /// The stacked Dirichlet system is singular: the point lies in the spectrum of A0 (or Ã0).
    #[error("λ = {lambda} is not in the resolvent set of A0 (reciprocal condition {rcond:.3e})")]
    NotResolventPoint { lambda: Complex64, rcond: f64 },

    #[error("λ = {lambda} lies in the spectrum of the restricted operator or the boundary condition is degenerate (reciprocal condition {rcond:.3e})")]
    RestrictedSingular { lambda: Complex64, rcond: f64 },

    /// `I - B2 M(λ) B1` is singular, so λ is an eigenvalue of A_{B1B2}.
    #[error("birman-schwinger singular at λ = {lambda}: I - B2 M(λ) B1 has reciprocal condition {rcond:.3e}")]
    BirmanSchwinger { lambda: Complex64, rcond: f64 },

    #[error("model invariant '{invariant}' violated: defect {defect:.3e} exceeds {tolerance:.1e}")]
    Invariant {
        invariant: &'static str,
        defect: f64,
        tolerance: f64,
    },

    #[error("λ = {lambda} is a pole (Dirichlet eigenvalue) of the analytic Dirichlet-to-Neumann map")]
    Pole { lambda: Complex64 },

    #[error("contract violated: {0}")]
    Contract(String),

    #[error("no convergence: {0}")]
    Convergence(String),

    #[error("model generation failed: {0}")]
    Generation(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn shape(context: impl Into<String>, expected: impl ToString, found: impl ToString) -> Self {
        Error::Shape {
            context: context.into(),
            expected: expected.to_string(),
            found: found.to_string(),
        }
    }

    /// Short machine-readable reason, used by the command-line front end.
    pub fn reason(&self) -> &'static str {
        match self {
            Error::Shape { .. } => "shape",
            Error::NonFinite(_) => "non-finite",
            Error::Gram(_) => "gram",
            Error::Singular { .. } => "singular",
            Error::NotResolventPoint { .. } => "not-resolvent-point",
            Error::RestrictedSingular { .. } => "restricted-singular",
            Error::BirmanSchwinger { .. } => "birman-schwinger singular",
            Error::Invariant { .. } => "invariant",
            Error::Pole { .. } => "pole",
            Error::Contract(_) => "contract",
            Error::Convergence(_) => "convergence",
            Error::Generation(_) => "generation",
            Error::Parse(_) => "parse",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
            Error::Csv(_) => "csv",
        }
    }
}
