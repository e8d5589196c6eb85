use thiserror::Error;

/// All failure modes of the library.
///
/// Scalar payloads are widened to `f64` so the enum stays non-generic.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A quaternion whose norm is too far from 1 to be silently renormalized.
    #[error("quaternion norm {norm} deviates from 1 by more than 1e-6")]
    NonUnitQuaternion { norm: f64 },

    /// A symmetric matrix without signature (2,1); its eigenvalues are reported.
    #[error("matrix does not have signature (2,1); eigenvalues {eigenvalues:?}")]
    NotAConic { eigenvalues: [f64; 3] },

    /// An argument outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Adaptive quadrature exhausted its subdivision budget.
    #[error("quadrature failed: error estimate {estimate} exceeds tolerance {tol}")]
    QuadratureFailure { tol: f64, estimate: f64 },

    /// Two eigenvalues too close for formulas that divide by their gap.
    #[error("eigenvalue gap {gap} is below {min_gap}; the requested formula is singular there")]
    DegenerateSpectrum { gap: f64, min_gap: f64 },

    /// A documented precondition was violated.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Input data that is structurally unusable (too few points, collinear, ...).
    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    /// A point set not contained in any open hemisphere.
    #[error("unbounded input: {0}")]
    Unbounded(String),

    /// Constraints that no conic of the requested kind can satisfy.
    #[error("infeasible: {0}")]
    Infeasible(String),

    /// Fixed-center solving requires the center strictly inside the hull.
    #[error("center is not strictly inside the spherical convex hull of the points")]
    CenterOutsideHull,

    /// Two redundant computation routes disagreed; indicates a library bug
    /// or catastrophically ill-conditioned input.
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),

    /// Malformed input file.
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    /// Short machine-readable tag for each variant (used by the CLI's JSON
    /// error objects).
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NonUnitQuaternion { .. } => "non_unit_quaternion",
            Error::NotAConic { .. } => "not_a_conic",
            Error::Domain(_) => "domain",
            Error::QuadratureFailure { .. } => "quadrature_failure",
            Error::DegenerateSpectrum { .. } => "degenerate_spectrum",
            Error::Precondition(_) => "precondition",
            Error::DegenerateInput(_) => "degenerate_input",
            Error::Unbounded(_) => "unbounded",
            Error::Infeasible(_) => "infeasible",
            Error::CenterOutsideHull => "center_outside_hull",
            Error::InternalInconsistency(_) => "internal_inconsistency",
            Error::Parse { .. } => "parse",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
