use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parameter {t} outside curve domain [{lo}, {hi}]")]
    CurveDomain { t: f64, lo: f64, hi: f64 },

    #[error("malformed mesh: {}", .0.join("; "))]
    Structure(Vec<String>),

    #[error("mesh parse error at {pointer}: {message}")]
    Parse { pointer: String, message: String },

    #[error("degree {degree} exceeds the supported maximum {max}")]
    DegreeOverflow { degree: usize, max: usize },

    #[error("ill-conditioned {what} on element {element} (reciprocal condition {rcond:.3e})")]
    Conditioning {
        what: &'static str,
        element: usize,
        rcond: f64,
    },

    #[error("fan quadrature has no valid star point on element {0}")]
    StarPoint(usize),

    #[error("solver did not converge after {iterations} iterations (relative residual {residual:.3e})")]
    NoConvergence {
        iterations: usize,
        residual: f64,
        history: Vec<f64>,
    },

    #[error("direct factorisation failed: {0}")]
    Factorisation(String),

    #[error("{0}")]
    Invalid(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
