use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error at {path}: {message}")]
    Parse { path: String, message: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("function is not integrable: {0}")]
    NotIntegrable(String),

    #[error("quadrature did not converge on [{a}, {b}] (estimate {value:e} +/- {error:e})")]
    QuadratureFailed { a: f64, b: f64, value: f64, error: f64 },

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("function is not eventually nonnegative (negative value at radius {radius})")]
    NotEventuallyNonnegative { radius: f64 },

    #[error("tail cannot be certified: {0}")]
    TailNotCertifiable(String),

    #[error("no negative value found on [0, {window}]")]
    NoNegativePoint { window: f64 },

    #[error("already degenerate-balanced: r(f) = {r_f}, r(fhat) = {r_fhat}")]
    DegenerateBalance { r_f: f64, r_fhat: f64 },

    #[error("correction not applicable: g(0) + ghat(0) = {0} is not negative")]
    CorrectionNotApplicable(f64),

    #[error("mollifier scale {delta} too large; largest admissible scale found is {admissible:?}")]
    ScaleTooLarge { delta: f64, admissible: Option<f64> },

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("half-mass shell does not fit inside radius {0}")]
    ShellDoesNotFit(f64),

    #[error("aliasing: support condition 2*a*lambda < 1 violated ({0})")]
    Aliasing(String),

    #[error("LP error: {0}")]
    Lp(String),

    #[error("search failed: {0}")]
    Search(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
