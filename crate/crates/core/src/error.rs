use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("validation error: {0}")]
    Validation(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("insufficient data: need more than {required} observations, got {available}")]
    InsufficientData { required: usize, available: usize },

    #[error("singular design matrix: {0}")]
    SingularDesign(String),

    #[error("undefined statistic: {0}")]
    UndefinedStatistic(String),

    #[error("AR(1) iteration did not converge after {iterations} iterations (last rho = {last_rho}, last coefficients = {last_coefficients:?})")]
    Convergence {
        iterations: usize,
        last_rho: f64,
        last_coefficients: Vec<f64>,
    },

    #[error("explosive disturbance: |rho| = {rho} >= 1")]
    ExplosiveDisturbance { rho: f64 },

    #[error("input error: {0}")]
    Input(String),

    #[error("I/O error: {0}")]
    Io(String),
}

/// Coarse failure classes used for process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Data,
    Numeric,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Validation(_)
            | Error::Domain(_)
            | Error::InsufficientData { .. }
            | Error::Input(_)
            | Error::Io(_) => ErrorClass::Data,
            Error::SingularDesign(_)
            | Error::UndefinedStatistic(_)
            | Error::Convergence { .. }
            | Error::ExplosiveDisturbance { .. } => ErrorClass::Numeric,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Input(e.to_string())
    }
}
