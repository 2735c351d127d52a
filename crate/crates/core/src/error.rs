use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("not superlinear: {0}")]
    NotSuperlinear(String),

    #[error("growth envelope violated: {0}")]
    GrowthViolation(String),

    #[error("hypothesis `{condition}` fails at x = {location}")]
    Hypothesis { condition: String, location: f64 },

    #[error("no drift certificate: {0}")]
    NoDriftCertificate(String),

    #[error("could not bracket a root: {0}")]
    Bracket(String),

    #[error("{what} did not converge (residual {residual:e})")]
    NoConvergence { what: String, residual: f64 },

    #[error("potential is not integrable: {0}")]
    NonIntegrable(String),

    #[error("grid too coarse: {0}")]
    GridTooCoarse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn hypothesis(condition: impl Into<String>, location: f64) -> Self {
        Error::Hypothesis {
            condition: condition.into(),
            location,
        }
    }
}
