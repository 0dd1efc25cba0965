use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("no sign change on [{a}, {b}] (f(a) = {fa}, f(b) = {fb})")]
    NoSignChange { a: f64, b: f64, fa: f64, fb: f64 },

    #[error("exceeded {iterations} iterations (last estimate {last})")]
    MaxIterExceeded { iterations: usize, last: f64 },

    #[error("quadrature stopped after {subdivisions} subdivisions with error estimate {error:e} (value {value})")]
    SubdivisionLimit {
        subdivisions: usize,
        value: f64,
        error: f64,
    },

    #[error("power series has a vanishing linear coefficient")]
    DegenerateSeries,

    #[error("{what} = {value} is outside the supported domain")]
    OutOfDomain { what: &'static str, value: f64 },

    #[error("local volatility is not twice differentiable at S = {spot}")]
    NonDifferentiable { spot: f64 },

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

impl Error {
    pub(crate) fn domain(what: &'static str, value: f64) -> Self {
        Error::OutOfDomain { what, value }
    }
}
