use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("point {re}{im:+}i is outside the domain: {reason}")]
    Domain { re: f64, im: f64, reason: String },

    #[error("evaluation hits the atom at {at}")]
    AtomCollision { at: f64 },

    #[error("evaluation hits a pole at {re}{im:+}i")]
    PoleHit { re: f64, im: f64 },

    #[error("the function vanishes at {re}{im:+}i, so -1/Q is undefined there")]
    ZeroDenominator { re: f64, im: f64 },

    #[error("{at} is an endpoint of a density piece")]
    AmbiguousBoundary { at: f64 },

    #[error("{what} did not converge: {detail}")]
    NoConvergence { what: &'static str, detail: String },

    #[error("|Q({z0})| = {residual:e} exceeds tolerance {tol:e}; not a zero")]
    NotAZero { z0: f64, residual: f64, tol: f64 },

    #[error("unclassifiable: {0}")]
    Unclassifiable(String),

    #[error("only a real root of positive type was found near {re}{im:+}i")]
    NotNonpositiveType { re: f64, im: f64 },

    #[error("path lost at tau = {tau}: {detail}")]
    PathLost { tau: f64, detail: String },

    #[error("insufficient samples: {0}")]
    InsufficientSamples(String),

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("invalid function data: {0}")]
    InvalidFunction(String),

    #[error("precondition violated: {0}")]
    Precondition(String),
}

impl Error {
    pub(crate) fn domain(z: num_complex::Complex64, reason: impl Into<String>) -> Self {
        Error::Domain {
            re: z.re,
            im: z.im,
            reason: reason.into(),
        }
    }

    pub(crate) fn pole(z: num_complex::Complex64) -> Self {
        Error::PoleHit { re: z.re, im: z.im }
    }

    /// Errors caused by numerical trouble rather than bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NoConvergence { .. } | Error::PathLost { .. } | Error::NotNonpositiveType { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
