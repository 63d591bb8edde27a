use thiserror::Error;

/// Errors raised by the model, scheme and sweep operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A domain type invariant was violated at construction.
    #[error("{ty}: {constraint} (got {field} = {value})")]
    InvalidParameter {
        ty: &'static str,
        field: &'static str,
        value: f64,
        constraint: &'static str,
    },

    #[error("distortion pair lies in the trivial region (d2 >= 1 - rho^2 (1 - d1))")]
    TrivialRegion,

    #[error("distortion pair lies in the non-trivial region (d2 < 1 - rho^2 (1 - d1))")]
    NonTrivialRegion,

    #[error("nu = {nu} lies outside the feasible interval [{lo}, {hi}]")]
    InfeasibleNu { nu: f64, lo: f64, hi: f64 },

    #[error("common-layer rate denominator is not positive ({value}) at nu = {nu}")]
    NonPositiveDenominator { nu: f64, value: f64 },

    #[error("{what} = {value} is outside its valid range")]
    OutOfRange { what: &'static str, value: f64 },

    #[error("f(lo) = {f_lo} and f(hi) = {f_hi} do not bracket a root")]
    NoSignChange { f_lo: f64, f_hi: f64 },

    #[error("constraint set is empty: {0}")]
    Infeasible(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
