use thiserror::Error;

use crate::expalg::Cplx;

#[derive(Debug, Error)]
pub enum Error {
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("polynomial degree {degree} exceeds the cap of {cap}")]
    DegreeCap { degree: usize, cap: usize },

    #[error("parameter domain violated: {0}")]
    ParameterDomain(String),

    #[error("degenerate parameters: {0}")]
    Degenerate(String),

    #[error("kernel pole hit at z = {0}")]
    PoleHit(Cplx),

    #[error("ill-conditioned discretization: {0}")]
    IllConditioned(String),

    #[error("eigen-iteration failed to converge: {0}")]
    NoConvergence(String),

    #[error("rank collapse: sigma_{index} = {sigma:e} is below the noise floor")]
    RankCollapse { index: usize, sigma: f64 },

    #[error("leading coefficient vanishes through the available order")]
    ZeroLeading,

    #[error("convention mismatch: {0}")]
    ConventionMismatch(String),

    #[error("coefficients are not gauge-normalized: {0}")]
    NotNormalized(String),

    #[error("commutation residual {residual:e} exceeds {tolerance:e} for {case}")]
    ResidueCheck {
        case: String,
        residual: f64,
        tolerance: f64,
    },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("I/O failure: {0}")]
    Io(#[from] std::io::Error),

    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit status used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::PoleHit(_)
            | Error::IllConditioned(_)
            | Error::NoConvergence(_)
            | Error::RankCollapse { .. }
            | Error::ResidueCheck { .. } => 3,
            Error::Io(_) => 1,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
