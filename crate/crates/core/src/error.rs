use thiserror::Error;

use crate::C64;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("evaluation at pole {0}")]
    Pole(C64),

    #[error("recombination failed: pointwise residual {0:e}")]
    Recombination(f64),

    #[error("quadrature resolution insufficient: {0}")]
    QuadratureResolution(String),

    #[error("parameter resonant with Θ(0)")]
    ResonantParameter,

    #[error("basis mismatch: {0}")]
    BasisMismatch(String),

    #[error("zeros must be distinct (min separation {0:e})")]
    RepeatedZeros(f64),

    #[error("level set not simple")]
    LevelSetNotSimple,

    #[error("power basis rank deficient: {found} independent powers, expected {expected}")]
    RankDeficient { found: usize, expected: usize },

    #[error("non-decaying Fourier coefficients (|c_{index}| = {magnitude:e})")]
    NonDecaying { index: usize, magnitude: f64 },

    #[error("ill-conditioned Gram matrix (condition number {0:e})")]
    IllConditioned(f64),

    #[error("unitarity check failed: residual {0:e}")]
    Unitarity(f64),

    #[error("root finder failure: {0}")]
    RootFinder(String),

    #[error("degree exceeds verify limit ({degree} > {limit})")]
    DegreeLimit { degree: usize, limit: usize },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
