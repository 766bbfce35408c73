use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid recurrence: {0}")]
    InvalidSpec(String),

    #[error("malformed polynomial literal: {0}")]
    PolyLiteral(String),

    #[error("no roots to bound")]
    NoRoots,

    #[error("root finder did not converge after {iterations} sweeps")]
    NoConvergence {
        iterations: usize,
        best: Vec<Complex64>,
        residuals: Vec<f64>,
    },

    #[error("stationary point")]
    StationaryPoint,

    #[error("z0 in zero set of A")]
    ZeroOfA,

    #[error("pole/indeterminate point of h")]
    HPole,

    #[error("q-discriminant formula requires B(z0)≠0")]
    ZeroB,

    #[error("use classical_discriminant")]
    QIsOne,

    #[error("alpha is not real (imaginary part {imag:e})")]
    AlphaNotReal { imag: f64 },

    #[error("degenerate: repeated-zero boundary")]
    Degenerate,

    #[error("synthetic division left remainder {remainder:e} (scale {scale:e})")]
    Remainder { remainder: f64, scale: f64 },

    #[error("rotation failed")]
    RotationFailed,

    #[error("zero root impossible for this trinomial; root finder failure")]
    ZeroRoot,

    #[error("anchor zero {label} not found: nearest computed zero at distance {distance:e}")]
    AnchorNotFound { label: String, distance: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
