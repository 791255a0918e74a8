use thiserror::Error;

/// Errors produced by the wave computations and the file layer.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The mean of `cos θ` fell below the admissible floor, so the
    /// renormalized curve would need an unbounded arclength density.
    #[error("length blow-up: mean(cos θ) = {mean_cos:e} is below {floor:e}")]
    LengthBlowUp { mean_cos: f64, floor: f64 },

    /// Two quadrature nodes of the curve are (nearly) coincident.
    #[error("quadrature unreliable: chord-arc ratio {ratio:e} is below {floor:e}")]
    QuadratureUnreliable { ratio: f64, floor: f64 },

    #[error("evaluation failure: {0}")]
    EvaluationFailure(String),

    #[error("seed failure at k = {k}: {reason}")]
    SeedFailure { k: usize, reason: String },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("corrupt branch file: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Process exit status: 1 for usage, configuration and file problems,
    /// 2 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::LengthBlowUp { .. }
            | Error::QuadratureUnreliable { .. }
            | Error::EvaluationFailure(_)
            | Error::SeedFailure { .. } => 2,
            Error::InvalidInput(_) | Error::Config(_) | Error::Parse(_) | Error::Io(_) | Error::Json(_) | Error::Csv(_) => 1,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
