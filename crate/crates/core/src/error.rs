use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("state is not normalized (squared norm {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },

    #[error("junction violates |t|^2 + |p|^2 + |f|^2 = 1 (sum {sum})")]
    Unitarity { sum: f64 },

    #[error("invalid ring geometry: {0}")]
    Geometry(String),

    #[error("invalid ring physics: {0}")]
    Physics(String),

    #[error("degenerate state: squared norm {norm_sqr} is below the noise floor")]
    DegenerateState { norm_sqr: f64 },

    #[error("outcome {0} has zero probability")]
    ZeroProbability(String),

    #[error("ring-B junctions do not satisfy the feed-forward row for {outcome}: {reason}")]
    ConstraintViolation { outcome: String, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
