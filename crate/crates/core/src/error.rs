use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unbounded")]
    Unbounded,
    #[error("no closed form")]
    NoClosedForm,
    #[error("invalid shape: {0}")]
    Shape(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("infeasible partner matrix")]
    InfeasiblePartnerMatrix,
    #[error("unbounded ratio")]
    UnboundedRatio,
    #[error("invalid density: {0}")]
    Density(String),
    #[error("rooms do not partition the cake: {0}")]
    NotPartition(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("json: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;
