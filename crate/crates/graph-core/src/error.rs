use thiserror::Error;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("empty graph set: {0}")]
    EmptySet(&'static str),
    #[error("invalid graph: {0}")]
    Invalid(String),
}
