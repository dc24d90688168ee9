use thiserror::Error;

#[derive(Debug, Error)]
pub enum TensorError {
    #[error("shape mismatch in {op}: {lhs:?} vs {rhs:?}")]
    ShapeMismatch {
        op: &'static str,
        lhs: Vec<usize>,
        rhs: Vec<usize>,
    },
    #[error("invalid shape for {op}: {shape:?} ({detail})")]
    InvalidShape {
        op: &'static str,
        shape: Vec<usize>,
        detail: String,
    },
    #[error("operands belong to different tapes")]
    TapeMismatch,
    #[error("backward requires a scalar output, got shape {0:?}")]
    NonScalarOutput(Vec<usize>),
    #[error("backward requires a tape-attached tensor")]
    Detached,
    #[error("missing parameter '{0}'")]
    MissingParam(String),
    #[error("parameter '{name}': shape {found:?} does not match {expected:?}")]
    ParamShape {
        name: String,
        expected: Vec<usize>,
        found: Vec<usize>,
    },
    #[error("gradient for unknown parameter '{0}'")]
    UnknownParam(String),
    #[error(transparent)]
    Container(#[from] container::ContainerError),
}
