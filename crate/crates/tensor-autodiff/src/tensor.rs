use std::sync::Arc;

use crate::tape::Tape;
use crate::TensorError;

/// A dense row-major `f64` array, optionally attached to a [`Tape`] node.
///
/// Tensors are immutable; operations return new tensors. Values flow through
/// `Arc`s so clones are cheap. A tensor with no node handle is a constant:
/// operations on constants stay off-tape and receive no gradient.
#[derive(Clone)]
pub struct Tensor {
    shape: Vec<usize>,
    data: Arc<Vec<f64>>,
    node: Option<(Tape, usize)>,
}

impl Tensor {
    pub fn from_vec(shape: Vec<usize>, data: Vec<f64>) -> Result<Self, TensorError> {
        let len: usize = shape.iter().product();
        if len != data.len() {
            return Err(TensorError::InvalidShape {
                op: "from_vec",
                shape,
                detail: format!("{} values", data.len()),
            });
        }
        Ok(Self {
            shape,
            data: Arc::new(data),
            node: None,
        })
    }

    pub fn zeros(shape: Vec<usize>) -> Self {
        let len = shape.iter().product();
        Self {
            shape,
            data: Arc::new(vec![0.0; len]),
            node: None,
        }
    }

    pub fn ones(shape: Vec<usize>) -> Self {
        Self::full(shape, 1.0)
    }

    pub fn full(shape: Vec<usize>, value: f64) -> Self {
        let len = shape.iter().product();
        Self {
            shape,
            data: Arc::new(vec![value; len]),
            node: None,
        }
    }

    /// Rank-0 constant.
    pub fn scalar(value: f64) -> Self {
        Self {
            shape: Vec::new(),
            data: Arc::new(vec![value]),
            node: None,
        }
    }

    pub(crate) fn with_node(
        shape: Vec<usize>,
        data: Arc<Vec<f64>>,
        node: Option<(Tape, usize)>,
    ) -> Self {
        Self { shape, data, node }
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn rank(&self) -> usize {
        self.shape.len()
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub(crate) fn data_arc(&self) -> Arc<Vec<f64>> {
        self.data.clone()
    }

    /// The single element of a one-element tensor.
    pub fn scalar_value(&self) -> Result<f64, TensorError> {
        if self.len() != 1 {
            return Err(TensorError::NonScalarOutput(self.shape.clone()));
        }
        Ok(self.data[0])
    }

    /// Same values with no tape attachment.
    pub fn detach(&self) -> Tensor {
        Tensor {
            shape: self.shape.clone(),
            data: self.data.clone(),
            node: None,
        }
    }

    pub fn is_tracked(&self) -> bool {
        self.node.is_some()
    }

    pub(crate) fn node(&self) -> Option<&(Tape, usize)> {
        self.node.as_ref()
    }

    pub fn has_non_finite(&self) -> bool {
        self.data.iter().any(|v| !v.is_finite())
    }
}

impl std::fmt::Debug for Tensor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let preview: Vec<f64> = self.data.iter().take(8).copied().collect();
        f.debug_struct("Tensor")
            .field("shape", &self.shape)
            .field("data", &preview)
            .field("tracked", &self.node.is_some())
            .finish()
    }
}
