use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;
use std::sync::Arc;

use crate::ops::{self, OpKind};
use crate::{Tensor, TensorError};

/// Recording of primitive operations in topological order.
///
/// One tape per training step; tapes are single-threaded and dropped
/// wholesale. Recording happens implicitly: any operation with at least one
/// tracked operand appends a node.
#[derive(Clone, Default)]
pub struct Tape {
    inner: Rc<RefCell<TapeInner>>,
}

#[derive(Default)]
struct TapeInner {
    nodes: Vec<Node>,
}

pub(crate) struct Node {
    pub shape: Vec<usize>,
    pub data: Arc<Vec<f64>>,
    pub kind: OpKind,
    pub args: Vec<Arg>,
}

/// An operand as recorded: either an earlier node or an untracked constant.
#[derive(Clone)]
pub(crate) enum Arg {
    Node(usize),
    Const {
        shape: Vec<usize>,
        data: Arc<Vec<f64>>,
    },
}

impl Tape {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn same(a: &Tape, b: &Tape) -> bool {
        Rc::ptr_eq(&a.inner, &b.inner)
    }

    pub fn len(&self) -> usize {
        self.inner.borrow().nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Registers `values` as a differentiable leaf on this tape.
    pub fn leaf(&self, values: &Tensor) -> Tensor {
        let id = self.push(
            values.shape().to_vec(),
            values.data_arc(),
            OpKind::Leaf,
            Vec::new(),
        );
        Tensor::with_node(
            values.shape().to_vec(),
            values.data_arc(),
            Some((self.clone(), id)),
        )
    }

    pub(crate) fn push(
        &self,
        shape: Vec<usize>,
        data: Arc<Vec<f64>>,
        kind: OpKind,
        args: Vec<Arg>,
    ) -> usize {
        let mut inner = self.inner.borrow_mut();
        inner.nodes.push(Node {
            shape,
            data,
            kind,
            args,
        });
        inner.nodes.len() - 1
    }

    /// Tensor view of node `id`.
    pub(crate) fn node_tensor(&self, id: usize) -> Tensor {
        let inner = self.inner.borrow();
        let node = &inner.nodes[id];
        Tensor::with_node(node.shape.clone(), node.data.clone(), Some((self.clone(), id)))
    }

    fn arg_tensor(&self, arg: &Arg) -> Tensor {
        match arg {
            Arg::Node(id) => self.node_tensor(*id),
            Arg::Const { shape, data } => Tensor::with_node(shape.clone(), data.clone(), None),
        }
    }

    /// Reverse-mode gradients of a scalar `output` with respect to every
    /// tracked tensor it depends on. Fan-out accumulates by summation.
    ///
    /// The returned gradients are tracked tensors on this same tape, so a
    /// second `backward` over an expression built from them differentiates
    /// through the first pass.
    pub fn backward(&self, output: &Tensor) -> Result<Gradients, TensorError> {
        let (tape, out_id) = output.node().ok_or(TensorError::Detached)?;
        if !Tape::same(tape, self) {
            return Err(TensorError::TapeMismatch);
        }
        if output.len() != 1 {
            return Err(TensorError::NonScalarOutput(output.shape().to_vec()));
        }
        let out_id = *out_id;
        let mut grads: HashMap<usize, Tensor> = HashMap::new();
        grads.insert(out_id, Tensor::ones(output.shape().to_vec()));
        for id in (0..=out_id).rev() {
            let Some(grad_out) = grads.get(&id).cloned() else {
                continue;
            };
            let (kind, args) = {
                let inner = self.inner.borrow();
                let node = &inner.nodes[id];
                if matches!(node.kind, OpKind::Leaf) {
                    continue;
                }
                (node.kind.clone(), node.args.clone())
            };
            let arg_tensors: Vec<Tensor> = args.iter().map(|a| self.arg_tensor(a)).collect();
            let out_tensor = self.node_tensor(id);
            let contribs = ops::vjp(&kind, &arg_tensors, &out_tensor, &grad_out)?;
            for (arg, contrib) in args.iter().zip(contribs) {
                let (Arg::Node(aid), Some(c)) = (arg, contrib) else {
                    continue;
                };
                match grads.remove(aid) {
                    Some(existing) => {
                        grads.insert(*aid, ops::add(&existing, &c)?);
                    }
                    None => {
                        grads.insert(*aid, c);
                    }
                }
            }
        }
        Ok(Gradients { grads })
    }

    /// First recorded node holding a non-finite value, for NaN diagnostics.
    pub fn first_non_finite(&self) -> Option<(usize, String)> {
        let inner = self.inner.borrow();
        for (id, node) in inner.nodes.iter().enumerate() {
            if node.data.iter().any(|v| !v.is_finite()) {
                return Some((id, format!("{:?} (shape {:?})", node.kind, node.shape)));
            }
        }
        None
    }
}

/// Gradient map produced by [`Tape::backward`], keyed by tape node.
pub struct Gradients {
    grads: HashMap<usize, Tensor>,
}

impl Gradients {
    /// Gradient with respect to `t`, or `None` when the output does not
    /// depend on it (including untracked tensors).
    pub fn wrt(&self, t: &Tensor) -> Option<&Tensor> {
        let (_, id) = t.node()?;
        self.grads.get(id)
    }
}
