//! Primitive operations and their reverse-mode derivative rules.
//!
//! Every rule in [`vjp`] is written in terms of these same primitives, so
//! gradient computations are themselves recorded and differentiable.

use std::sync::Arc;

use crate::kernels;
use crate::tape::{Arg, Tape};
use crate::{Tensor, TensorError};

#[derive(Clone, Debug)]
pub(crate) enum OpKind {
    Leaf,
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    SafeRecip,
    Matmul,
    Tanh,
    Sigmoid,
    Exp,
    Square,
    Sqrt,
    Sum { axes: Vec<usize> },
    Mean { axes: Vec<usize> },
    SoftmaxLast,
    Concat { axis: usize },
    Narrow { axis: usize, start: usize },
    PadNarrow { axis: usize, start: usize },
    SwapAxes { a: usize, b: usize },
    Reshape,
    AddScalar,
    MulScalar(f64),
}

/// Appends a node when any input is tracked; otherwise the result stays a
/// constant. Mixing tensors from two different tapes is an error.
fn record(
    kind: OpKind,
    inputs: &[&Tensor],
    shape: Vec<usize>,
    data: Vec<f64>,
) -> Result<Tensor, TensorError> {
    let mut tape: Option<Tape> = None;
    for t in inputs {
        if let Some((tp, _)) = t.node() {
            match &tape {
                None => tape = Some(tp.clone()),
                Some(existing) if Tape::same(existing, tp) => {}
                Some(_) => return Err(TensorError::TapeMismatch),
            }
        }
    }
    let data = Arc::new(data);
    match tape {
        None => Ok(Tensor::with_node(shape, data, None)),
        Some(tp) => {
            let args = inputs
                .iter()
                .map(|t| match t.node() {
                    Some((_, id)) => Arg::Node(*id),
                    None => Arg::Const {
                        shape: t.shape().to_vec(),
                        data: t.data_arc(),
                    },
                })
                .collect();
            let id = tp.push(shape.clone(), data.clone(), kind, args);
            Ok(Tensor::with_node(shape, data, Some((tp, id))))
        }
    }
}

fn ew(
    op: &'static str,
    kind: OpKind,
    a: &Tensor,
    b: &Tensor,
    f: impl Fn(f64, f64) -> f64,
) -> Result<Tensor, TensorError> {
    if kernels::broadcast_shape(a.shape(), b.shape()).is_none() {
        return Err(TensorError::ShapeMismatch {
            op,
            lhs: a.shape().to_vec(),
            rhs: b.shape().to_vec(),
        });
    }
    let (shape, data) = kernels::ew_binary(a.shape(), a.data(), b.shape(), b.data(), f);
    record(kind, &[a, b], shape, data)
}

fn unary(kind: OpKind, a: &Tensor, f: impl Fn(f64) -> f64) -> Result<Tensor, TensorError> {
    let data = a.data().iter().map(|&v| f(v)).collect();
    record(kind, &[a], a.shape().to_vec(), data)
}

pub fn add(a: &Tensor, b: &Tensor) -> Result<Tensor, TensorError> {
    ew("add", OpKind::Add, a, b, |x, y| x + y)
}

pub fn sub(a: &Tensor, b: &Tensor) -> Result<Tensor, TensorError> {
    ew("sub", OpKind::Sub, a, b, |x, y| x - y)
}

pub fn mul(a: &Tensor, b: &Tensor) -> Result<Tensor, TensorError> {
    ew("mul", OpKind::Mul, a, b, |x, y| x * y)
}

pub fn div(a: &Tensor, b: &Tensor) -> Result<Tensor, TensorError> {
    ew("div", OpKind::Div, a, b, |x, y| x / y)
}

pub fn neg(a: &Tensor) -> Result<Tensor, TensorError> {
    unary(OpKind::Neg, a, |v| -v)
}

pub fn tanh(a: &Tensor) -> Result<Tensor, TensorError> {
    unary(OpKind::Tanh, a, f64::tanh)
}

pub fn sigmoid(a: &Tensor) -> Result<Tensor, TensorError> {
    unary(OpKind::Sigmoid, a, |v| 1.0 / (1.0 + (-v).exp()))
}

pub fn exp(a: &Tensor) -> Result<Tensor, TensorError> {
    unary(OpKind::Exp, a, f64::exp)
}

pub fn square(a: &Tensor) -> Result<Tensor, TensorError> {
    unary(OpKind::Square, a, |v| v * v)
}

pub fn sqrt(a: &Tensor) -> Result<Tensor, TensorError> {
    unary(OpKind::Sqrt, a, f64::sqrt)
}

/// `1/x` with both value and derivative defined as 0 at `x == 0`; used for
/// neighbor-count normalization where an empty sum must contribute nothing.
pub fn safe_recip(a: &Tensor) -> Result<Tensor, TensorError> {
    unary(OpKind::SafeRecip, a, |v| if v == 0.0 { 0.0 } else { 1.0 / v })
}

pub fn add_scalar(a: &Tensor, c: f64) -> Result<Tensor, TensorError> {
    unary(OpKind::AddScalar, a, |v| v + c)
}

pub fn mul_scalar(a: &Tensor, c: f64) -> Result<Tensor, TensorError> {
    unary(OpKind::MulScalar(c), a, |v| v * c)
}

/// Matrix product over the last two axes; leading axes broadcast.
pub fn matmul(a: &Tensor, b: &Tensor) -> Result<Tensor, TensorError> {
    let (ra, rb) = (a.rank(), b.rank());
    let compatible = ra >= 2
        && rb >= 2
        && a.shape()[ra - 1] == b.shape()[rb - 2]
        && kernels::broadcast_shape(&a.shape()[..ra - 2], &b.shape()[..rb - 2]).is_some();
    if !compatible {
        return Err(TensorError::ShapeMismatch {
            op: "matmul",
            lhs: a.shape().to_vec(),
            rhs: b.shape().to_vec(),
        });
    }
    let (shape, data) = kernels::matmul(a.shape(), a.data(), b.shape(), b.data());
    record(OpKind::Matmul, &[a, b], shape, data)
}

fn normalize_axes(op: &'static str, shape: &[usize], axes: &[usize]) -> Result<Vec<usize>, TensorError> {
    let mut axes = axes.to_vec();
    axes.sort_unstable();
    axes.dedup();
    if axes.iter().any(|&d| d >= shape.len()) {
        return Err(TensorError::InvalidShape {
            op,
            shape: shape.to_vec(),
            detail: format!("axes {axes:?} out of range"),
        });
    }
    Ok(axes)
}

/// Sum over `axes`; reduced axes are removed from the shape.
pub fn sum_axes(a: &Tensor, axes: &[usize]) -> Result<Tensor, TensorError> {
    let axes = normalize_axes("sum", a.shape(), axes)?;
    let (shape, data) = kernels::sum_axes(a.shape(), a.data(), &axes);
    record(OpKind::Sum { axes }, &[a], shape, data)
}

/// Sum of every element, as a rank-0 tensor.
pub fn sum_all(a: &Tensor) -> Result<Tensor, TensorError> {
    let axes: Vec<usize> = (0..a.rank()).collect();
    sum_axes(a, &axes)
}

pub fn mean_axes(a: &Tensor, axes: &[usize]) -> Result<Tensor, TensorError> {
    let axes = normalize_axes("mean", a.shape(), axes)?;
    let count: usize = axes.iter().map(|&d| a.shape()[d]).product();
    let (shape, data) = kernels::sum_axes(a.shape(), a.data(), &axes);
    let data = data.into_iter().map(|v| v / count as f64).collect();
    record(OpKind::Mean { axes }, &[a], shape, data)
}

pub fn mean_all(a: &Tensor) -> Result<Tensor, TensorError> {
    let axes: Vec<usize> = (0..a.rank()).collect();
    mean_axes(a, &axes)
}

/// Softmax over the last axis; rows sum to 1.
pub fn softmax_last(a: &Tensor) -> Result<Tensor, TensorError> {
    if a.rank() == 0 || *a.shape().last().unwrap() == 0 {
        return Err(TensorError::InvalidShape {
            op: "softmax",
            shape: a.shape().to_vec(),
            detail: "needs a non-empty last axis".into(),
        });
    }
    let data = kernels::softmax_last(a.shape(), a.data());
    record(OpKind::SoftmaxLast, &[a], a.shape().to_vec(), data)
}

pub fn concat(parts: &[&Tensor], axis: usize) -> Result<Tensor, TensorError> {
    let first = parts.first().ok_or(TensorError::InvalidShape {
        op: "concat",
        shape: vec![],
        detail: "no parts".into(),
    })?;
    for p in parts {
        let same_rank = p.rank() == first.rank() && axis < p.rank();
        let same_dims = same_rank
            && p.shape()
                .iter()
                .zip(first.shape())
                .enumerate()
                .all(|(d, (x, y))| d == axis || x == y);
        if !same_dims {
            return Err(TensorError::ShapeMismatch {
                op: "concat",
                lhs: first.shape().to_vec(),
                rhs: p.shape().to_vec(),
            });
        }
    }
    let views: Vec<(&[usize], &[f64])> = parts.iter().map(|p| (p.shape(), p.data())).collect();
    let (shape, data) = kernels::concat(&views, axis);
    record(OpKind::Concat { axis }, parts, shape, data)
}

/// Contiguous slice `start..start+len` along `axis`.
pub fn narrow(a: &Tensor, axis: usize, start: usize, len: usize) -> Result<Tensor, TensorError> {
    if axis >= a.rank() || start + len > a.shape()[axis] {
        return Err(TensorError::InvalidShape {
            op: "narrow",
            shape: a.shape().to_vec(),
            detail: format!("axis {axis}, range {start}..{}", start + len),
        });
    }
    let data = kernels::narrow(a.shape(), a.data(), axis, start, len);
    let mut shape = a.shape().to_vec();
    shape[axis] = len;
    record(OpKind::Narrow { axis, start }, &[a], shape, data)
}

fn pad_narrow(a: &Tensor, axis: usize, start: usize, full: usize) -> Result<Tensor, TensorError> {
    let data = kernels::pad_narrow(a.shape(), a.data(), axis, start, full);
    let mut shape = a.shape().to_vec();
    shape[axis] = full;
    record(OpKind::PadNarrow { axis, start }, &[a], shape, data)
}

pub fn swap_axes(t: &Tensor, a: usize, b: usize) -> Result<Tensor, TensorError> {
    if a >= t.rank() || b >= t.rank() {
        return Err(TensorError::InvalidShape {
            op: "swap_axes",
            shape: t.shape().to_vec(),
            detail: format!("axes {a}, {b}"),
        });
    }
    let (shape, data) = kernels::swap_axes(t.shape(), t.data(), a, b);
    record(OpKind::SwapAxes { a, b }, &[t], shape, data)
}

pub fn reshape(a: &Tensor, shape: Vec<usize>) -> Result<Tensor, TensorError> {
    if shape.iter().product::<usize>() != a.len() {
        return Err(TensorError::InvalidShape {
            op: "reshape",
            shape,
            detail: format!("source has {} elements", a.len()),
        });
    }
    let data = a.data().to_vec();
    record(OpKind::Reshape, &[a], shape, data)
}

/// Sums `g` down to `target` (undoing broadcast), preserving trackedness.
fn reduce_to(g: &Tensor, target: &[usize]) -> Result<Tensor, TensorError> {
    if g.shape() == target {
        return Ok(g.clone());
    }
    let offset = g.rank() - target.len();
    let mut axes: Vec<usize> = (0..offset).collect();
    for (d, &td) in target.iter().enumerate() {
        if td == 1 && g.shape()[offset + d] != 1 {
            axes.push(offset + d);
        }
    }
    let summed = if axes.is_empty() {
        g.clone()
    } else {
        sum_axes(g, &axes)?
    };
    reshape(&summed, target.to_vec())
}

fn swap_last(t: &Tensor) -> Result<Tensor, TensorError> {
    swap_axes(t, t.rank() - 2, t.rank() - 1)
}

/// Shape of the input with reduced axes re-inserted as 1s.
fn keepdim_shape(input: &[usize], axes: &[usize]) -> Vec<usize> {
    let mut shape = input.to_vec();
    for &d in axes {
        shape[d] = 1;
    }
    shape
}

/// Per-input gradient contributions for one node. `args` are the recorded
/// operands, `out` is the node's own output, `g` the incoming gradient.
/// Entries are `None` for inputs that receive no gradient.
pub(crate) fn vjp(
    kind: &OpKind,
    args: &[Tensor],
    out: &Tensor,
    g: &Tensor,
) -> Result<Vec<Option<Tensor>>, TensorError> {
    let r = match kind {
        OpKind::Leaf => vec![],
        OpKind::Add => vec![
            Some(reduce_to(g, args[0].shape())?),
            Some(reduce_to(g, args[1].shape())?),
        ],
        OpKind::Sub => vec![
            Some(reduce_to(g, args[0].shape())?),
            Some(reduce_to(&neg(g)?, args[1].shape())?),
        ],
        OpKind::Mul => vec![
            Some(reduce_to(&mul(g, &args[1])?, args[0].shape())?),
            Some(reduce_to(&mul(g, &args[0])?, args[1].shape())?),
        ],
        OpKind::Div => {
            let da = reduce_to(&div(g, &args[1])?, args[0].shape())?;
            let db_full = neg(&div(&mul(g, &args[0])?, &square(&args[1])?)?)?;
            vec![Some(da), Some(reduce_to(&db_full, args[1].shape())?)]
        }
        OpKind::Neg => vec![Some(neg(g)?)],
        OpKind::SafeRecip => {
            // d(1/x)/dx = -1/x^2 = -out^2; exactly 0 at the masked point.
            vec![Some(mul(g, &neg(&square(out)?)?)?)]
        }
        OpKind::Matmul => {
            let da = matmul(g, &swap_last(&args[1])?)?;
            let db = matmul(&swap_last(&args[0])?, g)?;
            vec![
                Some(reduce_to(&da, args[0].shape())?),
                Some(reduce_to(&db, args[1].shape())?),
            ]
        }
        OpKind::Tanh => {
            let d = add_scalar(&neg(&square(out)?)?, 1.0)?;
            vec![Some(mul(g, &d)?)]
        }
        OpKind::Sigmoid => {
            let d = mul(out, &add_scalar(&neg(out)?, 1.0)?)?;
            vec![Some(mul(g, &d)?)]
        }
        OpKind::Exp => vec![Some(mul(g, out)?)],
        OpKind::Square => vec![Some(mul(g, &mul_scalar(&args[0], 2.0)?)?)],
        OpKind::Sqrt => vec![Some(div(g, &mul_scalar(out, 2.0)?)?)],
        OpKind::Sum { axes } => {
            let keep = keepdim_shape(args[0].shape(), axes);
            let g_keep = reshape(g, keep)?;
            vec![Some(mul(&g_keep, &Tensor::ones(args[0].shape().to_vec()))?)]
        }
        OpKind::Mean { axes } => {
            let count: usize = axes.iter().map(|&d| args[0].shape()[d]).product();
            let keep = keepdim_shape(args[0].shape(), axes);
            let g_keep = mul_scalar(&reshape(g, keep)?, 1.0 / count as f64)?;
            vec![Some(mul(&g_keep, &Tensor::ones(args[0].shape().to_vec()))?)]
        }
        OpKind::SoftmaxLast => {
            // ds = s * (g - sum_last(g * s))
            let last = out.rank() - 1;
            let gs = mul(g, out)?;
            let row_sum = sum_axes(&gs, &[last])?;
            let keep = keepdim_shape(out.shape(), &[last]);
            let row_sum = reshape(&row_sum, keep)?;
            vec![Some(mul(out, &sub(g, &row_sum)?)?)]
        }
        OpKind::Concat { axis } => {
            let mut offset = 0;
            let mut grads = Vec::with_capacity(args.len());
            for a in args {
                let len = a.shape()[*axis];
                grads.push(Some(narrow(g, *axis, offset, len)?));
                offset += len;
            }
            grads
        }
        OpKind::Narrow { axis, start } => {
            let full = args[0].shape()[*axis];
            vec![Some(pad_narrow(g, *axis, *start, full)?)]
        }
        OpKind::PadNarrow { axis, start } => {
            let len = args[0].shape()[*axis];
            vec![Some(narrow(g, *axis, *start, len)?)]
        }
        OpKind::SwapAxes { a, b } => vec![Some(swap_axes(g, *a, *b)?)],
        OpKind::Reshape => vec![Some(reshape(g, args[0].shape().to_vec())?)],
        OpKind::AddScalar => vec![Some(g.clone())],
        OpKind::MulScalar(c) => vec![Some(mul_scalar(g, *c)?)],
    };
    Ok(r)
}
