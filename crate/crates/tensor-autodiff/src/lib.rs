//! Dense `f64` tensors with reverse-mode automatic differentiation.
//!
//! Operations record onto a [`Tape`]; [`Tape::backward`] walks the recording
//! in reverse and *emits the gradient computation as further tape
//! operations*, so gradients are ordinary tracked tensors and can be
//! differentiated again. That second pass is what makes the
//! gradient-penalty term ([`grad_norm_penalty_path`]) trainable: the penalty
//! depends on an inner input-gradient whose own parameter-gradient is needed.
//!
//! Everything is 64-bit and CPU-side; networks here are small enough that
//! debuggability wins over throughput.

mod error;
pub mod fd;
mod kernels;
mod ops;
mod params;
mod penalty;
mod tape;
mod tensor;

pub use error::TensorError;
pub use ops::{
    add, add_scalar, concat, div, exp, matmul, mean_all, mean_axes, mul, mul_scalar, narrow, neg,
    reshape, safe_recip, sigmoid, softmax_last, sqrt, square, sub, sum_all, sum_axes, swap_axes,
    tanh,
};
pub use params::{ParamRole, ParamSet, Params};
pub use penalty::grad_norm_penalty_path;
pub use tape::{Gradients, Tape};
pub use tensor::Tensor;
