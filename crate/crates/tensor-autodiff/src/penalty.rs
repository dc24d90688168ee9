use crate::{ops, Tape, Tensor, TensorError};

/// Mean squared deviation of the per-sample input-gradient norm from 1:
/// `mean_i (||grad_{x_i} D(x_i)|| - 1)^2` over a batch of interpolated
/// graphs given as a `(node, adjacency)` tensor pair with leading batch
/// axis.
///
/// `nodes` and `adj` must be leaves on `tape`, and `disc_fn` must score each
/// sample independently (its per-sample outputs may only depend on that
/// sample's slice). The result is a scalar whose own gradient with respect
/// to the discriminator parameters differentiates through the inner
/// backward pass.
pub fn grad_norm_penalty_path(
    tape: &Tape,
    nodes: &Tensor,
    adj: &Tensor,
    disc_fn: impl FnOnce(&Tensor, &Tensor) -> Result<Tensor, TensorError>,
) -> Result<Tensor, TensorError> {
    let batch = nodes.shape()[0];
    let scores = disc_fn(nodes, adj)?;
    // Summing lets one backward pass recover every per-sample gradient. A
    // discriminator that ignores its input entirely has zero gradient.
    let total = ops::sum_all(&scores)?;
    let grads = if total.is_tracked() {
        Some(tape.backward(&total)?)
    } else {
        None
    };
    let g_nodes = grads
        .as_ref()
        .and_then(|g| g.wrt(nodes).cloned())
        .unwrap_or_else(|| Tensor::zeros(nodes.shape().to_vec()));
    let g_adj = grads
        .as_ref()
        .and_then(|g| g.wrt(adj).cloned())
        .unwrap_or_else(|| Tensor::zeros(adj.shape().to_vec()));
    let node_axes: Vec<usize> = (1..g_nodes.rank()).collect();
    let adj_axes: Vec<usize> = (1..g_adj.rank()).collect();
    let sq = ops::add(
        &ops::sum_axes(&ops::square(&g_nodes)?, &node_axes)?,
        &ops::sum_axes(&ops::square(&g_adj)?, &adj_axes)?,
    )?;
    debug_assert_eq!(sq.shape(), [batch]);
    let norm = ops::sqrt(&sq)?;
    ops::mean_all(&ops::square(&ops::add_scalar(&norm, -1.0)?)?)
}
