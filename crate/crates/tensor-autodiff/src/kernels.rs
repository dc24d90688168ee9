//! Raw array math. Shape validation happens in `ops`; these functions assume
//! compatible inputs.

/// NumPy-style broadcast of two shapes, aligning trailing axes.
pub fn broadcast_shape(a: &[usize], b: &[usize]) -> Option<Vec<usize>> {
    let rank = a.len().max(b.len());
    let mut out = vec![0usize; rank];
    for d in 0..rank {
        let da = dim_from_right(a, rank - 1 - d);
        let db = dim_from_right(b, rank - 1 - d);
        out[d] = if da == db || db == 1 {
            da
        } else if da == 1 {
            db
        } else {
            return None;
        };
    }
    Some(out)
}

fn dim_from_right(shape: &[usize], from_right: usize) -> usize {
    if from_right < shape.len() {
        shape[shape.len() - 1 - from_right]
    } else {
        1
    }
}

pub fn strides(shape: &[usize]) -> Vec<usize> {
    let mut out = vec![1usize; shape.len()];
    for d in (0..shape.len().saturating_sub(1)).rev() {
        out[d] = out[d + 1] * shape[d + 1];
    }
    out
}

/// Strides of `shape` viewed as `out_shape`, with zero stride on broadcast
/// axes.
fn broadcast_strides(shape: &[usize], out_shape: &[usize]) -> Vec<usize> {
    let st = strides(shape);
    let mut out = vec![0usize; out_shape.len()];
    let offset = out_shape.len() - shape.len();
    for d in 0..shape.len() {
        out[offset + d] = if shape[d] == 1 { 0 } else { st[d] };
    }
    out
}

pub fn ew_binary(
    a_shape: &[usize],
    a: &[f64],
    b_shape: &[usize],
    b: &[f64],
    f: impl Fn(f64, f64) -> f64,
) -> (Vec<usize>, Vec<f64>) {
    if a_shape == b_shape {
        let out = a.iter().zip(b).map(|(&x, &y)| f(x, y)).collect();
        return (a_shape.to_vec(), out);
    }
    if b.len() == 1 {
        let y = b[0];
        return (a_shape.to_vec(), a.iter().map(|&x| f(x, y)).collect());
    }
    if a.len() == 1 {
        let x = a[0];
        return (b_shape.to_vec(), b.iter().map(|&y| f(x, y)).collect());
    }
    let out_shape = broadcast_shape(a_shape, b_shape).expect("checked by caller");
    let sa = broadcast_strides(a_shape, &out_shape);
    let sb = broadcast_strides(b_shape, &out_shape);
    let len: usize = out_shape.iter().product();
    let mut out = vec![0.0; len];
    let mut idx = vec![0usize; out_shape.len()];
    let (mut pa, mut pb) = (0usize, 0usize);
    for o in out.iter_mut() {
        *o = f(a[pa], b[pb]);
        for d in (0..out_shape.len()).rev() {
            idx[d] += 1;
            pa += sa[d];
            pb += sb[d];
            if idx[d] < out_shape[d] {
                break;
            }
            idx[d] = 0;
            pa -= sa[d] * out_shape[d];
            pb -= sb[d] * out_shape[d];
        }
    }
    (out_shape, out)
}

/// Batched matrix product over the last two axes; leading axes broadcast.
pub fn matmul(a_shape: &[usize], a: &[f64], b_shape: &[usize], b: &[f64]) -> (Vec<usize>, Vec<f64>) {
    let (m, k) = (a_shape[a_shape.len() - 2], a_shape[a_shape.len() - 1]);
    let n = b_shape[b_shape.len() - 1];
    let a_lead = &a_shape[..a_shape.len() - 2];
    let b_lead = &b_shape[..b_shape.len() - 2];
    let lead = broadcast_shape(a_lead, b_lead).expect("checked by caller");
    let mut out_shape = lead.clone();
    out_shape.extend_from_slice(&[m, n]);
    let batches: usize = lead.iter().product();
    let sa = broadcast_strides(a_lead, &lead);
    let sb = broadcast_strides(b_lead, &lead);
    let mut out = vec![0.0; batches * m * n];
    let mut idx = vec![0usize; lead.len()];
    let (mut pa, mut pb) = (0usize, 0usize);
    for batch in 0..batches {
        let a_mat = &a[pa * m * k..(pa + 1) * m * k];
        let b_mat = &b[pb * k * n..(pb + 1) * k * n];
        let c_mat = &mut out[batch * m * n..(batch + 1) * m * n];
        matmul_2d(a_mat, b_mat, m, k, n, c_mat);
        for d in (0..lead.len()).rev() {
            idx[d] += 1;
            pa += sa[d];
            pb += sb[d];
            if idx[d] < lead[d] {
                break;
            }
            idx[d] = 0;
            pa -= sa[d] * lead[d];
            pb -= sb[d] * lead[d];
        }
    }
    (out_shape, out)
}

fn matmul_2d(a: &[f64], b: &[f64], m: usize, k: usize, n: usize, out: &mut [f64]) {
    for i in 0..m {
        let a_row = &a[i * k..(i + 1) * k];
        let c_row = &mut out[i * n..(i + 1) * n];
        for (kk, &aik) in a_row.iter().enumerate() {
            // One-hot node features and adjacency slices make zero rows
            // common; skipping them is exact.
            if aik == 0.0 {
                continue;
            }
            let b_row = &b[kk * n..(kk + 1) * n];
            for j in 0..n {
                c_row[j] += aik * b_row[j];
            }
        }
    }
}

/// Sum over `axes` (sorted, unique); reduced axes are removed from the shape.
pub fn sum_axes(shape: &[usize], data: &[f64], axes: &[usize]) -> (Vec<usize>, Vec<f64>) {
    let keep: Vec<usize> = (0..shape.len()).filter(|d| !axes.contains(d)).collect();
    let out_shape: Vec<usize> = keep.iter().map(|&d| shape[d]).collect();
    let out_len: usize = out_shape.iter().product::<usize>().max(1);
    let mut out = vec![0.0; out_len];
    let in_strides = strides(shape);
    let out_strides = strides(&out_shape);
    // Map each input element to its output slot; reduced axes contribute 0.
    let mut slot_stride = vec![0usize; shape.len()];
    for (oi, &d) in keep.iter().enumerate() {
        slot_stride[d] = out_strides[oi];
    }
    let mut idx = vec![0usize; shape.len()];
    let mut slot = 0usize;
    for &v in data {
        out[slot] += v;
        for d in (0..shape.len()).rev() {
            idx[d] += 1;
            slot += slot_stride[d];
            if idx[d] < shape[d] {
                break;
            }
            idx[d] = 0;
            slot -= slot_stride[d] * shape[d];
        }
    }
    let _ = in_strides;
    (out_shape, out)
}

/// Softmax over the last axis.
pub fn softmax_last(shape: &[usize], data: &[f64]) -> Vec<f64> {
    let width = *shape.last().expect("rank >= 1");
    let mut out = vec![0.0; data.len()];
    for (row_in, row_out) in data.chunks_exact(width).zip(out.chunks_exact_mut(width)) {
        let max = row_in.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mut sum = 0.0;
        for (o, &v) in row_out.iter_mut().zip(row_in) {
            *o = (v - max).exp();
            sum += *o;
        }
        for o in row_out.iter_mut() {
            *o /= sum;
        }
    }
    out
}

pub fn swap_axes(shape: &[usize], data: &[f64], a: usize, b: usize) -> (Vec<usize>, Vec<f64>) {
    let mut out_shape = shape.to_vec();
    out_shape.swap(a, b);
    let in_strides = strides(shape);
    let mut src_stride = in_strides.clone();
    src_stride.swap(a, b);
    let mut out = vec![0.0; data.len()];
    let mut idx = vec![0usize; shape.len()];
    let mut src = 0usize;
    for o in out.iter_mut() {
        *o = data[src];
        for d in (0..out_shape.len()).rev() {
            idx[d] += 1;
            src += src_stride[d];
            if idx[d] < out_shape[d] {
                break;
            }
            idx[d] = 0;
            src -= src_stride[d] * out_shape[d];
        }
    }
    (out_shape, out)
}

/// Contiguous slice `start..start+len` along `axis`.
pub fn narrow(shape: &[usize], data: &[f64], axis: usize, start: usize, len: usize) -> Vec<f64> {
    let outer: usize = shape[..axis].iter().product();
    let mid = shape[axis];
    let inner: usize = shape[axis + 1..].iter().product();
    let mut out = vec![0.0; outer * len * inner];
    for o in 0..outer {
        let src = (o * mid + start) * inner;
        let dst = o * len * inner;
        out[dst..dst + len * inner].copy_from_slice(&data[src..src + len * inner]);
    }
    out
}

/// Embeds `data` (whose `axis` extent is `len`) into zeros with extent
/// `full`, offset by `start`. Inverse of [`narrow`].
pub fn pad_narrow(
    shape: &[usize],
    data: &[f64],
    axis: usize,
    start: usize,
    full: usize,
) -> Vec<f64> {
    let outer: usize = shape[..axis].iter().product();
    let len = shape[axis];
    let inner: usize = shape[axis + 1..].iter().product();
    let mut out = vec![0.0; outer * full * inner];
    for o in 0..outer {
        let src = o * len * inner;
        let dst = (o * full + start) * inner;
        out[dst..dst + len * inner].copy_from_slice(&data[src..src + len * inner]);
    }
    out
}

pub fn concat(parts: &[(&[usize], &[f64])], axis: usize) -> (Vec<usize>, Vec<f64>) {
    let mut out_shape = parts[0].0.to_vec();
    out_shape[axis] = parts.iter().map(|(s, _)| s[axis]).sum();
    let outer: usize = out_shape[..axis].iter().product();
    let inner: usize = out_shape[axis + 1..].iter().product();
    let total_mid = out_shape[axis];
    let mut out = vec![0.0; outer * total_mid * inner];
    let mut offset = 0;
    for (shape, data) in parts {
        let mid = shape[axis];
        for o in 0..outer {
            let src = o * mid * inner;
            let dst = (o * total_mid + offset) * inner;
            out[dst..dst + mid * inner].copy_from_slice(&data[src..src + mid * inner]);
        }
        offset += mid;
    }
    (out_shape, out)
}
