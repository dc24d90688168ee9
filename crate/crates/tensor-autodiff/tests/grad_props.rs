//! Finite-difference property checks over every primitive, randomized over
//! at least 100 seeds, plus the broadcast-backward tile oracle.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use tensor_autodiff as ta;
use tensor_autodiff::{fd, Tape, Tensor};

/// Checks `backward` of `sum(build(x) * projection)` against central finite
/// differences for one input tensor of the given shape.
fn check_unary(
    seed: u64,
    shape: &[usize],
    sample: impl Fn(&mut ChaCha20Rng) -> f64,
    build: impl Fn(&Tensor) -> Tensor,
) -> f64 {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let len: usize = shape.iter().product();
    let x: Vec<f64> = (0..len).map(|_| sample(&mut rng)).collect();
    let out_probe = build(&Tensor::from_vec(shape.to_vec(), x.clone()).unwrap());
    let proj: Vec<f64> = (0..out_probe.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let proj = Tensor::from_vec(out_probe.shape().to_vec(), proj).unwrap();

    let scalar = |xv: &[f64]| -> f64 {
        let t = Tensor::from_vec(shape.to_vec(), xv.to_vec()).unwrap();
        ta::sum_all(&ta::mul(&build(&t), &proj).unwrap())
            .unwrap()
            .scalar_value()
            .unwrap()
    };

    let tape = Tape::new();
    let leaf = tape.leaf(&Tensor::from_vec(shape.to_vec(), x.clone()).unwrap());
    let loss = ta::sum_all(&ta::mul(&build(&leaf), &proj).unwrap()).unwrap();
    let analytic = tape.backward(&loss).unwrap().wrt(&leaf).unwrap().clone();
    let numeric = fd::central_diff(scalar, &x, 1e-5);
    fd::max_rel_err(analytic.data(), &numeric)
}

#[test]
fn unary_primitives_match_finite_differences() {
    let shape = [2, 3];
    for seed in 0..110u64 {
        let cases: Vec<(&str, f64)> = vec![
            ("tanh", check_unary(seed, &shape, |r| r.gen_range(-2.0..2.0), |t| ta::tanh(t).unwrap())),
            ("sigmoid", check_unary(seed, &shape, |r| r.gen_range(-2.0..2.0), |t| ta::sigmoid(t).unwrap())),
            ("exp", check_unary(seed, &shape, |r| r.gen_range(-1.0..1.0), |t| ta::exp(t).unwrap())),
            ("square", check_unary(seed, &shape, |r| r.gen_range(-2.0..2.0), |t| ta::square(t).unwrap())),
            ("sqrt", check_unary(seed, &shape, |r| r.gen_range(0.2..2.0), |t| ta::sqrt(t).unwrap())),
            ("safe_recip", check_unary(seed, &shape, |r| r.gen_range(0.3..2.0), |t| ta::safe_recip(t).unwrap())),
            ("neg", check_unary(seed, &shape, |r| r.gen_range(-2.0..2.0), |t| ta::neg(t).unwrap())),
            ("add_scalar", check_unary(seed, &shape, |r| r.gen_range(-2.0..2.0), |t| ta::add_scalar(t, 0.7).unwrap())),
            ("mul_scalar", check_unary(seed, &shape, |r| r.gen_range(-2.0..2.0), |t| ta::mul_scalar(t, -1.3).unwrap())),
            ("softmax", check_unary(seed, &shape, |r| r.gen_range(-2.0..2.0), |t| ta::softmax_last(t).unwrap())),
            ("sum", check_unary(seed, &shape, |r| r.gen_range(-2.0..2.0), |t| ta::sum_axes(t, &[1]).unwrap())),
            ("mean", check_unary(seed, &shape, |r| r.gen_range(-2.0..2.0), |t| ta::mean_axes(t, &[0]).unwrap())),
            ("swap_axes", check_unary(seed, &shape, |r| r.gen_range(-2.0..2.0), |t| ta::swap_axes(t, 0, 1).unwrap())),
            ("reshape", check_unary(seed, &shape, |r| r.gen_range(-2.0..2.0), |t| ta::reshape(t, vec![3, 2]).unwrap())),
            ("narrow", check_unary(seed, &shape, |r| r.gen_range(-2.0..2.0), |t| ta::narrow(t, 1, 1, 2).unwrap())),
            (
                "concat_self",
                check_unary(seed, &shape, |r| r.gen_range(-2.0..2.0), |t| {
                    let u = ta::tanh(t).unwrap();
                    ta::concat(&[t, &u], 0).unwrap()
                }),
            ),
        ];
        for (name, err) in cases {
            assert!(err < 1e-6, "{name} rel err {err} at seed {seed}");
        }
    }
}

#[test]
fn binary_primitives_match_finite_differences_with_broadcast() {
    // Gradient flows into `a` while `b` broadcasts from [3] and [2,1].
    for seed in 0..110u64 {
        let mut rng = ChaCha20Rng::seed_from_u64(1000 + seed);
        let a: Vec<f64> = (0..6).map(|_| rng.gen_range(0.4..2.0)).collect();
        let b_row: Vec<f64> = (0..3).map(|_| rng.gen_range(0.4..2.0)).collect();
        let b_col: Vec<f64> = (0..2).map(|_| rng.gen_range(0.4..2.0)).collect();

        type BinOp = fn(&Tensor, &Tensor) -> Result<Tensor, ta::TensorError>;
        let ops: Vec<(&str, BinOp)> = vec![
            ("add", ta::add),
            ("sub", ta::sub),
            ("mul", ta::mul),
            ("div", ta::div),
        ];
        for (name, op) in ops {
            for (b_shape, b_data) in [(vec![3], b_row.clone()), (vec![2, 1], b_col.clone())] {
                let b = Tensor::from_vec(b_shape.clone(), b_data.clone()).unwrap();
                // Check gradient w.r.t. the broadcast operand too.
                let tape = Tape::new();
                let la = tape.leaf(&Tensor::from_vec(vec![2, 3], a.clone()).unwrap());
                let lb = tape.leaf(&b);
                let loss = ta::sum_all(&op(&la, &lb).unwrap()).unwrap();
                let grads = tape.backward(&loss).unwrap();

                let na = fd::central_diff(
                    |xv| {
                        let t = Tensor::from_vec(vec![2, 3], xv.to_vec()).unwrap();
                        ta::sum_all(&op(&t, &b).unwrap()).unwrap().scalar_value().unwrap()
                    },
                    &a,
                    1e-6,
                );
                let nb = fd::central_diff(
                    |xv| {
                        let t = Tensor::from_vec(b_shape.clone(), xv.to_vec()).unwrap();
                        let at = Tensor::from_vec(vec![2, 3], a.clone()).unwrap();
                        ta::sum_all(&op(&at, &t).unwrap()).unwrap().scalar_value().unwrap()
                    },
                    &b_data,
                    1e-6,
                );
                let ea = fd::max_rel_err(grads.wrt(&la).unwrap().data(), &na);
                let eb = fd::max_rel_err(grads.wrt(&lb).unwrap().data(), &nb);
                assert!(ea < 1e-6 && eb < 1e-6, "{name} {b_shape:?}: {ea} {eb} seed {seed}");
            }
        }
    }
}

#[test]
fn matmul_gradients_match_finite_differences() {
    for seed in 0..110u64 {
        let mut rng = ChaCha20Rng::seed_from_u64(2000 + seed);
        // Batched lhs against shared rhs, the shape used throughout the nets.
        let a: Vec<f64> = (0..2 * 2 * 3).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let b: Vec<f64> = (0..3 * 2).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let proj: Vec<f64> = (0..2 * 2 * 2).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let proj = Tensor::from_vec(vec![2, 2, 2], proj).unwrap();

        let eval = |av: &[f64], bv: &[f64]| -> f64 {
            let at = Tensor::from_vec(vec![2, 2, 3], av.to_vec()).unwrap();
            let bt = Tensor::from_vec(vec![3, 2], bv.to_vec()).unwrap();
            ta::sum_all(&ta::mul(&ta::matmul(&at, &bt).unwrap(), &proj).unwrap())
                .unwrap()
                .scalar_value()
                .unwrap()
        };

        let tape = Tape::new();
        let la = tape.leaf(&Tensor::from_vec(vec![2, 2, 3], a.clone()).unwrap());
        let lb = tape.leaf(&Tensor::from_vec(vec![3, 2], b.clone()).unwrap());
        let loss = ta::sum_all(&ta::mul(&ta::matmul(&la, &lb).unwrap(), &proj).unwrap()).unwrap();
        let grads = tape.backward(&loss).unwrap();

        let na = fd::central_diff(|x| eval(x, &b), &a, 1e-5);
        let nb = fd::central_diff(|x| eval(&a, x), &b, 1e-5);
        assert!(fd::max_rel_err(grads.wrt(&la).unwrap().data(), &na) < 1e-6);
        assert!(fd::max_rel_err(grads.wrt(&lb).unwrap().data(), &nb) < 1e-6);
    }
}

#[test]
fn broadcast_backward_matches_explicit_tile_oracle() {
    // For loss = sum(a * b) with b broadcast along axis 0, the gradient of b
    // must equal the gradient obtained when b is explicitly tiled.
    let mut rng = ChaCha20Rng::seed_from_u64(3000);
    for _ in 0..100 {
        let a: Vec<f64> = (0..8).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let b: Vec<f64> = (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect();

        let tape = Tape::new();
        let la = Tensor::from_vec(vec![2, 4], a.clone()).unwrap();
        let lb = tape.leaf(&Tensor::from_vec(vec![4], b.clone()).unwrap());
        let loss = ta::sum_all(&ta::mul(&la, &lb).unwrap()).unwrap();
        let got = tape.backward(&loss).unwrap().wrt(&lb).unwrap().clone();

        let tape2 = Tape::new();
        let tiled: Vec<f64> = b.iter().chain(&b).copied().collect();
        let lt = tape2.leaf(&Tensor::from_vec(vec![2, 4], tiled).unwrap());
        let loss2 = ta::sum_all(&ta::mul(&la, &lt).unwrap()).unwrap();
        let full = tape2.backward(&loss2).unwrap().wrt(&lt).unwrap().clone();
        // Tile oracle: sum the explicit copies.
        let want: Vec<f64> = (0..4).map(|j| full.data()[j] + full.data()[4 + j]).collect();

        for (g, w) in got.data().iter().zip(&want) {
            assert!((g - w).abs() < 1e-12);
        }
    }
}

#[test]
fn softmax_rows_sum_to_one_and_jvp_matches_fd() {
    let mut rng = ChaCha20Rng::seed_from_u64(4000);
    for _ in 0..100 {
        let x: Vec<f64> = (0..12).map(|_| rng.gen_range(-3.0..3.0)).collect();
        let s = ta::softmax_last(&Tensor::from_vec(vec![3, 4], x.clone()).unwrap()).unwrap();
        for row in s.data().chunks(4) {
            assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }
}
