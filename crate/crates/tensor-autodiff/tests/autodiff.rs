//! Value and gradient correctness against independent oracles.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use tensor_autodiff as ta;
use tensor_autodiff::{fd, Tape, Tensor};

fn randn(rng: &mut ChaCha20Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()
}

#[test]
fn analytic_point_values() {
    let x = Tensor::from_vec(vec![3], vec![0.0, 1.0, -1.0]).unwrap();
    let t = ta::tanh(&x).unwrap();
    assert_eq!(t.data()[0], 0.0);
    assert!((t.data()[1] - 1f64.tanh()).abs() < 1e-15);
    let s = ta::sigmoid(&x).unwrap();
    assert_eq!(s.data()[0], 0.5);
}

#[test]
fn softmax_of_uniform_vector() {
    for k in [2usize, 5, 7] {
        let x = Tensor::full(vec![k], 0.37);
        let s = ta::softmax_last(&x).unwrap();
        for &v in s.data() {
            assert!((v - 1.0 / k as f64).abs() < 1e-15);
        }
        assert!((s.data().iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn matmul_matches_naive_triple_loop() {
    let mut rng = ChaCha20Rng::seed_from_u64(7);
    let a = randn(&mut rng, 3 * 4);
    let b = randn(&mut rng, 4 * 2);
    let got = ta::matmul(
        &Tensor::from_vec(vec![3, 4], a.clone()).unwrap(),
        &Tensor::from_vec(vec![4, 2], b.clone()).unwrap(),
    )
    .unwrap();
    // Independent naive oracle.
    let mut want = vec![0.0; 3 * 2];
    for i in 0..3 {
        for j in 0..2 {
            for k in 0..4 {
                want[i * 2 + j] += a[i * 4 + k] * b[k * 2 + j];
            }
        }
    }
    for (g, w) in got.data().iter().zip(&want) {
        assert!((g - w).abs() < 1e-12);
    }
}

#[test]
fn shape_mismatch_names_both_shapes() {
    let a = Tensor::zeros(vec![2, 3]);
    let b = Tensor::zeros(vec![4, 2]);
    let err = ta::matmul(&a, &b).unwrap_err().to_string();
    assert!(err.contains("[2, 3]") && err.contains("[4, 2]"), "{err}");
}

#[test]
fn backward_of_square_at_three() {
    let tape = Tape::new();
    let x = tape.leaf(&Tensor::scalar(3.0));
    let y = ta::square(&x).unwrap();
    let grads = tape.backward(&y).unwrap();
    assert_eq!(grads.wrt(&x).unwrap().data()[0], 6.0);
}

#[test]
fn backward_requires_scalar_and_tracked_output() {
    let tape = Tape::new();
    let x = tape.leaf(&Tensor::zeros(vec![2]));
    assert!(matches!(
        tape.backward(&x),
        Err(ta::TensorError::NonScalarOutput(_))
    ));
    let c = Tensor::scalar(1.0);
    assert!(matches!(tape.backward(&c), Err(ta::TensorError::Detached)));
}

#[test]
fn grad_of_sum_tanh_matrix_product_matches_finite_differences() {
    let mut rng = ChaCha20Rng::seed_from_u64(11);
    let w = randn(&mut rng, 25);
    let x = randn(&mut rng, 5);

    let tape = Tape::new();
    let wt = tape.leaf(&Tensor::from_vec(vec![5, 5], w.clone()).unwrap());
    let xt = Tensor::from_vec(vec![5, 1], x.clone()).unwrap();
    let y = ta::sum_all(&ta::tanh(&ta::matmul(&wt, &xt).unwrap()).unwrap()).unwrap();
    let grads = tape.backward(&y).unwrap();
    let analytic = grads.wrt(&wt).unwrap();

    let numeric = fd::central_diff(
        |wv| {
            let wt = Tensor::from_vec(vec![5, 5], wv.to_vec()).unwrap();
            let xt = Tensor::from_vec(vec![5, 1], x.clone()).unwrap();
            ta::sum_all(&ta::tanh(&ta::matmul(&wt, &xt).unwrap()).unwrap())
                .unwrap()
                .scalar_value()
                .unwrap()
        },
        &w,
        1e-5,
    );
    assert!(fd::max_rel_err(analytic.data(), &numeric) < 1e-6);
}

#[test]
fn gradient_of_gradient_norm_analytic() {
    // f(x) = sum(x^2) has grad 2x, so ||grad f|| = 2||x|| and
    // d||grad f||/dx = 2x / ||x||. At x = (1, 2): 2/sqrt(5) * (1, 2).
    let tape = Tape::new();
    let x = tape.leaf(&Tensor::from_vec(vec![2], vec![1.0, 2.0]).unwrap());
    let f = ta::sum_all(&ta::square(&x).unwrap()).unwrap();
    let inner = tape.backward(&f).unwrap();
    let gx = inner.wrt(&x).unwrap().clone();
    let norm = ta::sqrt(&ta::sum_all(&ta::square(&gx).unwrap()).unwrap()).unwrap();
    assert!((norm.scalar_value().unwrap() - 2.0 * 5f64.sqrt()).abs() < 1e-12);
    let outer = tape.backward(&norm).unwrap();
    let d = outer.wrt(&x).unwrap();
    let expected = [0.8944271909999159, 1.7888543819998317]; // 2x/||x||
    for (got, want) in d.data().iter().zip(expected) {
        assert!((got - want).abs() < 1e-12, "{got} vs {want}");
    }
}

#[test]
fn penalty_zero_for_unit_norm_linear_discriminator() {
    let tape = Tape::new();
    let batch = 3;
    let (nd, ad) = (4usize, 6usize);
    let total = (nd + ad) as f64;
    let mut rng = ChaCha20Rng::seed_from_u64(5);
    let nodes = tape.leaf(&Tensor::from_vec(vec![batch, nd], randn(&mut rng, batch * nd)).unwrap());
    let adj = tape.leaf(&Tensor::from_vec(vec![batch, ad], randn(&mut rng, batch * ad)).unwrap());
    // Flat weights with unit global norm: each entry 1/sqrt(nd + ad).
    let wn = Tensor::full(vec![nd, 1], 1.0 / total.sqrt());
    let wa = Tensor::full(vec![ad, 1], 1.0 / total.sqrt());
    let pen = ta::grad_norm_penalty_path(&tape, &nodes, &adj, |n, a| {
        ta::add(&ta::matmul(n, &wn)?, &ta::matmul(a, &wa)?)
    })
    .unwrap();
    assert!(pen.scalar_value().unwrap().abs() < 1e-10);
}

#[test]
fn penalty_one_for_constant_discriminator() {
    let tape = Tape::new();
    let nodes = tape.leaf(&Tensor::ones(vec![2, 3]));
    let adj = tape.leaf(&Tensor::ones(vec![2, 5]));
    let pen = ta::grad_norm_penalty_path(&tape, &nodes, &adj, |_, _| Ok(Tensor::ones(vec![2, 1])))
        .unwrap();
    assert!((pen.scalar_value().unwrap() - 1.0).abs() < 1e-10);
}

#[test]
fn penalty_matches_finite_difference_inner_gradient() {
    // Quadratic discriminator: D(n, a) = sum(n^2) + sum(a^2) per sample.
    let mut rng = ChaCha20Rng::seed_from_u64(17);
    let (batch, nd, ad) = (2usize, 3usize, 4usize);
    let nv = randn(&mut rng, batch * nd);
    let av = randn(&mut rng, batch * ad);

    let tape = Tape::new();
    let nodes = tape.leaf(&Tensor::from_vec(vec![batch, nd], nv.clone()).unwrap());
    let adj = tape.leaf(&Tensor::from_vec(vec![batch, ad], av.clone()).unwrap());
    let pen = ta::grad_norm_penalty_path(&tape, &nodes, &adj, |n, a| {
        ta::add(
            &ta::sum_axes(&ta::square(n)?, &[1])?,
            &ta::sum_axes(&ta::square(a)?, &[1])?,
        )
    })
    .unwrap();

    // Finite-difference oracle over the concatenated per-sample input.
    let disc = |n: &[f64], a: &[f64]| -> f64 { // per-sample score
        n.iter().map(|v| v * v).sum::<f64>() + a.iter().map(|v| v * v).sum::<f64>()
    };
    let mut expected = 0.0;
    for s in 0..batch {
        let xs: Vec<f64> = nv[s * nd..(s + 1) * nd]
            .iter()
            .chain(&av[s * ad..(s + 1) * ad])
            .copied()
            .collect();
        let g = fd::central_diff(
            |x| disc(&x[..nd], &x[nd..]),
            &xs,
            1e-6,
        );
        let norm = g.iter().map(|v| v * v).sum::<f64>().sqrt();
        expected += (norm - 1.0).powi(2);
    }
    expected /= batch as f64;
    assert!((pen.scalar_value().unwrap() - expected).abs() < 1e-5);
}

#[test]
fn penalty_outer_gradient_matches_finite_differences() {
    // Two-parameter discriminator D(n, a) = p0 * sum(n^2) + p1 * sum(a);
    // checks that differentiating *through* the inner backward pass is
    // consistent with finite differences over the parameters.
    let mut rng = ChaCha20Rng::seed_from_u64(23);
    let (batch, nd, ad) = (2usize, 3usize, 2usize);
    let nv = randn(&mut rng, batch * nd);
    let av = randn(&mut rng, batch * ad);
    let phi = [0.7, -0.4];

    let eval = |phi: &[f64], tape: Option<&Tape>| -> (f64, Option<Vec<f64>>) {
        let tape_owned = Tape::new();
        let tape = tape.unwrap_or(&tape_owned);
        let p = tape.leaf(&Tensor::from_vec(vec![2], phi.to_vec()).unwrap());
        let nodes = tape.leaf(&Tensor::from_vec(vec![batch, nd], nv.clone()).unwrap());
        let adj = tape.leaf(&Tensor::from_vec(vec![batch, ad], av.clone()).unwrap());
        let pen = ta::grad_norm_penalty_path(tape, &nodes, &adj, |n, a| {
            let p0 = ta::reshape(&ta::narrow(&p, 0, 0, 1)?, vec![1, 1])?;
            let p1 = ta::reshape(&ta::narrow(&p, 0, 1, 1)?, vec![1, 1])?;
            ta::add(
                &ta::mul(&ta::reshape(&ta::sum_axes(&ta::square(n)?, &[1])?, vec![batch, 1])?, &p0)?,
                &ta::mul(&ta::reshape(&ta::sum_axes(a, &[1])?, vec![batch, 1])?, &p1)?,
            )
        })
        .unwrap();
        let value = pen.scalar_value().unwrap();
        let grad = tape
            .backward(&pen)
            .unwrap()
            .wrt(&p)
            .map(|g| g.data().to_vec());
        (value, grad)
    };

    let tape = Tape::new();
    let (_, analytic) = eval(&phi, Some(&tape));
    let analytic = analytic.expect("penalty depends on parameters");
    let numeric = fd::central_diff(|p| eval(p, None).0, &phi, 1e-5);
    assert!(
        fd::max_rel_err(&analytic, &numeric) < 1e-4,
        "{analytic:?} vs {numeric:?}"
    );
}

#[test]
fn first_non_finite_names_the_offending_node() {
    let tape = Tape::new();
    let x = tape.leaf(&Tensor::from_vec(vec![1], vec![-1.0]).unwrap());
    let _ = ta::sqrt(&x).unwrap(); // NaN
    let (id, desc) = tape.first_non_finite().unwrap();
    assert!(id >= 1);
    assert!(desc.contains("Sqrt"), "{desc}");
}

#[test]
fn checkpoint_round_trip_is_bit_exact() {
    let mut rng = ChaCha20Rng::seed_from_u64(31);
    let mut set = ta::ParamSet::new(ta::ParamRole::Discriminator);
    set.insert(
        "layer0.weight",
        Tensor::from_vec(vec![3, 4], randn(&mut rng, 12)).unwrap(),
    );
    set.insert(
        "layer0.bias",
        Tensor::from_vec(vec![4], vec![0.1, -0.0, f64::MIN_POSITIVE, 3.5e-300]).unwrap(),
    );
    let mut w = container::Writer::new();
    set.encode_into(&mut w);
    let bytes = w.into_bytes();
    let decoded = ta::ParamSet::decode_from(&mut container::Reader::new(&bytes)).unwrap();
    assert!(set.bitwise_eq(&decoded));
    assert_eq!(decoded.role(), ta::ParamRole::Discriminator);
}
