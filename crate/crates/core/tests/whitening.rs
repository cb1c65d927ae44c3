use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sinica::preprocess::{sample_covariance, whiten};
use sinica::SignalMatrix;

/// Random full-rank data: independent uniform rows mixed by a random matrix, plus offsets.
fn random_input(m: usize, n: usize, seed: u64) -> SignalMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s = DMatrix::from_fn(m, n, |_, _| rng.random_range(-1.0..1.0));
    let a = DMatrix::from_fn(m, m, |i, j| {
        rng.random_range(-1.0..1.0) + if i == j { 2.0 } else { 0.0 }
    });
    let mut x = a * s;
    for i in 0..m {
        let offset = rng.random_range(-5.0..5.0);
        x.row_mut(i).add_scalar_mut(offset);
    }
    SignalMatrix::new(x).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn whitened_data_has_identity_covariance(m in prop::sample::select(vec![2usize, 3, 5]), seed in any::<u64>()) {
        let x = random_input(m, 1000, seed);
        let (z, model) = whiten(&x).unwrap();
        let cov = sample_covariance(&z).unwrap();
        let err = (cov - DMatrix::identity(m, m)).abs().max();
        prop_assert!(err < 1e-8, "max |cov - I| = {err}");

        let back = model.reconstruct(&z).unwrap();
        let rel = (back.as_matrix() - x.as_matrix()).norm() / x.as_matrix().norm();
        prop_assert!(rel < 1e-8, "relative reconstruction error {rel}");

        let prod = model.whitener() * model.dewhitener();
        prop_assert!((prod - DMatrix::identity(m, m)).abs().max() < 1e-8);

        let ev = model.eigenvalues();
        prop_assert!(ev.windows(2).all(|w| w[0] >= w[1]));
    }
}

#[test]
fn eigenvector_signs_are_canonical() {
    let x = random_input(3, 1000, 17);
    let (_, model) = whiten(&x).unwrap();
    // rows of the whitener are scaled eigenvectors
    for row in model.whitener().row_iter() {
        let pivot = (0..row.len()).fold(0, |p, i| if row[i].abs() > row[p].abs() { i } else { p });
        assert!(row[pivot] > 0.0);
    }
    let (_, again) = whiten(&x).unwrap();
    assert_eq!(model, again);
}
