//! Inverted dropout over vectors.

use ndarray::Array1;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{scalar, Scalar};

/// Sample a scaled dropout mask: entries are `0` with probability `p`,
/// `1 / (1 - p)` otherwise. A rate of zero returns all-ones without
/// consuming randomness.
pub fn dropout_mask<S: Scalar>(len: usize, p: f64, rng: &mut ChaCha8Rng) -> Array1<S> {
    assert!((0.0..1.0).contains(&p), "dropout rate must be in [0, 1)");
    if p == 0.0 {
        return Array1::ones(len);
    }
    let keep = scalar::<S>(1.0 / (1.0 - p));
    Array1::from_shape_fn(len, |_| {
        if rng.random::<f64>() < p {
            S::zero()
        } else {
            keep
        }
    })
}
