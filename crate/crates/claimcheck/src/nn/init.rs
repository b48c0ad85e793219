//! Weight initialization.

use ndarray::{Array1, Array2, Array3};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use super::{scalar, Scalar};

/// Standard deviation used for all weight matrices (BERT-style truncated-free
/// normal init is close enough at these scales).
pub const INIT_STD: f64 = 0.02;

pub fn normal2<S: Scalar>(rows: usize, cols: usize, std: f64, rng: &mut ChaCha8Rng) -> Array2<S> {
    let dist = Normal::new(0.0, std).expect("valid std");
    Array2::from_shape_fn((rows, cols), |_| scalar(dist.sample(rng)))
}

pub fn normal3<S: Scalar>(
    d0: usize,
    d1: usize,
    d2: usize,
    std: f64,
    rng: &mut ChaCha8Rng,
) -> Array3<S> {
    let dist = Normal::new(0.0, std).expect("valid std");
    Array3::from_shape_fn((d0, d1, d2), |_| scalar(dist.sample(rng)))
}

pub fn zeros1<S: Scalar>(len: usize) -> Array1<S> {
    Array1::zeros(len)
}
