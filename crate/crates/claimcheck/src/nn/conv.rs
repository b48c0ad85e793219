//! 1D convolution and max-pooling over `[channels, length]` arrays.

use ndarray::{Array2, Array3};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use super::init::{normal3, zeros1};
use super::{ParamVisitor, Scalar, Trainable};
use ndarray::Array1;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ShapeError {
    #[error("input length {in_len} is shorter than kernel {kernel}")]
    KernelTooLong { in_len: usize, kernel: usize },
    #[error("expected input width {expected}, got {actual}")]
    WidthMismatch { expected: usize, actual: usize },
}

/// Output length of a 1D convolution: `floor((in_len - kernel) / stride) + 1`.
pub fn conv_output_length(in_len: usize, kernel: usize, stride: usize) -> Result<usize, ShapeError> {
    assert!(stride >= 1, "stride must be at least 1");
    if in_len < kernel {
        return Err(ShapeError::KernelTooLong { in_len, kernel });
    }
    Ok((in_len - kernel) / stride + 1)
}

/// 1D convolution, weights `[out_channels, in_channels, kernel]`.
#[derive(Debug, Clone)]
pub struct Conv1d<S> {
    pub name: String,
    pub w: Array3<S>,
    pub b: Array1<S>,
    gw: Array3<S>,
    gb: Array1<S>,
    pub stride: usize,
}

impl<S: Scalar> Conv1d<S> {
    pub fn new(
        name: &str,
        in_channels: usize,
        out_channels: usize,
        kernel: usize,
        stride: usize,
        rng: &mut ChaCha8Rng,
    ) -> Self {
        Self {
            name: name.to_string(),
            w: normal3(out_channels, in_channels, kernel, super::init::INIT_STD, rng),
            b: zeros1(out_channels),
            gw: Array3::zeros((out_channels, in_channels, kernel)),
            gb: Array1::zeros(out_channels),
            stride,
        }
    }

    pub fn kernel(&self) -> usize {
        self.w.shape()[2]
    }

    pub fn in_channels(&self) -> usize {
        self.w.shape()[1]
    }

    pub fn out_channels(&self) -> usize {
        self.w.shape()[0]
    }

    /// `x: [in_channels, len] -> [out_channels, out_len]`
    pub fn forward(&self, x: &Array2<S>) -> Result<Array2<S>, ShapeError> {
        let (c_out, c_in, k) = (self.out_channels(), self.in_channels(), self.kernel());
        if x.nrows() != c_in {
            return Err(ShapeError::WidthMismatch {
                expected: c_in,
                actual: x.nrows(),
            });
        }
        let l_out = conv_output_length(x.ncols(), k, self.stride)?;
        let mut out = Array2::zeros((c_out, l_out));
        for co in 0..c_out {
            for i in 0..l_out {
                let start = i * self.stride;
                let mut acc = self.b[co];
                for ci in 0..c_in {
                    for kk in 0..k {
                        acc += self.w[[co, ci, kk]] * x[[ci, start + kk]];
                    }
                }
                out[[co, i]] = acc;
            }
        }
        Ok(out)
    }

    /// Accumulates weight gradients and returns the input gradient.
    pub fn backward(&mut self, x: &Array2<S>, grad_out: &Array2<S>) -> Array2<S> {
        let (c_out, c_in, k) = (self.out_channels(), self.in_channels(), self.kernel());
        let l_out = grad_out.ncols();
        let mut grad_in = Array2::zeros(x.raw_dim());
        for co in 0..c_out {
            for i in 0..l_out {
                let g = grad_out[[co, i]];
                let start = i * self.stride;
                self.gb[co] += g;
                for ci in 0..c_in {
                    for kk in 0..k {
                        self.gw[[co, ci, kk]] += g * x[[ci, start + kk]];
                        grad_in[[ci, start + kk]] += g * self.w[[co, ci, kk]];
                    }
                }
            }
        }
        grad_in
    }
}

impl<S: Scalar> Trainable<S> for Conv1d<S> {
    fn visit_params(&mut self, visitor: &mut dyn ParamVisitor<S>) {
        let w_shape = self.w.shape().to_vec();
        visitor.visit(
            &format!("{}.w", self.name),
            &w_shape,
            self.w.as_slice_mut().expect("standard layout"),
            self.gw.as_slice_mut().expect("standard layout"),
        );
        let b_shape = [self.b.len()];
        visitor.visit(
            &format!("{}.b", self.name),
            &b_shape,
            self.b.as_slice_mut().expect("standard layout"),
            self.gb.as_slice_mut().expect("standard layout"),
        );
    }
}

/// 1D max-pooling with window and stride both equal to `size`.
///
/// A size of one is the identity map; it is still routed through the same
/// code path so the layer order matches the configured architecture.
#[derive(Debug, Clone, Copy)]
pub struct MaxPool1d {
    pub size: usize,
}

#[derive(Debug, Clone)]
pub struct PoolCache {
    pub argmax: Array2<usize>,
    pub in_len: usize,
}

impl MaxPool1d {
    pub fn output_length(&self, in_len: usize) -> usize {
        in_len / self.size
    }

    /// `x: [channels, len] -> [channels, len / size]`
    pub fn forward<S: Scalar>(&self, x: &Array2<S>) -> (Array2<S>, PoolCache) {
        let c = x.nrows();
        let l_out = self.output_length(x.ncols());
        let mut out = Array2::zeros((c, l_out));
        let mut argmax = Array2::zeros((c, l_out));
        for ci in 0..c {
            for i in 0..l_out {
                let start = i * self.size;
                let mut best = x[[ci, start]];
                let mut best_at = start;
                for j in start + 1..start + self.size {
                    if x[[ci, j]] > best {
                        best = x[[ci, j]];
                        best_at = j;
                    }
                }
                out[[ci, i]] = best;
                argmax[[ci, i]] = best_at;
            }
        }
        (
            out,
            PoolCache {
                argmax,
                in_len: x.ncols(),
            },
        )
    }

    pub fn backward<S: Scalar>(&self, cache: &PoolCache, grad_out: &Array2<S>) -> Array2<S> {
        let mut grad_in = Array2::zeros((grad_out.nrows(), cache.in_len));
        for ci in 0..grad_out.nrows() {
            for i in 0..grad_out.ncols() {
                grad_in[[ci, cache.argmax[[ci, i]]]] += grad_out[[ci, i]];
            }
        }
        grad_in
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use ndarray::arr2;
    use rand::SeedableRng;

    #[test]
    fn conv_output_length_formula() {
        assert_eq!(conv_output_length(779, 20, 1).unwrap(), 760);
        assert_eq!(conv_output_length(760, 20, 1).unwrap(), 741);
        assert_eq!(conv_output_length(20, 20, 1).unwrap(), 1);
        assert_eq!(conv_output_length(10, 3, 2).unwrap(), 4);
        assert!(matches!(
            conv_output_length(19, 20, 1),
            Err(ShapeError::KernelTooLong { .. })
        ));
    }

    #[test]
    fn conv_forward_matches_manual_computation() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut conv: Conv1d<f64> = Conv1d::new("c", 1, 1, 2, 1, &mut rng);
        conv.w = ndarray::arr3(&[[[1.0, -1.0]]]);
        conv.b = ndarray::arr1(&[0.5]);
        let x = arr2(&[[3.0, 1.0, 4.0, 1.0]]);
        let y = conv.forward(&x).unwrap();
        assert_eq!(y.ncols(), 3);
        assert_abs_diff_eq!(y[[0, 0]], 2.5);
        assert_abs_diff_eq!(y[[0, 1]], -2.5);
        assert_abs_diff_eq!(y[[0, 2]], 3.5);
    }

    #[test]
    fn conv_backward_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut conv: Conv1d<f64> = Conv1d::new("c", 2, 3, 3, 1, &mut rng);
        let x = Array2::from_shape_fn((2, 6), |(i, j)| (i as f64 - 0.5) * 0.3 + j as f64 * 0.1);
        let y = conv.forward(&x).unwrap();
        let ones = Array2::from_elem(y.raw_dim(), 1.0);
        let gx = conv.backward(&x, &ones);

        let h = 1e-6;
        // a few weight coordinates
        for idx in [[0usize, 0usize, 0usize], [2, 1, 2], [1, 0, 1]] {
            let orig = conv.w[idx];
            conv.w[idx] = orig + h;
            let up: f64 = conv.forward(&x).unwrap().sum();
            conv.w[idx] = orig - h;
            let down: f64 = conv.forward(&x).unwrap().sum();
            conv.w[idx] = orig;
            assert_abs_diff_eq!(conv.gw[idx], (up - down) / (2.0 * h), epsilon = 1e-5);
        }
        // an input coordinate
        let mut xp = x.clone();
        xp[[1, 3]] += h;
        let up: f64 = conv.forward(&xp).unwrap().sum();
        xp[[1, 3]] -= 2.0 * h;
        let down: f64 = conv.forward(&xp).unwrap().sum();
        assert_abs_diff_eq!(gx[[1, 3]], (up - down) / (2.0 * h), epsilon = 1e-5);
    }

    #[test]
    fn maxpool_size_one_is_identity() {
        let pool = MaxPool1d { size: 1 };
        let x = arr2(&[[1.0, -2.0, 3.0]]);
        let (y, cache) = pool.forward(&x);
        assert_eq!(y, x);
        let g = pool.backward(&cache, &arr2(&[[0.1, 0.2, 0.3]]));
        assert_eq!(g, arr2(&[[0.1, 0.2, 0.3]]));
    }

    #[test]
    fn maxpool_routes_gradient_to_argmax() {
        let pool = MaxPool1d { size: 2 };
        let x = arr2(&[[1.0, 5.0, 2.0, 0.5]]);
        let (y, cache) = pool.forward(&x);
        assert_eq!(y, arr2(&[[5.0, 2.0]]));
        let g = pool.backward(&cache, &arr2(&[[1.0, 1.0]]));
        assert_eq!(g, arr2(&[[0.0, 1.0, 1.0, 0.0]]));
    }
}
