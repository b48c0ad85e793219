//! Stateless activations with explicit backward passes.

use ndarray::{Array1, Array2};

use super::{scalar, Scalar};

pub fn relu<S: Scalar>(x: &Array2<S>) -> Array2<S> {
    x.mapv(|v| if v > S::zero() { v } else { S::zero() })
}

/// `x_pre` is the input that was fed to `relu`.
pub fn relu_backward<S: Scalar>(x_pre: &Array2<S>, grad_out: &Array2<S>) -> Array2<S> {
    let mut g = grad_out.clone();
    g.zip_mut_with(x_pre, |gv, xv| {
        if *xv <= S::zero() {
            *gv = S::zero();
        }
    });
    g
}

const GELU_C: f64 = 0.797_884_560_802_865_4; // sqrt(2/pi)
const GELU_A: f64 = 0.044_715;

/// Tanh approximation of GELU.
pub fn gelu<S: Scalar>(x: &Array2<S>) -> Array2<S> {
    let c = scalar::<S>(GELU_C);
    let a = scalar::<S>(GELU_A);
    let half = scalar::<S>(0.5);
    x.mapv(|v| {
        let u = c * (v + a * v * v * v);
        half * v * (S::one() + u.tanh())
    })
}

pub fn gelu_backward<S: Scalar>(x_pre: &Array2<S>, grad_out: &Array2<S>) -> Array2<S> {
    let c = scalar::<S>(GELU_C);
    let a = scalar::<S>(GELU_A);
    let half = scalar::<S>(0.5);
    let three = scalar::<S>(3.0);
    let mut g = grad_out.clone();
    g.zip_mut_with(x_pre, |gv, xv| {
        let v = *xv;
        let u = c * (v + a * v * v * v);
        let t = u.tanh();
        let sech2 = S::one() - t * t;
        let du = c * (S::one() + three * a * v * v);
        let d = half * (S::one() + t) + half * v * sech2 * du;
        *gv = *gv * d;
    });
    g
}

pub fn tanh_vec<S: Scalar>(x: &Array1<S>) -> Array1<S> {
    x.mapv(|v| v.tanh())
}

/// `y` is the tanh output.
pub fn tanh_backward_vec<S: Scalar>(y: &Array1<S>, grad_out: &Array1<S>) -> Array1<S> {
    let mut g = grad_out.clone();
    g.zip_mut_with(y, |gv, yv| *gv = *gv * (S::one() - *yv * *yv));
    g
}

pub fn sigmoid<S: Scalar>(x: S) -> S {
    S::one() / (S::one() + (-x).exp())
}

/// Row-wise softmax of a square score matrix.
pub fn softmax_rows<S: Scalar>(x: &Array2<S>) -> Array2<S> {
    let mut out = x.clone();
    for mut row in out.rows_mut() {
        let max = row.iter().cloned().fold(S::neg_infinity(), S::max);
        row.mapv_inplace(|v| (v - max).exp());
        let sum = row.sum();
        row.mapv_inplace(|v| v / sum);
    }
    out
}

/// Backward through row-wise softmax given its output `p`.
pub fn softmax_rows_backward<S: Scalar>(p: &Array2<S>, grad_out: &Array2<S>) -> Array2<S> {
    let mut grad_in = Array2::zeros(p.raw_dim());
    for i in 0..p.nrows() {
        let pi = p.row(i);
        let gi = grad_out.row(i);
        let dot = pi.iter().zip(gi.iter()).map(|(a, b)| *a * *b).sum::<S>();
        for j in 0..p.ncols() {
            grad_in[[i, j]] = pi[j] * (gi[j] - dot);
        }
    }
    grad_in
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use ndarray::arr2;

    #[test]
    fn softmax_rows_sum_to_one() {
        let x = arr2(&[[1.0, 2.0, 3.0], [-1.0, 0.0, 100.0]]);
        let p = softmax_rows(&x);
        for row in p.rows() {
            assert_abs_diff_eq!(row.sum(), 1.0, epsilon = 1e-12);
        }
        assert!(p[[1, 2]] > 0.999);
    }

    #[test]
    fn gelu_backward_matches_finite_differences() {
        let x = arr2(&[[-2.0, -0.3, 0.0, 0.7, 3.1]]);
        let ones = Array2::from_elem(x.raw_dim(), 1.0);
        let g = gelu_backward(&x, &ones);
        let h = 1e-6;
        for j in 0..x.ncols() {
            let mut xp = x.clone();
            xp[[0, j]] += h;
            let up: f64 = gelu(&xp).sum();
            xp[[0, j]] -= 2.0 * h;
            let down: f64 = gelu(&xp).sum();
            assert_abs_diff_eq!(g[[0, j]], (up - down) / (2.0 * h), epsilon = 1e-6);
        }
    }

    #[test]
    fn softmax_backward_matches_finite_differences() {
        let x = arr2(&[[0.3, -1.2, 2.0]]);
        let w = arr2(&[[1.0, -0.5, 0.25]]);
        let p = softmax_rows(&x);
        let dp = w.clone();
        let dx = softmax_rows_backward(&p, &dp);
        let h = 1e-6;
        for j in 0..3 {
            let mut xp = x.clone();
            xp[[0, j]] += h;
            let up: f64 = (softmax_rows(&xp) * &w).sum();
            xp[[0, j]] -= 2.0 * h;
            let down: f64 = (softmax_rows(&xp) * &w).sum();
            assert_abs_diff_eq!(dx[[0, j]], (up - down) / (2.0 * h), epsilon = 1e-6);
        }
    }

    #[test]
    fn relu_masks_negative_gradient() {
        let x = arr2(&[[-1.0, 2.0]]);
        let g = relu_backward(&x, &arr2(&[[5.0, 5.0]]));
        assert_eq!(g, arr2(&[[0.0, 5.0]]));
    }
}
