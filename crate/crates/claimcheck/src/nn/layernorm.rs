//! Layer normalization over the last dimension.

use ndarray::{Array1, Array2, Axis};

use super::{scalar, ParamVisitor, Scalar, Trainable};

const LN_EPS: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct LayerNorm<S> {
    pub name: String,
    pub gamma: Array1<S>,
    pub beta: Array1<S>,
    ggamma: Array1<S>,
    gbeta: Array1<S>,
}

/// Per-row statistics captured during the forward pass.
#[derive(Debug, Clone)]
pub struct LnCache<S> {
    xhat: Array2<S>,
    inv_std: Array1<S>,
}

impl<S: Scalar> LayerNorm<S> {
    pub fn new(name: &str, width: usize) -> Self {
        Self {
            name: name.to_string(),
            gamma: Array1::ones(width),
            beta: Array1::zeros(width),
            ggamma: Array1::zeros(width),
            gbeta: Array1::zeros(width),
        }
    }

    /// `x: [n, width]` normalized per row.
    pub fn forward(&self, x: &Array2<S>) -> (Array2<S>, LnCache<S>) {
        let n = x.nrows();
        let width = x.ncols();
        let inv_w = scalar::<S>(1.0 / width as f64);
        let mut xhat = Array2::zeros((n, width));
        let mut inv_std = Array1::zeros(n);
        for (i, row) in x.rows().into_iter().enumerate() {
            let mean = row.sum() * inv_w;
            let var = row.iter().map(|v| (*v - mean) * (*v - mean)).sum::<S>() * inv_w;
            let is = S::one() / (var + scalar(LN_EPS)).sqrt();
            inv_std[i] = is;
            for (j, v) in row.iter().enumerate() {
                xhat[[i, j]] = (*v - mean) * is;
            }
        }
        let y = &xhat * &self.gamma + &self.beta;
        (y, LnCache { xhat, inv_std })
    }

    pub fn backward(&mut self, cache: &LnCache<S>, grad_out: &Array2<S>) -> Array2<S> {
        let width = cache.xhat.ncols();
        let inv_w = scalar::<S>(1.0 / width as f64);

        self.ggamma = &self.ggamma + &(grad_out * &cache.xhat).sum_axis(Axis(0));
        self.gbeta = &self.gbeta + &grad_out.sum_axis(Axis(0));

        let dyhat = grad_out * &self.gamma;
        let mut grad_in = Array2::zeros(cache.xhat.raw_dim());
        for i in 0..cache.xhat.nrows() {
            let dy = dyhat.row(i);
            let xh = cache.xhat.row(i);
            let mean_dy = dy.sum() * inv_w;
            let mean_dy_xhat = dy
                .iter()
                .zip(xh.iter())
                .map(|(a, b)| *a * *b)
                .sum::<S>()
                * inv_w;
            for j in 0..width {
                grad_in[[i, j]] =
                    cache.inv_std[i] * (dy[j] - mean_dy - xh[j] * mean_dy_xhat);
            }
        }
        grad_in
    }
}

impl<S: Scalar> Trainable<S> for LayerNorm<S> {
    fn visit_params(&mut self, visitor: &mut dyn ParamVisitor<S>) {
        let shape = [self.gamma.len()];
        visitor.visit(
            &format!("{}.gamma", self.name),
            &shape,
            self.gamma.as_slice_mut().expect("standard layout"),
            self.ggamma.as_slice_mut().expect("standard layout"),
        );
        visitor.visit(
            &format!("{}.beta", self.name),
            &shape,
            self.beta.as_slice_mut().expect("standard layout"),
            self.gbeta.as_slice_mut().expect("standard layout"),
        );
    }
}
