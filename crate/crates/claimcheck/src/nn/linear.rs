//! Affine layer and token/position embedding tables.

use ndarray::{Array1, Array2, Axis};
use rand_chacha::ChaCha8Rng;

use super::init::{normal2, zeros1, INIT_STD};
use super::{ParamVisitor, Scalar, Trainable};

/// Fully-connected layer `y = x Wᵀ + b` with `w: [out, in]`.
#[derive(Debug, Clone)]
pub struct Linear<S> {
    pub name: String,
    pub w: Array2<S>,
    pub b: Array1<S>,
    gw: Array2<S>,
    gb: Array1<S>,
}

impl<S: Scalar> Linear<S> {
    pub fn new(name: &str, in_width: usize, out_width: usize, rng: &mut ChaCha8Rng) -> Self {
        Self {
            name: name.to_string(),
            w: normal2(out_width, in_width, INIT_STD, rng),
            b: zeros1(out_width),
            gw: Array2::zeros((out_width, in_width)),
            gb: Array1::zeros(out_width),
        }
    }

    pub fn in_width(&self) -> usize {
        self.w.ncols()
    }

    pub fn out_width(&self) -> usize {
        self.w.nrows()
    }

    /// `x: [n, in] -> [n, out]`
    pub fn forward(&self, x: &Array2<S>) -> Array2<S> {
        x.dot(&self.w.t()) + &self.b
    }

    /// Accumulates weight gradients and returns the input gradient.
    pub fn backward(&mut self, x: &Array2<S>, grad_out: &Array2<S>) -> Array2<S> {
        self.gw = &self.gw + &grad_out.t().dot(x);
        self.gb = &self.gb + &grad_out.sum_axis(Axis(0));
        grad_out.dot(&self.w)
    }
}

impl<S: Scalar> Trainable<S> for Linear<S> {
    fn visit_params(&mut self, visitor: &mut dyn ParamVisitor<S>) {
        let w_shape = [self.w.nrows(), self.w.ncols()];
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

/// Lookup table mapping ids to vectors, with scatter-add backward.
#[derive(Debug, Clone)]
pub struct Embedding<S> {
    pub name: String,
    pub table: Array2<S>,
    gtable: Array2<S>,
}

impl<S: Scalar> Embedding<S> {
    pub fn new(name: &str, vocab: usize, width: usize, rng: &mut ChaCha8Rng) -> Self {
        Self {
            name: name.to_string(),
            table: normal2(vocab, width, INIT_STD, rng),
            gtable: Array2::zeros((vocab, width)),
        }
    }

    pub fn vocab(&self) -> usize {
        self.table.nrows()
    }

    /// `ids: [t] -> [t, width]`
    pub fn forward(&self, ids: &[usize]) -> Array2<S> {
        let width = self.table.ncols();
        let mut out = Array2::zeros((ids.len(), width));
        for (row, &id) in ids.iter().enumerate() {
            out.row_mut(row).assign(&self.table.row(id));
        }
        out
    }

    pub fn backward(&mut self, ids: &[usize], grad_out: &Array2<S>) {
        for (row, &id) in ids.iter().enumerate() {
            let mut dst = self.gtable.row_mut(id);
            dst += &grad_out.row(row);
        }
    }
}

impl<S: Scalar> Trainable<S> for Embedding<S> {
    fn visit_params(&mut self, visitor: &mut dyn ParamVisitor<S>) {
        let shape = [self.table.nrows(), self.table.ncols()];
        visitor.visit(
            &format!("{}.table", self.name),
            &shape,
            self.table.as_slice_mut().expect("standard layout"),
            self.gtable.as_slice_mut().expect("standard layout"),
        );
    }
}
