//! Finite-difference verification of analytic gradients.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{scalar, ParamVisitor, Scalar, Trainable};

/// One checked coordinate: the analytic gradient from backward and the
/// central-difference estimate of the same coordinate.
#[derive(Debug, Clone)]
pub struct GradCheckPoint {
    pub name: String,
    pub index: usize,
    pub analytic: f64,
    pub numeric: f64,
}

impl GradCheckPoint {
    /// Relative error with an absolute floor for near-zero gradients.
    pub fn relative_error(&self) -> f64 {
        let denom = self.analytic.abs().max(self.numeric.abs()).max(1e-8);
        (self.analytic - self.numeric).abs() / denom
    }
}

fn coordinate_count<S: Scalar, M: Trainable<S> + ?Sized>(model: &mut M) -> usize {
    super::param_count(model)
}

fn read_grad<S: Scalar, M: Trainable<S> + ?Sized>(model: &mut M, flat: usize) -> (String, usize, f64) {
    struct Read {
        target: usize,
        seen: usize,
        out: Option<(String, usize, f64)>,
    }
    impl<S: Scalar> ParamVisitor<S> for Read {
        fn visit(&mut self, name: &str, _: &[usize], value: &mut [S], grad: &mut [S]) {
            if self.out.is_some() {
                self.seen += value.len();
                return;
            }
            if self.target < self.seen + value.len() {
                let local = self.target - self.seen;
                self.out = Some((name.to_string(), local, grad[local].to_f64().unwrap()));
            }
            self.seen += value.len();
        }
    }
    let mut r = Read {
        target: flat,
        seen: 0,
        out: None,
    };
    model.visit_params(&mut r);
    r.out.expect("flat index within parameter count")
}

fn nudge<S: Scalar, M: Trainable<S> + ?Sized>(model: &mut M, flat: usize, delta: f64) {
    struct Nudge {
        target: usize,
        seen: usize,
        delta: f64,
        done: bool,
    }
    impl<S: Scalar> ParamVisitor<S> for Nudge {
        fn visit(&mut self, _: &str, _: &[usize], value: &mut [S], _: &mut [S]) {
            if self.done {
                return;
            }
            if self.target < self.seen + value.len() {
                let local = self.target - self.seen;
                let old = value[local].to_f64().unwrap();
                value[local] = scalar(old + self.delta);
                self.done = true;
            }
            self.seen += value.len();
        }
    }
    let mut n = Nudge {
        target: flat,
        seen: 0,
        delta,
        done: true,
    };
    n.done = false;
    model.visit_params(&mut n);
}

/// Compare analytic gradients against central finite differences on
/// `n_coords` randomly chosen parameter coordinates.
///
/// `loss_and_grad` must zero the gradients, run forward/backward, and return
/// the loss; `loss_only` must run the same forward pass without touching
/// gradients. Both must be deterministic for the check to mean anything.
pub fn check_gradients<S, M>(
    model: &mut M,
    mut loss_and_grad: impl FnMut(&mut M) -> f64,
    mut loss_only: impl FnMut(&mut M) -> f64,
    n_coords: usize,
    step: f64,
    rng: &mut ChaCha8Rng,
) -> Vec<GradCheckPoint>
where
    S: Scalar,
    M: Trainable<S> + ?Sized,
{
    let total = coordinate_count(model);
    assert!(total > 0, "model has no parameters");
    loss_and_grad(model);

    let mut points = Vec::with_capacity(n_coords);
    for _ in 0..n_coords {
        let flat = rng.random_range(0..total);
        let (name, index, analytic) = read_grad(model, flat);
        nudge(model, flat, step);
        let up = loss_only(model);
        nudge(model, flat, -2.0 * step);
        let down = loss_only(model);
        nudge(model, flat, step);
        let numeric = (up - down) / (2.0 * step);
        points.push(GradCheckPoint {
            name,
            index,
            analytic,
            numeric,
        });
    }
    points
}
