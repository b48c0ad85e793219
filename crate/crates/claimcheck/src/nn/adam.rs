//! Adam optimizer over visited parameters.

use std::collections::HashMap;

use super::{scalar, ParamVisitor, Scalar, Trainable};

/// Adam with the usual default moment coefficients. Moment buffers are kept
/// in `f64` and keyed by parameter name, so the optimizer survives model
/// save/load cycles as long as names are stable.
#[derive(Debug, Clone)]
pub struct Adam {
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
    step: u64,
    m: HashMap<String, Vec<f64>>,
    v: HashMap<String, Vec<f64>>,
}

impl Adam {
    pub fn new(learning_rate: f64) -> Self {
        Self {
            learning_rate,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
            step: 0,
            m: HashMap::new(),
            v: HashMap::new(),
        }
    }

    pub fn steps_taken(&self) -> u64 {
        self.step
    }

    /// Apply one update from the gradients currently held by the model.
    pub fn step<S: Scalar, M: Trainable<S> + ?Sized>(&mut self, model: &mut M) {
        self.step += 1;
        let bias1 = 1.0 - self.beta1.powi(self.step as i32);
        let bias2 = 1.0 - self.beta2.powi(self.step as i32);
        struct Update<'a> {
            opt: &'a mut Adam,
            bias1: f64,
            bias2: f64,
        }
        impl<S: Scalar> ParamVisitor<S> for Update<'_> {
            fn visit(&mut self, name: &str, _: &[usize], value: &mut [S], grad: &mut [S]) {
                let m = self
                    .opt
                    .m
                    .entry(name.to_string())
                    .or_insert_with(|| vec![0.0; value.len()]);
                let v = self
                    .opt
                    .v
                    .entry(name.to_string())
                    .or_insert_with(|| vec![0.0; value.len()]);
                for i in 0..value.len() {
                    let g = grad[i].to_f64().unwrap();
                    m[i] = self.opt.beta1 * m[i] + (1.0 - self.opt.beta1) * g;
                    v[i] = self.opt.beta2 * v[i] + (1.0 - self.opt.beta2) * g * g;
                    let m_hat = m[i] / self.bias1;
                    let v_hat = v[i] / self.bias2;
                    let delta = self.opt.learning_rate * m_hat / (v_hat.sqrt() + self.opt.epsilon);
                    let updated = value[i].to_f64().unwrap() - delta;
                    value[i] = scalar(updated);
                }
            }
        }
        let mut u = Update {
            opt: self,
            bias1,
            bias2,
        };
        model.visit_params(&mut u);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nn::linear::Linear;
    use crate::nn::{zero_grads, Trainable};
    use ndarray::arr2;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Minimizing f(w) = sum((w x - y)^2) with Adam should steadily reduce
    /// the loss on a trivially solvable regression.
    #[test]
    fn adam_descends_quadratic_objective() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut lin: Linear<f64> = Linear::new("l", 2, 1, &mut rng);
        let x = arr2(&[[1.0, 0.0], [0.0, 1.0], [1.0, 1.0]]);
        let y = arr2(&[[2.0], [-1.0], [1.0]]);
        let mut opt = Adam::new(0.05);
        let mut losses = Vec::new();
        for _ in 0..200 {
            zero_grads(&mut lin);
            let pred = lin.forward(&x);
            let diff = &pred - &y;
            let loss: f64 = diff.iter().map(|d| d * d).sum();
            losses.push(loss);
            let grad = diff.mapv(|d| 2.0 * d);
            lin.backward(&x, &grad);
            opt.step(&mut lin);
        }
        assert!(losses[0] > 1.0);
        assert!(losses.last().unwrap() < &1e-3, "final {:?}", losses.last());
    }

    #[test]
    fn first_step_moves_each_coordinate_by_about_lr() {
        // With bias correction, |delta| of the first Adam step is close to lr
        // for any nonzero gradient.
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut lin: Linear<f64> = Linear::new("l", 1, 1, &mut rng);
        let before = lin.w[[0, 0]];
        let x = arr2(&[[1.0]]);
        let g = arr2(&[[3.7]]);
        lin.backward(&x, &g);
        let mut opt = Adam::new(0.01);
        opt.step(&mut lin);
        let delta = (lin.w[[0, 0]] - before).abs();
        assert!((delta - 0.01).abs() < 1e-6, "delta = {delta}");
    }

    struct Pair<'a>(&'a mut Linear<f64>, &'a mut Linear<f64>);
    impl Trainable<f64> for Pair<'_> {
        fn visit_params(&mut self, v: &mut dyn crate::nn::ParamVisitor<f64>) {
            self.0.visit_params(v);
            self.1.visit_params(v);
        }
    }

    #[test]
    fn state_is_kept_per_parameter_name() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut a: Linear<f64> = Linear::new("a", 1, 1, &mut rng);
        let mut b: Linear<f64> = Linear::new("b", 1, 1, &mut rng);
        let x = arr2(&[[1.0]]);
        let g = arr2(&[[1.0]]);
        a.backward(&x, &g);
        b.backward(&x, &g);
        let mut opt = Adam::new(0.1);
        opt.step(&mut Pair(&mut a, &mut b));
        assert_eq!(opt.m.len(), 4); // a.w a.b b.w b.b
    }
}
