//! Minimal neural-network substrate: layers with explicit forward/backward
//! passes, parameter visiting, and the Adam optimizer.
//!
//! Every layer owns its weights together with a same-shaped gradient buffer.
//! `backward` accumulates into the gradient buffers, so batching is a loop of
//! backward calls followed by one optimizer step. Parameters are reached
//! uniformly through [`Trainable::visit_params`], which is what the
//! optimizer, checkpointing, and the finite-difference gradient checker use.

pub mod activations;
pub mod adam;
pub mod conv;
pub mod dropout;
pub mod gradcheck;
pub mod init;
pub mod layernorm;
pub mod linear;

use std::collections::BTreeMap;
use std::fmt::{Debug, Display};
use std::iter::Sum;

use ndarray::{LinalgScalar, ScalarOperand};
use num_traits::{Float, FromPrimitive, NumAssignOps, ToPrimitive};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use adam::Adam;

/// Floating-point scalar the network math is generic over.
pub trait Scalar:
    Float
    + FromPrimitive
    + ToPrimitive
    + NumAssignOps
    + ScalarOperand
    + LinalgScalar
    + Sum
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    const NAME: &'static str;
}

impl Scalar for f32 {
    const NAME: &'static str = "f32";
}

impl Scalar for f64 {
    const NAME: &'static str = "f64";
}

/// Convert an `f64` constant into the active scalar type.
#[inline]
pub fn scalar<S: Scalar>(x: f64) -> S {
    S::from_f64(x).expect("f64 constant out of scalar range")
}

/// Visitor over every parameter tensor of a network, in a fixed order.
///
/// `value` and `grad` are same-length flat views of a tensor in standard
/// (row-major) layout; `shape` describes both.
pub trait ParamVisitor<S: Scalar> {
    fn visit(&mut self, name: &str, shape: &[usize], value: &mut [S], grad: &mut [S]);
}

/// Anything holding trainable parameters.
pub trait Trainable<S: Scalar> {
    fn visit_params(&mut self, visitor: &mut dyn ParamVisitor<S>);
}

/// Reset all gradient buffers to zero.
pub fn zero_grads<S: Scalar, M: Trainable<S> + ?Sized>(model: &mut M) {
    struct Zero;
    impl<S: Scalar> ParamVisitor<S> for Zero {
        fn visit(&mut self, _: &str, _: &[usize], _: &mut [S], grad: &mut [S]) {
            grad.fill(S::zero());
        }
    }
    model.visit_params(&mut Zero);
}

/// Total number of scalar parameters.
pub fn param_count<S: Scalar, M: Trainable<S> + ?Sized>(model: &mut M) -> usize {
    struct Count(usize);
    impl<S: Scalar> ParamVisitor<S> for Count {
        fn visit(&mut self, _: &str, _: &[usize], value: &mut [S], _: &mut [S]) {
            self.0 += value.len();
        }
    }
    let mut c = Count(0);
    model.visit_params(&mut c);
    c.0
}

/// A named tensor snapshot, stored as `f64` regardless of the model scalar.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TensorEntry {
    pub shape: Vec<usize>,
    pub data: Vec<f64>,
}

/// Ordered name → tensor map used for checkpoints and weight snapshots.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TensorMap(pub BTreeMap<String, TensorEntry>);

#[derive(Debug, Error)]
pub enum TensorImportError {
    #[error("missing tensor {0:?} in snapshot")]
    Missing(String),
    #[error("tensor {name:?} has shape {found:?}, expected {expected:?}")]
    ShapeMismatch {
        name: String,
        expected: Vec<usize>,
        found: Vec<usize>,
    },
}

/// Snapshot every parameter into a [`TensorMap`].
pub fn export_tensors<S: Scalar, M: Trainable<S> + ?Sized>(model: &mut M) -> TensorMap {
    struct Export(TensorMap);
    impl<S: Scalar> ParamVisitor<S> for Export {
        fn visit(&mut self, name: &str, shape: &[usize], value: &mut [S], _: &mut [S]) {
            let data = value.iter().map(|v| v.to_f64().unwrap()).collect();
            self.0 .0.insert(
                name.to_string(),
                TensorEntry {
                    shape: shape.to_vec(),
                    data,
                },
            );
        }
    }
    let mut e = Export(TensorMap::default());
    model.visit_params(&mut e);
    e.0
}

/// Write a snapshot back into the model's parameters.
pub fn import_tensors<S: Scalar, M: Trainable<S> + ?Sized>(
    model: &mut M,
    tensors: &TensorMap,
) -> Result<(), TensorImportError> {
    struct Import<'a> {
        tensors: &'a TensorMap,
        error: Option<TensorImportError>,
    }
    impl<S: Scalar> ParamVisitor<S> for Import<'_> {
        fn visit(&mut self, name: &str, shape: &[usize], value: &mut [S], _: &mut [S]) {
            if self.error.is_some() {
                return;
            }
            match self.tensors.0.get(name) {
                None => self.error = Some(TensorImportError::Missing(name.to_string())),
                Some(entry) if entry.shape != shape => {
                    self.error = Some(TensorImportError::ShapeMismatch {
                        name: name.to_string(),
                        expected: shape.to_vec(),
                        found: entry.shape.clone(),
                    })
                }
                Some(entry) => {
                    for (v, x) in value.iter_mut().zip(&entry.data) {
                        *v = scalar(*x);
                    }
                }
            }
        }
    }
    let mut i = Import {
        tensors,
        error: None,
    };
    model.visit_params(&mut i);
    match i.error {
        Some(e) => Err(e),
        None => Ok(()),
    }
}
