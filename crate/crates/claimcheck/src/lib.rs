//! Short-claim veracity classification toolkit.
//!
//! The pipeline runs in four stages, each usable on its own:
//!
//! 1. [`corpus`] — parse raw LIAR-format TSV files, binarize the six-way
//!    truthfulness labels, anonymize speakers, and split deterministically.
//! 2. [`enrichment`] — attach a sentiment score/label and five emotion scores
//!    to every claim through pluggable analyzers (remote services, a
//!    deterministic local lexicon, or a precomputed corpus file), with a
//!    persistent on-disk cache.
//! 3. [`fusion`] + [`models`] — assemble per-record model inputs for an
//!    experiment variant and run them through a transformer encoder with
//!    either a feed-forward or a 1D-CNN classification head.
//! 4. [`trainer`] + [`evalgrid`] — train with seeded shuffling and early
//!    stopping, then evaluate single experiments or whole comparison grids.
//!
//! All model math is generic over the scalar type (`f32` or `f64`) through
//! [`nn::Scalar`]; concrete aliases live at the crate root.

pub mod cli;
pub mod corpus;
pub mod enrichment;
pub mod evalgrid;
pub mod fusion;
pub mod models;
pub mod nn;
pub mod synth;
pub mod trainer;

pub use nn::Scalar;

/// Scalar type used by the command-line pipelines.
pub type DefaultScalar = f64;

/// Claim model specialized to `f32`.
pub type ClaimModel32 = models::ClaimModel<f32>;

/// Claim model specialized to `f64`.
pub type ClaimModel64 = models::ClaimModel<f64>;
