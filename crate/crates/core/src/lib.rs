//! Design-quality assessment primitives for Python programs.
//!
//! The crate is split along the pipeline:
//!
//! - [`syntax`] / [`features`]: a language-neutral syntax tree plus the 33
//!   design statistics computed over it. Parsing itself lives in the `pydesign`
//!   companion crate; this crate only consumes the resulting tree.
//! - [`mlp`] / [`ensemble`]: a single-hidden-layer regressor trained from
//!   scratch with ADAM, and the seed-averaged ensemble on top of it.
//! - [`baselines`]: closed-form linear regression, a CART regression tree,
//!   and the sigmoid-wrapped linear model.
//! - [`feedback`]: counterfactual "increase/decrease" suggestions against the
//!   mean profile of high-scoring programs.
//! - [`standardize`], [`split`], [`metrics`], [`rng`]: small supporting pieces.
//!
//! Everything here is pure and deterministic: no IO, no global state, no
//! hidden entropy. The crate is `no_std` (with `alloc`) so the numeric core
//! can be embedded anywhere; file formats and the CLI live in `pydesign`.

#![no_std]

extern crate alloc;

pub mod baselines;
pub mod ensemble;
pub mod error;
pub mod features;
pub mod feedback;
pub mod metrics;
pub mod mlp;
pub mod rng;
pub mod schema;
pub mod split;
pub mod standardize;
pub mod syntax;

pub use error::CoreError;
pub use features::{extract_features, subtree_size, FeatureVector, FEATURE_COUNT};
pub use schema::{FeatureSchema, SCHEMA_VERSION};
pub use syntax::{LiteralKind, NodeKind, ProgramSyntax, SourceProgram, SyntaxNode};

use alloc::vec::Vec;

/// A standardized feature row paired with its ground-truth score.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct LabeledRow {
    pub features: Vec<f64>,
    pub target: f64,
}

/// Anything that maps a standardized feature vector to a score.
///
/// Implemented by every model kind so that evaluation and feedback are
/// agnostic to which regressor backs an artifact.
pub trait ScoreModel {
    fn predict(&self, x: &[f64]) -> Result<f64, CoreError>;
}
