//! IO, file formats, and pipeline plumbing around `pydesign-core`.
//!
//! - [`parse`]: Python 3 parsing and lowering into the core syntax tree.
//! - [`corpus`]: manifest loading, feature extraction over a corpus.
//! - [`synth`]: deterministic synthetic-corpus generator for experiments.
//! - [`artifact`]: the versioned on-disk model bundle.
//! - [`pipeline`]: the load -> split -> standardize -> train -> profile flow
//!   shared by the CLI and the test suites.
//! - [`messages`]: feedback sentence-table override files.

pub mod artifact;
pub mod corpus;
pub mod messages;
pub mod parse;
pub mod pipeline;
pub mod synth;
