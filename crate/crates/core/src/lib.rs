//! Core primitives for word sense induction over pre-trained word embeddings.
//!
//! Everything in this crate is pure computation over in-memory values:
//! the lexical-sample dataset model, context vectorization with optional
//! tf-idf / chi-square token weighting, three deterministic clustering
//! algorithms (affinity propagation, agglomerative, k-means), prototype
//! based sense induction, partition metrics (adjusted Rand index,
//! Krippendorff's alpha), and a synthetic benchmark generator with
//! planted sense structure.
//!
//! The crate is `no_std` + `alloc`; file formats and the command line
//! live in the companion `wsi` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod cluster;
pub mod dataset;
pub mod embedding;
pub mod induce;
pub mod metrics;
pub mod rng;
pub mod synth;
pub mod vectorize;

pub use cluster::{ClusterAssignment, SimilarityMatrix};
pub use dataset::{ContextRecord, Dataset, SplitSpec};
pub use embedding::EmbeddingStore;
pub use induce::{Method, MethodConfig, RunOutput, SenseInventory};
pub use synth::SynthSpec;
pub use vectorize::WeightingScheme;
