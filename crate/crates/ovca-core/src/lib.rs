//! Core algorithms for a tabular ovarian-screening classification pipeline.
//!
//! Everything in this crate is pure and deterministic: given the same inputs
//! and seeds, every function produces bit-identical output. IO, configuration,
//! and report emission live in the companion `ovca-cli` crate.
//!
//! The crate is `no_std` (with `alloc`) so the numeric kernels can be reused
//! in embedded or wasm contexts; math goes through [`libm`].

#![no_std]

extern crate alloc;

pub mod dataset;
pub mod error;
pub mod impute;
pub mod metrics;
pub mod models;
pub mod rng;
pub mod scale;
pub mod schema;
pub mod smote;
pub mod split;
pub mod stats;
pub mod synth;

pub use dataset::{ClassLabel, FeatureMatrix, LabeledDataset, NUM_CLASSES};
pub use error::{Error, Result};
pub use schema::{ColumnKind, ColumnSchema, Schema};
