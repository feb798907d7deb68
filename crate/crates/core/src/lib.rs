//! Hybrid quantum-classical regression toolkit for hydration biomarker prediction.
//!
//! The crate bundles everything needed to reproduce the comparison between a
//! gradient-boosted classical baseline and two variational-quantum-circuit
//! regressor families on synthetic urinary biomarker data:
//!
//! - [`statevector`] — exact complex statevector simulation with rotation
//!   gates, entanglers, and Pauli-Z-string expectation values.
//! - [`circuit`] — layer-level circuit IR: angle embedding, variational
//!   blocks, entangler patterns, data re-uploading, and the permutation
//!   symmetric two-qubit family.
//! - [`learn`] — MSE loss, exact parameter-shift gradients, a finite
//!   difference oracle, Adam, and the hybrid training loop.
//! - [`preprocess`] — z-score standardization, PCA with variance-ratio
//!   component selection, and angle rescaling for quantum encoding.
//! - [`datasets`] — seeded synthetic biomarker generator, CSV ingestion,
//!   and deterministic train/test splits.
//! - [`baseline`] — gradient-boosted regression trees with seeded random
//!   hyperparameter search.
//! - [`models`] — unified train/predict/serialize facade over the three
//!   model families.
//! - [`bench`] — metrics, residual analysis, and the benchmark report
//!   writer behind the `hydroq` CLI.

pub mod baseline;
pub mod bench;
pub mod circuit;
pub mod datasets;
pub mod error;
pub mod learn;
pub mod models;
pub mod preprocess;
pub mod statevector;

pub use error::{Error, Result};
