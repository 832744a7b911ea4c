//! Sign-aware, multistate peak-to-peak similarity.
//!
//! Signals are embedded into nonnegative coordinate–state mass tensors
//! ([`embeddings`]); the min–max Tanimoto construction on those tensors gives
//! a bounded metric and positive-semidefinite kernels ([`pairwise`]); the same
//! per-atom minima over groups of signals give exact coalition budgets by
//! Möbius inversion ([`coalitions`]); and normalizing the embeddings links the
//! similarity to total variation ([`probabilistic`]).

pub mod coalitions;
pub mod embeddings;
pub mod error;
pub mod pairwise;
pub mod partitions;
pub mod probabilistic;
pub mod synthetic;

pub use embeddings::{Atom, ComplexSignal, EmbeddingKind, MassEmbedding, Signal};
pub use error::{Error, Result};
pub use partitions::{AngularPartition, CoarseningMap, IntervalState, Sector, StatePartition};
