//! Mesh patterns of short length: containment semantics, equivalence-preserving
//! transformations, a fast avoidance-counting engine, exact formula evaluation,
//! and a Wilf-classification pipeline with OEIS sequence matching.
//!
//! A *mesh pattern* is a pair `(τ, R)` of a permutation `τ` of length `k` and a
//! set `R` of unit boxes in the `(k+1) × (k+1)` grid drawn around its plot. An
//! occurrence of the pattern in a host permutation is an order-isomorphic
//! subsequence such that every shaded box's region of the host contains no
//! point. The crate works with exact integers throughout.
//!
//! Modules:
//! - [`perm`] / [`pattern`]: the core types and the occurrence semantics.
//! - [`transform`]: symmetries, shifts, switch operations, the shading lemma.
//! - [`engine`]: bit-mask counting of avoiders over all length-2 patterns.
//! - [`series`] / [`formulas`]: exact power-series arithmetic and the registry
//!   of closed forms, recurrences and generating functions.
//! - [`classify`]: union-find classification cascade and report emission.
//! - [`oeis`]: offline OEIS snapshot matching (optional remote lookup).

pub mod classify;
pub mod engine;
mod error;
pub mod formulas;
pub mod oeis;
pub mod pattern;
pub mod perm;
pub mod series;
pub mod transform;

pub use error::Error;
pub use pattern::{GridBox, MeshPattern, OccurrenceWitness};
pub use perm::Permutation;

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;
