//! Round cycles over finite groups.
//!
//! A cycle over a group `G` of order `n` is a sequence of elements read
//! cyclically. It is *k-round* when every product of `k` rotates of it is
//! again a permutation of `G`. This crate builds totally round cycles for
//! nilpotent groups, certifies unroundness through root counts, computes
//! the Frobenius numbers governing those certificates, and constructs
//! cycles that stay balanced under iterated difference operators.

pub mod acceptance;
pub mod arith;
pub mod catalog;
pub mod certify;
pub mod construct;
pub mod cycle;
pub mod error;
pub mod group;
pub mod oracle;
pub mod semigroup;

pub use error::{Error, Result};
pub use group::{FiniteGroup, Subgroup};

/// Default number of shift tuples an exhaustive or sampled check may visit.
pub const DEFAULT_TUPLE_BUDGET: u64 = 10_000_000;

/// Default cap on constructed cycle lengths.
pub const DEFAULT_LENGTH_BUDGET: u64 = 1_000_000;

/// Default seed for every seeded routine.
pub const DEFAULT_SEED: u64 = 42;
