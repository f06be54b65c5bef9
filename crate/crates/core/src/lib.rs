//! Exact verification of Rogers-Ramanujan-type partition identities.
//!
//! Every identity in the built-in catalog has three faces:
//!
//! * a **product side** — an infinite product over congruence classes,
//! * an **analytic sum side** — a multi-index q-hypergeometric sum, and
//! * a **partition-theoretic sum side** — partitions avoiding forbidden
//!   contiguous patterns.
//!
//! All three are expanded as truncated formal power series over exact
//! arbitrary-precision integers and compared coefficient by coefficient.
//! The staircase transform connects the partition-theoretic side to the
//! analytic side through jagged partitions; the block-grammar machinery
//! checks that connection structurally.

pub mod catalog;
mod error;
pub mod multisum;
pub mod qpoch;
pub mod rules;
pub mod series;
pub mod staircase;
pub mod verify;

pub use error::Error;
pub use series::{BivariateSeries, LaurentSeries};

/// Series coefficients are exact signed integers of arbitrary precision.
pub type Coeff = num_bigint::BigInt;
