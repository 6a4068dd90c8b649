pub mod cf;
pub mod density;
pub mod enumeration;
pub mod error;
pub mod growth;
pub mod parallel;
pub mod scalar;
pub mod shifting;
pub mod verify;

pub use cf::{BoundParameter, ContinuantTrace, PartialQuotientSeq, ReducedFraction};
pub use error::{CfError, Result};
pub use parallel::Shard;
pub use scalar::Scalar;

/// Unbounded nonnegative integer used for continuants and counts.
pub type Natural = num_bigint::BigUint;
