//! Generalized comma sequences in arbitrary bases.
//!
//! A comma sequence is the lexicographically earliest sequence of positive
//! integers in which the difference of consecutive terms equals the two-digit
//! number formed by the digit left of the "comma" (the last digit of the
//! earlier term) and the digit right of it (the first digit of the later
//! term). Whether such a sequence is finite depends on the base and the
//! initial value.
//!
//! The crate provides:
//!
//! - [`seq`]: the successor rule, landmine characterization, and sequence
//!   generation;
//! - [`graph`]: the compressed `(d, u, k)` point representation, difference
//!   cycles, minimal offset sets, and the interval-crossing transform;
//! - [`verifier`]: an exhaustive, parallel walk of the finite reduced digraph
//!   that proves every comma sequence in a base terminates;
//! - [`analysis`]: interval escape counts computed three independent ways,
//!   plus empirical survival statistics and the two model curves;
//! - [`basekit`]: digit manipulation and the modular-arithmetic primitives
//!   everything else builds on.

pub mod analysis;
pub mod basekit;
pub mod graph;
pub mod seq;
pub mod verifier;

mod error;

pub use basekit::{Radix, Value};
pub use error::Error;

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;
