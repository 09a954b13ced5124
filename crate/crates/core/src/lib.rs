//! Exact verification of a family of symmetric q-series identities and of a
//! bijective proof built from a subtract-and-mark map followed by 2-modular
//! conjugation.
//!
//! - [`series`]: truncated power series in `a, b, t, q` over exact rationals.
//! - [`identities`]: builders for both sides of every identity and the
//!   checkers that compare them.
//! - [`partitions`]: constrained partition enumeration, the brute-force
//!   oracle for the combinatorial statements.
//! - [`bijections`]: the maps `Γ`, `σ`, their composite and the box audit.

pub mod bijections;
pub mod identities;
pub mod par;
pub mod partitions;
pub mod rational;
pub mod series;

pub use rational::Rational;
pub use series::{Monomial, SeriesError, TruncatedSeries, TruncationProfile};
