//! Exact-arithmetic certification engine for GIT stability of embedded
//! pointed curves, driven by the combinatorics of one-parameter-subgroup
//! weight filtrations.
//!
//! Given the combinatorial data of a 1-PS (stage sizes, normalized weights,
//! base-locus multiplicities, marked-point links), the engine scales the
//! filtration to degree-m sections, builds the span-improved step profile
//! and its virtual polyline, bounds the total weight against the
//! Hilbert-Mumford numerical criterion, and searches for the (u₀, v₀(u))
//! thresholds past which the certificate holds. All arithmetic is exact
//! rational; every printed inequality is checked, never assumed.

pub mod discrepancy;
pub mod error;
pub mod filtration;
pub mod io;
pub mod multfilt;
pub mod profile;
pub mod rational;
pub mod render;
pub mod scenario;
pub mod span;
pub mod verdict;
pub mod virtual_profile;

pub use error::{Error, Result};
pub use rational::Rat;
