//! Exact chain-level operadic homological algebra over ℚ.
//!
//! The crate builds operads, cooperads and their bar, cobar and two-sided bar
//! complexes on explicit tree bases, computes homology and symmetric-group
//! characters with exact rational arithmetic, and runs verification suites
//! for Koszul duality, truncation towers and cotangent fibers of nilpotent
//! algebras.

pub mod alg;
pub mod bar;
pub mod complex;
pub mod cooperad;
pub mod error;
pub mod levelled;
pub mod linalg;
pub mod operad;
pub mod perm;
pub mod rational;
pub mod report;
pub mod sigma;
pub mod symseq;
pub mod tree;

pub use error::{Error, Result};
pub use rational::Q;
