//! Subspaces of bipartite state spaces with bounded Schmidt rank.
//!
//! A state on `C^dA ⊗ C^dB` is identified with its `dA × dB` coefficient
//! matrix, and its Schmidt rank with the matrix rank. The crate builds
//! subspaces whose elements all have rank at least `r` (of the largest
//! possible dimension `(dA−r+1)(dB−r+1)`), at most `r`, or exactly `r`, and
//! checks rank claims with exact arithmetic, exhaustive prime-field
//! enumeration and a numerical low-rank search.

pub mod bounds;
pub mod construct;
pub mod error;
pub mod json;
pub mod rng;
pub mod scalar;
pub mod statemat;
pub mod tns;
pub mod verify;

pub use error::{Error, Result};
