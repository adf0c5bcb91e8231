//! Exact genus-zero two-point invariants of projective hypersurfaces.
//!
//! The production path builds the hypergeometric ladder, applies the mirror
//! transform and reads invariants off the two-point series. The verification
//! path re-derives the same objects at specialized torus weights and compares
//! them against fixed-point localization sums.

pub mod algebra;
pub mod error;
pub mod hypergeometric;
pub mod equivariant;
pub mod localization;
pub mod mirror;

pub use error::{Error, Result};
