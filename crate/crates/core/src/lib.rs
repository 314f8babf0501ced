//! Frobenius vectors and conductors of affine semigroups of `ℕᵉ`.
//!
//! The crate works entirely over arbitrary-precision integers. The main entry
//! points are [`lattice::build_chain`], [`semigroup::validate_conditions`] and
//! [`frobenius::frobenius_vector`]; [`analysis::analyze`] runs the whole
//! pipeline and produces a serializable report.

pub mod analysis;
pub mod error;
pub mod frobenius;
pub mod lattice;
pub mod linalg;
pub mod oracle;
pub mod semigroup;
pub mod singularities;

pub use error::{Error, Result};
