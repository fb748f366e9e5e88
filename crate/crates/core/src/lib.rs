//! Exact computations with Lie algebras of polynomial vector fields and their
//! tensor-field modules.

pub mod error;
pub mod exact;
pub mod homology;
pub mod liealg;
pub mod pbw;
pub mod spanning;
pub mod specht;
pub mod tensormod;

pub use error::{Error, Result};
