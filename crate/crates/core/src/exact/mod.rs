//! Exact arithmetic over Q.

pub mod echelon;
pub mod matrix;
pub mod mpoly;
pub mod rat;
pub mod upoly;

pub use echelon::IntEchelon;
pub use matrix::{det, det_symbolic, kernel_basis, rank, SparseMat};
pub use mpoly::{binomial, monomial_count, monomials, Exponent, MPoly};
pub use rat::{fmt_rat, parse_rat, parse_rat_list, rat, ratio, Coeff, Rat};
pub use upoly::UPoly;
