//! Exact and asymptotic enumeration of perfect matchings on m-barrel
//! fullerene graphs `F(m,k)`.
//!
//! Three independent counting routes are provided and cross-checked:
//! backtracking on the explicit graph ([`graph`]), a transfer operator on
//! horizontal-edge subsets ([`transfer`]), and non-intersecting path families
//! on the cylinder ([`paths`]). [`bethe`] diagonalises the transfer operator
//! sector by sector and [`entropy`] turns growth constants into dimer entropies.

pub mod bethe;
pub mod entropy;
pub mod error;
pub mod graph;
pub mod paths;
pub mod report;
pub mod subset;
pub mod transfer;
pub mod validate;

pub use error::{Error, Result};
pub use subset::Subset;
