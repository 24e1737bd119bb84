//! Pseudodifferential symbol calculus for the resolvent of the perturbed
//! Laplacian.
//!
//! Symbols are finite sums of [`ResTerm`]s: a rational (or pi-weighted)
//! coefficient, a monomial in `xi` and `lambda`, and a word whose letters are
//! algebra factors or powers of `B = (k^4 |xi|^2 - lambda)^-1`.
//! [`resolvent_terms`] runs the parametrix recursion with concrete derivative
//! indices; [`verify_parametrix`] checks it exactly.

mod calculus;
mod embed;
mod parametrix;
mod scalar;
mod term;

pub use calculus::{compose, element, laplacian, multi_indices, resolvent_terms, symbol_p, xi, Resolvent};
pub use embed::residual_size;
pub use parametrix::{check_parametrix, residual_at, verify_parametrix, OrderCheck, ParametrixReport};
pub use scalar::ScalarModel;
pub use term::{canonical_letters, Letter, ResTerm, SymbolExpansion, SymbolSum, TermKey};
