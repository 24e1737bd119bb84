//! Mechanical derivation of the scalar curvature of the conformally
//! perturbed noncommutative 3-torus, with independent numeric oracles.
//!
//! The pipeline runs through these modules in order:
//!
//! - [`ncalg`]: exact word algebra in `k`, derivative words and modular twists
//! - [`symcalc`]: symbol of `P`, symbol products, resolvent terms `b0, b1, b2`
//! - [`integrate`]: angular averaging, normal ordering, rearrangement into H-functions
//! - [`hfun`]: closed forms, quadrature and exact limits of the H-functions
//! - [`speclab`]: truncated matrix model and heat-trace fits
//! - [`pipeline`]: the full derivation in one call
//! - [`cli`]: orchestration behind the `nct3` binary

pub mod error;
pub mod ncalg;
pub mod symcalc;
pub mod integrate;
pub mod hfun;
pub mod pipeline;
pub mod speclab;
pub mod cli;

pub use error::{Error, Result};
