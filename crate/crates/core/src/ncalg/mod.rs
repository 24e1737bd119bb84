//! Exact word algebra over the Weyl factor `k`, its derivatives, and
//! modular twists `Delta^(s/6)`.
//!
//! Words are kept canonical: adjacent k-powers merge, derivative indices are
//! sorted (the derivations commute), and derivative words of `k^-1` are
//! rewritten through `delta(k^-1) = -k^-1 delta(k) k^-1`. Normal ordering
//! (all k-powers leftmost) is a separate step, since `delta_j` may only act on
//! undecorated words.

mod coeff;
mod poly;
mod word;

pub use coeff::Coeff;
pub use poly::{normal_order_word, CommPoly, Monomial, NCPoly};
pub use word::{canonical_word, parse_factor, parse_word, sixths_str, Base, DWord, Factor, Index, Word, WordDisplay, SUM};

pub(crate) use coeff::signed_prefix;
