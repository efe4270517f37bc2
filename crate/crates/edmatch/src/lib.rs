//! Matching patterns with variables against words under edit distance.
//!
//! A pattern is a string of terminal symbols and variables; substituting every
//! variable by a terminal word yields a plain word. This crate computes, for a
//! pattern `α` and a word `w`, the minimum edit distance between any such
//! substitution image of `α` and `w`, together with a witness substitution and
//! edit script.
//!
//! Regular patterns (every variable occurs once) are handled by a diagonal
//! frontier algorithm running in `O((n + |β|)·Δ)` time on top of constant-time
//! longest-common-extension queries ([`regular`], [`lcp`]). Arbitrary patterns
//! go through factorization enumeration with an exact median-string subroutine
//! ([`general`], [`median`]). Brute-force reference implementations live in
//! [`oracle`], and [`hardness`] generates the unary-pattern reduction
//! instances used as structured stress fixtures.

pub mod edit;
pub mod general;
pub mod hardness;
pub mod lcp;
pub mod median;
pub mod oracle;
pub mod pattern;
pub mod regular;

pub use edit::{edit_distance, EditOp, EditScript};
pub use pattern::{Pattern, PatternClass, PatternItem, Substitution, Symbol, Word};
