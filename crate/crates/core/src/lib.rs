//! Exact extremal p-lengths of factorizations.
//!
//! Covers numerical semigroups (additive, generated by a minimal set of
//! atoms) and arithmetical congruence monoids `M_{a,b}` (multiplicative),
//! with a quasipolynomial fitter for certifying eventual behaviour of length
//! sequences and a verification harness that replays the known asymptotic
//! results on finite windows.

pub mod acm;
pub mod closed;
pub mod error;
pub mod factor;
pub mod harness;
pub mod length;
pub mod m46;
pub mod quasi;
pub mod semigroup;
mod separable;
pub mod table1;

pub use error::{Error, Result};
pub use length::{plength, ExtExponent, Mode};
pub use semigroup::{AperyTable, NumericalSemigroup};
