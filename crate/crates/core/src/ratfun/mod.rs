//! Rational functions, S0 diagnostics, Stieltjes continued fractions and
//! partial fractions.

pub mod cfrac;
pub mod function;
pub mod partial;
pub mod s0;

pub use cfrac::{cf_expand, cf_tail, cf_to_ratfun, StieltjesCF};
pub use function::{ratfun_normalize, RationalFunction};
pub use partial::{block_principal_part, partial_fractions, PartialFractions};
pub use s0::{validate_s0, S0Report};
