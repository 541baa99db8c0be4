//! Exact computer algebra for SL₂ fundamental pairs of locally nilpotent
//! derivations on polynomial rings over ℚ.

pub mod algebra;
pub mod check;
pub mod cli;
pub mod derivation;
pub mod error;
pub mod golden;
pub mod grading;
pub mod ideal;
pub mod models;
pub mod parse;
pub mod sl2;

pub use algebra::{Monomial, MonomialOrder, Polynomial, Rational, VarTable};
pub use derivation::{Derivation, NilpotencyReport};
pub use error::{Error, Result};
pub use sl2::{basic_pair, direct_sum, FundamentalPair, Which};
