//! Schur multipliers of Schatten quasi-norm classes for Hankel and Toeplitz
//! matrices: exact formulas, certified upper bounds, rank-one lower bounds,
//! dyadic Besov analysis and discrete-measure Toeplitz multipliers.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]
pub mod error;
pub mod besov;
pub mod lab;
pub mod linalg;
pub mod measures;
pub mod multiplier;
pub mod symbols;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, PExponent, SchattenValue, Sharp, C64};
pub use multiplier::{BlockPartition, MultiplierEstimate};
pub use symbols::{AnalyticSymbol, GapProfile, SmoothCutoffSpec, Spectrum, TrigPolynomial};
