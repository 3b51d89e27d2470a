//! Exact measurable numbers.
//!
//! Infinite number expressions are read as sequences of rational partial
//! results. A sequence carries an explicit certificate (a Cauchy, vanishing or
//! divergence modulus) from which measuring fractions, comparisons up to
//! infinitely small differences and the completeness procedures are derived.
//! Everything is exact: no floating point enters a result.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod arith;
pub mod error;
pub mod expr;
pub mod limit;
pub mod measurable;
pub mod poly;
pub mod presets;
pub mod sequence;
pub mod theorems;
pub mod topology;

pub use arith::{Integer, Rational};
pub use error::Error;
pub use expr::{parse, Expression, Formula};
pub use sequence::{certify, evaluate_partial, Certificate, CertifiedSequence};
pub use measurable::{audit_measure, classify, compare, eq, order, Classification, ComparisonVerdict, MeasurableNumber, MeasuringFraction};
