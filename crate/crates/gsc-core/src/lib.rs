//! Computational small cancellation theory over general relators.
//!
//! A general relator is the cone over a finite cell poset whose realization
//! is homotopy equivalent to a circle and whose 1-skeleton carries a
//! deterministic generator labeling. This crate builds those posets, measures
//! them (winding numbers, length, width, the normalized graph metric on the
//! infinite cyclic cover), verifies the seven axioms of the theory for a
//! measured presentation, solves word problems by Dehn reduction, grows
//! α-closed straightline/circular constructions, and enumerates the rank-2
//! relators of Burnside-type presentations with a C'(β) check.
//!
//! Everything numeric is an exact rational; no floating point is used in any
//! decision.




pub mod complex;
pub mod cover;
pub mod homology;

pub mod metric;
pub mod oracles;
pub mod axioms;
pub mod closure;
pub mod presentation;



pub mod relator;
pub mod word;

/// The scalar used by every metric computation. Lengths, widths and axiom
/// constants are compared exactly; `i64` components are ample at the scales
/// this crate targets (boundaries up to a few thousand cells).
pub type Rational = num::rational::Ratio<i64>;

/// Shorthand for building a reduced rational.
pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(p, q)
}

pub use complex::{CellId, LabeledComplex, PathInComplex, ValidationReport};
pub use relator::GeneralRelator;
pub use presentation::{Constants, MeasuredPresentation};
pub use word::{Alphabet, Letter, Sign, Word};
