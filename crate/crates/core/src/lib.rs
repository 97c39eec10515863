//! Toolkit for SMT-LIB2 nonlinear real arithmetic with a focus on division.
//!
//! - [`smtlib`]: parsing, sort checking and printing of the supported subset.
//! - [`analysis`]: locating and classifying divisions, fragment verdicts.
//! - [`passes`]: totalization, UF-lifting and divisor verification conditions.
//! - [`encoder`]: floor axioms and the integer-to-real encodings.
//! - [`eval`]: exact rational evaluation with pluggable `x/0`, plus oracles.
//! - [`report`] and [`solver`]: corpus census and the external solver bridge.

pub mod analysis;
pub mod encoder;
pub mod eval;
pub mod passes;
pub mod rational;
pub mod report;
pub mod smtlib;
pub mod solver;

pub use rational::Rational;
pub use smtlib::{parse_script, print_script, Script, Sort, Term};
