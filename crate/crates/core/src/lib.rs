//! Mould calculus for local vector fields, in exact arithmetic.
//!
//! The crate covers the mould algebra on words, the variance operators
//! `Var_c` and `∇`, the moulds `Nil•` and `Dia•` of the nilpotent /
//! diagonalizable decomposition, and a truncated-jet engine for prepared
//! vector fields that checks the variance identities by brute force.
//!
//! All scalars are Gaussian rationals; nothing is floating point.

pub mod checks;
pub mod cli;
pub mod error;
pub mod exactnum;
pub mod moulds;
pub mod nilmould;
pub mod random;
pub mod variance;
pub mod vfield;
pub mod words;

pub use error::{Error, Result};
pub use exactnum::{EpsJet, Rational, Ring, Scalar};
pub use moulds::{Mould, NamedMould, TabulatedMould, UniversalMould};
pub use nilmould::{dia_mould, nil_mould, NilSolver};
pub use words::{Letter, Spectrum, WeightWord, Word};
