//! Prepared vector fields on a truncated polynomial algebra.
//!
//! A field `X = X_lin + Σ_{n∈A} B_n` is stored as its diagonal spectrum and
//! a family of homogeneous operators. Operators and their compositions are
//! exact matrices on the monomials of degree at most `N`, in graded
//! lexicographic order.

mod action;
mod basis;
mod field;
mod operator;
mod oracle;

pub use action::{
    act, compose_word, derivation_terms, dia_nonlinear_part, dia_part, exp_ad, is_derivation, is_multiplicative,
    nil_part, words_within_degree, ProductRuleFailure,
};
pub use basis::{format_monomial, Monomial, MonomialBasis, Polynomial};
pub use field::{EpsField, FieldFile, FieldTerm, PreparedVectorField};
pub use operator::{apply_op, lie_bracket, HomogeneousOp, TruncatedOperator};
pub use oracle::{default_perturbation, eps_conjugate, variance_oracle, EntryMismatch, OracleReport};
