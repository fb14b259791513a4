use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use super::action::{accumulate_word, act, contributing_words};
use super::basis::format_monomial;
use super::field::{EpsField, PreparedVectorField};
use super::operator::{HomogeneousOp, TruncatedOperator};
use crate::error::{Error, Result};
use crate::exactnum::{EpsJet, Scalar};
use crate::moulds::UniversalMould;
use crate::variance::{var_ci, VarianceContext};
use crate::words::{weight, Letter};

fn add_eps(map: &mut BTreeMap<Letter, HomogeneousOp<EpsJet>>, op: &HomogeneousOp<Scalar>) -> Result<()> {
    let eps = op.map_coeffs(|v| EpsJet::eps(v.clone()));
    let merged = match map.remove(op.letter()) {
        Some(prev) => prev.add(&eps)?,
        None => eps,
    };
    map.insert(op.letter().clone(), merged);
    Ok(())
}

/// `X_ε = X + ε[B_c, X]`, the conjugate of `X` by `exp(εB_c)` modulo `ε²`,
/// regrouped by degree.
///
/// The `ε` part collects `ω(c)·B_c` at the letter `c` (from `[B_c, X_lin]`)
/// and `[B_c, B_n]` at the letter `n + c` for every `n ∈ A`. At a letter
/// `n + c` already in `A` this merges with the existing `B_{n+c}`; otherwise
/// a new letter appears. Operators equal to `0 + 0ε` are dropped.
pub fn eps_conjugate(x: &PreparedVectorField, bc: &HomogeneousOp) -> Result<EpsField> {
    if bc.letter().dim() != x.dim() {
        return Err(Error::DimensionMismatch {
            expected: x.dim(),
            found: bc.letter().dim(),
        });
    }
    let omega_c = weight(bc.letter(), x.lam())?;
    let mut map: BTreeMap<Letter, HomogeneousOp<EpsJet>> = x
        .to_eps()
        .ops()
        .map(|op| (op.letter().clone(), op.clone()))
        .collect();
    add_eps(&mut map, &bc.map_coeffs(|v| &omega_c * v))?;
    for op in x.ops() {
        add_eps(&mut map, &bc.bracket(op))?;
    }
    Ok(EpsField::from_map(x.lam().clone(), map))
}

/// The perturbation used when none is given: `X`'s own `B_c` if `c ∈ A`,
/// otherwise `a_i = i` on the admissible slots.
pub fn default_perturbation(x: &PreparedVectorField, c: &Letter) -> Result<HomogeneousOp> {
    match x.op(c) {
        Some(op) => Ok(op.clone()),
        None => HomogeneousOp::with_default_coeffs(c.clone()),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EntryMismatch {
    pub column: String,
    pub row: String,
    pub lhs: Scalar,
    pub rhs: Scalar,
}

/// Outcome of [`variance_oracle`].
#[derive(Clone, Debug, PartialEq)]
pub struct OracleReport {
    pub letter: Letter,
    pub order: usize,
    /// `ε` coefficient of `Act^M(X_ε)`.
    pub lhs: TruncatedOperator,
    /// `Σ_w Var_c(M)^w B_w`.
    pub rhs: TruncatedOperator,
    pub mismatches: usize,
    pub first_mismatch: Option<EntryMismatch>,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.mismatches == 0
    }
}

impl fmt::Display for OracleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let entries = self.lhs.nonzero_entries().len();
        match &self.first_mismatch {
            None => write!(
                f,
                "PASS: variance along {} matches at order {} ({} nonzero entries)",
                self.letter, self.order, entries
            ),
            Some(m) => write!(
                f,
                "FAIL: {} mismatching entries at order {}; first at {} -> {}: lhs {}, rhs {}",
                self.mismatches, self.order, m.column, m.row, m.lhs, m.rhs
            ),
        }
    }
}

fn mismatch_report(lhs: &TruncatedOperator, rhs: &TruncatedOperator) -> (usize, Option<EntryMismatch>) {
    let basis = lhs.basis();
    let name = |i: usize| -> String { format_monomial(basis.monomial(i)) };
    let mut count = 0;
    let mut first = None;
    for col in 0..basis.len() {
        for row in 0..basis.len() {
            let (a, b) = (lhs.entry(row, col), rhs.entry(row, col));
            if a != b {
                count += 1;
                first.get_or_insert_with(|| EntryMismatch {
                    column: name(col),
                    row: name(row),
                    lhs: a.clone(),
                    rhs: b.clone(),
                });
            }
        }
    }
    (count, first)
}

/// Checks the variance of a mould expansion two ways at truncation `order`.
///
/// The left side conjugates `X` by `exp(εB_c)` in jet arithmetic and takes
/// the `ε` coefficient of `Act^M(X_ε)`. The right side sums
/// `Var_{c,i}(M)^w · B_w` over words of `A_c`, where the factor at position
/// `i` is the perturbation `B_c` itself.
pub fn variance_oracle(
    m: &UniversalMould,
    x: &PreparedVectorField,
    bc: &HomogeneousOp,
    order: usize,
) -> Result<OracleReport> {
    let lam = x.lam();
    let mould = m.on_letters(lam);
    let lhs = act(&mould, &eps_conjugate(x, bc)?, order)?.eps_part();

    let c = bc.letter().clone();
    let ctx = VarianceContext::new(c.clone(), lam, x.alphabet())?;
    let mut rhs = TruncatedOperator::zero(&x.basis(order));
    for w in contributing_words(ctx.extended_alphabet(), order) {
        for i in (0..w.len()).filter(|&i| w[i] == c) {
            let v = var_ci(&mould, &ctx, &w, i + 1)?;
            if v.is_zero() {
                continue;
            }
            let ops: Option<Vec<&HomogeneousOp>> = w
                .iter()
                .enumerate()
                .map(|(j, n)| if j == i { Some(bc) } else { x.op(n) })
                .collect();
            if let Some(ops) = ops {
                accumulate_word(&mut rhs, &ops, &v);
            }
        }
    }
    let (mismatches, first_mismatch) = mismatch_report(&lhs, &rhs);
    Ok(OracleReport {
        letter: c,
        order,
        lhs,
        rhs,
        mismatches,
        first_mismatch,
    })
}
