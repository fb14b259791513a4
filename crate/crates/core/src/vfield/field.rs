use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::basis::{Monomial, MonomialBasis};
use super::operator::{HomogeneousOp, TruncatedOperator};
use crate::error::{Error, Result};
use crate::exactnum::{EpsJet, Ring, Scalar};
use crate::words::{Letter, Spectrum};

/// `X = X_lin + Σ_{n∈A} B_n` with diagonal linear part `Σ λ_i x_i ∂_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct PreparedVectorField<T: Ring = Scalar> {
    lam: Spectrum,
    ops: BTreeMap<Letter, HomogeneousOp<T>>,
}

/// A field whose operator coefficients carry a first-order `ε` part.
pub type EpsField = PreparedVectorField<EpsJet>;

impl<T: Ring> PreparedVectorField<T> {
    /// Builds a field from its operators, merging equal letters and dropping
    /// operators that vanish.
    pub fn new(lam: Spectrum, ops: impl IntoIterator<Item = HomogeneousOp<T>>) -> Result<Self> {
        let mut map: BTreeMap<Letter, HomogeneousOp<T>> = BTreeMap::new();
        for op in ops {
            if op.letter().dim() != lam.dim() {
                return Err(Error::DimensionMismatch {
                    expected: lam.dim(),
                    found: op.letter().dim(),
                });
            }
            let merged = match map.remove(op.letter()) {
                Some(prev) => prev.add(&op)?,
                None => op,
            };
            map.insert(merged.letter().clone(), merged);
        }
        map.retain(|_, op| !op.is_zero());
        Ok(PreparedVectorField { lam, ops: map })
    }

    pub fn lam(&self) -> &Spectrum {
        &self.lam
    }

    pub fn dim(&self) -> usize {
        self.lam.dim()
    }

    /// `A(X)`, in increasing order.
    pub fn alphabet(&self) -> Vec<Letter> {
        self.ops.keys().cloned().collect()
    }

    pub fn op(&self, n: &Letter) -> Option<&HomogeneousOp<T>> {
        self.ops.get(n)
    }

    pub fn ops(&self) -> impl Iterator<Item = &HomogeneousOp<T>> {
        self.ops.values()
    }

    pub fn basis(&self, order: usize) -> Arc<MonomialBasis> {
        MonomialBasis::new(self.dim(), order)
    }

    /// `Σ B_n` at truncation `order`.
    pub fn nonlinear_operator(&self, order: usize) -> TruncatedOperator<T> {
        let basis = self.basis(order);
        let mut out = TruncatedOperator::zero(&basis);
        for op in self.ops.values() {
            for (row, col, v) in op.matrix(&basis).nonzero_entries() {
                out.add_to(row, col, v.clone());
            }
        }
        out
    }

    pub fn linear_operator(&self, order: usize) -> TruncatedOperator<T> {
        TruncatedOperator::linear_part(&self.lam, &self.basis(order)).expect("basis built from the spectrum")
    }

    /// The full operator `X_lin + Σ B_n`.
    pub fn operator(&self, order: usize) -> TruncatedOperator<T> {
        self.linear_operator(order)
            .add(&self.nonlinear_operator(order))
            .expect("same basis")
    }
}

impl PreparedVectorField<Scalar> {
    /// Groups monomial terms `coeff·x^m ∂_i` into homogeneous operators
    /// indexed by `n = m − e_i`. Diagonal linear terms must agree with `lam`
    /// and are not stored as operators.
    pub fn parse_field(terms: &[FieldTerm], lam: &Spectrum) -> Result<Self> {
        let d = lam.dim();
        let mut coeffs: BTreeMap<Letter, Vec<Scalar>> = BTreeMap::new();
        let mut diagonal: BTreeMap<usize, Scalar> = BTreeMap::new();
        for t in terms {
            if t.component == 0 || t.component > d {
                return Err(Error::Invalid(format!(
                    "component {} out of range 1..={d}",
                    t.component
                )));
            }
            if t.exponents.len() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: t.exponents.len(),
                });
            }
            let i = t.component - 1;
            let n: Vec<i64> = t
                .exponents
                .iter()
                .enumerate()
                .map(|(j, &e)| e as i64 - i64::from(i == j))
                .collect();
            let n = Letter::new(n);
            match n.degree() {
                0 if n.components().iter().all(|&x| x == 0) => {
                    *diagonal.entry(i).or_insert_with(Scalar::zero) += &t.coeff;
                    continue;
                }
                0 => {
                    return Err(Error::LinearPart(format!(
                        "off-diagonal linear term in component {}",
                        t.component
                    )))
                }
                _ => {}
            }
            n.check_prepared()?;
            let a = coeffs.entry(n).or_insert_with(|| vec![Scalar::zero(); d]);
            a[i] += &t.coeff;
        }
        for (i, v) in diagonal {
            if v != lam.values()[i] {
                return Err(Error::LinearPart(format!(
                    "diagonal coefficient {v} of x{} differs from lambda_{} = {}",
                    i + 1,
                    i + 1,
                    lam.values()[i]
                )));
            }
        }
        let ops = coeffs
            .into_iter()
            .map(|(n, a)| HomogeneousOp::new(n, a))
            .collect::<Result<Vec<_>>>()?;
        PreparedVectorField::new(lam.clone(), ops)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: FieldFile = serde_json::from_str(text).map_err(|e| Error::Parse {
            what: "vector field file",
            input: e.to_string(),
        })?;
        if file.lambda.len() != file.dim {
            return Err(Error::DimensionMismatch {
                expected: file.dim,
                found: file.lambda.len(),
            });
        }
        let lam = Spectrum::new(file.lambda)?;
        PreparedVectorField::parse_field(&file.terms, &lam)
    }

    pub fn to_file(&self) -> FieldFile {
        let mut terms = Vec::new();
        for op in self.ops.values() {
            for (i, a) in op.coeffs().iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                let exponents = op
                    .letter()
                    .components()
                    .iter()
                    .enumerate()
                    .map(|(j, &x)| (x + i64::from(i == j)) as u32)
                    .collect();
                terms.push(FieldTerm {
                    component: i + 1,
                    exponents,
                    coeff: a.clone(),
                });
            }
        }
        FieldFile {
            dim: self.dim(),
            lambda: self.lam.values().to_vec(),
            terms,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("serializable")
    }

    pub fn to_eps(&self) -> EpsField {
        PreparedVectorField {
            lam: self.lam.clone(),
            ops: self
                .ops
                .iter()
                .map(|(n, op)| (n.clone(), op.map_coeffs(|x| EpsJet::constant(x.clone()))))
                .collect(),
        }
    }
}

impl EpsField {
    pub(crate) fn from_map(lam: Spectrum, ops: BTreeMap<Letter, HomogeneousOp<EpsJet>>) -> Self {
        let mut ops = ops;
        ops.retain(|_, op| !op.is_zero());
        PreparedVectorField { lam, ops }
    }

    pub fn value_part(&self) -> PreparedVectorField<Scalar> {
        let ops = self.ops.values().map(|op| op.map_coeffs(|x| x.val.clone()));
        PreparedVectorField::new(self.lam.clone(), ops).expect("same dimensions")
    }

    pub fn eps_part(&self) -> PreparedVectorField<Scalar> {
        let ops = self.ops.values().map(|op| op.map_coeffs(|x| x.d.clone()));
        PreparedVectorField::new(self.lam.clone(), ops).expect("same dimensions")
    }
}

impl<T: Ring> fmt::Display for PreparedVectorField<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "lambda = ({})", self.lam)?;
        for op in self.ops.values() {
            write!(f, "\n  {op}")?;
        }
        Ok(())
    }
}

/// One monomial term `coeff · x^exponents ∂_component` (1-based component).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldTerm {
    pub component: usize,
    pub exponents: Monomial,
    pub coeff: Scalar,
}

/// On-disk form of a prepared vector field.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldFile {
    pub dim: usize,
    pub lambda: Vec<Scalar>,
    pub terms: Vec<FieldTerm>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn term(component: usize, exponents: &[u32], coeff: i64) -> FieldTerm {
        FieldTerm {
            component,
            exponents: exponents.to_vec(),
            coeff: Scalar::from(coeff),
        }
    }

    #[test]
    fn parse_examples() {
        let lam = Spectrum::from_ints(&[1, -1]);
        let x = PreparedVectorField::parse_field(&[term(1, &[2, 1], 1)], &lam).unwrap();
        let n: Letter = "(1,1)".parse().unwrap();
        assert_eq!(x.alphabet(), vec![n.clone()]);
        assert_eq!(x.op(&n).unwrap().coeffs(), &[Scalar::one(), Scalar::zero()]);

        let x = PreparedVectorField::parse_field(&[term(1, &[0, 2], 1)], &lam).unwrap();
        assert_eq!(x.alphabet(), vec!["(-1,2)".parse::<Letter>().unwrap()]);

        assert!(matches!(
            PreparedVectorField::parse_field(&[term(1, &[0, 0], 1)], &lam),
            Err(Error::InvalidLetter { .. })
        ));
        assert!(matches!(
            PreparedVectorField::parse_field(&[term(1, &[0, 1], 1)], &lam),
            Err(Error::LinearPart(_))
        ));
        assert!(PreparedVectorField::parse_field(&[term(2, &[0, 1], -1)], &lam).is_ok());
        assert!(matches!(
            PreparedVectorField::parse_field(&[term(2, &[0, 1], 3)], &lam),
            Err(Error::LinearPart(_))
        ));
    }

    #[test]
    fn terms_with_the_same_letter_merge() {
        let lam = Spectrum::from_ints(&[1, -1]);
        let x = PreparedVectorField::parse_field(
            &[term(1, &[2, 1], 1), term(2, &[1, 2], 3), term(1, &[2, 1], 1)],
            &lam,
        )
        .unwrap();
        let n: Letter = "(1,1)".parse().unwrap();
        assert_eq!(x.op(&n).unwrap().coeffs(), &[Scalar::from(2), Scalar::from(3)]);
        let cancel = PreparedVectorField::parse_field(&[term(1, &[2, 1], 1), term(1, &[2, 1], -1)], &lam).unwrap();
        assert!(cancel.alphabet().is_empty());
    }

    #[test]
    fn json_round_trip() {
        let text = r#"{"dim":2,"lambda":[["1","0"],["-1","0"]],
            "terms":[{"component":1,"exponents":[2,1],"coeff":["1","0"]},
                     {"component":2,"exponents":[2,0],"coeff":["1/2","-1"]}]}"#;
        let x = PreparedVectorField::from_json(text).unwrap();
        assert_eq!(x.alphabet().len(), 2);
        assert_eq!(PreparedVectorField::from_json(&x.to_json()).unwrap(), x);
        assert!(PreparedVectorField::from_json("{").is_err());
    }
}
