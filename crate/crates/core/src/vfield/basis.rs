use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::exactnum::Scalar;

/// Exponent vector of a monomial `x^m`.
pub type Monomial = Vec<u32>;

pub(crate) fn degree(m: &[u32]) -> usize {
    m.iter().map(|&e| e as usize).sum()
}

/// Writes `x1^2*x2`, or `1` for the constant monomial.
pub fn format_monomial(m: &[u32]) -> String {
    let parts: Vec<String> = m
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, &e)| match e {
            1 => format!("x{}", i + 1),
            _ => format!("x{}^{}", i + 1, e),
        })
        .collect();
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join("*")
    }
}

/// The monomials `x^m` with `|m| ≤ order` in `dim` variables.
///
/// Ordering is graded lexicographic: by total degree, then lexicographically
/// decreasing exponents, so `1, x1, x2, x1^2, x1*x2, x2^2, …`. The basis of a
/// lower order is a prefix of the basis of a higher one.
#[derive(Debug, PartialEq, Eq)]
pub struct MonomialBasis {
    dim: usize,
    order: usize,
    monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl MonomialBasis {
    pub fn new(dim: usize, order: usize) -> Arc<Self> {
        let mut monomials = Vec::new();
        for k in 0..=order {
            let mut block = Vec::new();
            compositions(dim, k, &mut Vec::with_capacity(dim), &mut block);
            monomials.extend(block);
        }
        let index = monomials.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        Arc::new(MonomialBasis {
            dim,
            order,
            monomials,
            index,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn monomial(&self, i: usize) -> &[u32] {
        &self.monomials[i]
    }

    pub fn index_of(&self, m: &[u32]) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// Index of `x^{m+shift}`, if it is a monomial of degree at most `order`.
    pub fn shifted(&self, m: &[u32], shift: &[i64]) -> Option<usize> {
        let mut out = Vec::with_capacity(m.len());
        for (&e, &s) in m.iter().zip(shift) {
            let v = e as i64 + s;
            if v < 0 {
                return None;
            }
            out.push(v as u32);
        }
        self.index_of(&out)
    }
}

/// Exponent vectors of degree `k` in `dim` variables, lexicographically
/// decreasing.
fn compositions(dim: usize, k: usize, prefix: &mut Vec<u32>, out: &mut Vec<Monomial>) {
    if prefix.len() + 1 == dim {
        prefix.push(k as u32);
        out.push(prefix.clone());
        prefix.pop();
        return;
    }
    if dim == 0 {
        if k == 0 {
            out.push(Vec::new());
        }
        return;
    }
    for e in (0..=k).rev() {
        prefix.push(e as u32);
        compositions(dim, k - e, prefix, out);
        prefix.pop();
    }
}

/// A polynomial truncated at some degree, as a sparse map from exponents to
/// coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, Scalar>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial::default()
    }

    pub fn monomial(m: Monomial, coeff: Scalar) -> Self {
        let mut p = Polynomial::zero();
        p.add_term(m, coeff);
        p
    }

    pub fn add_term(&mut self, m: Monomial, coeff: Scalar) {
        let entry = self.terms.entry(m.clone()).or_insert_with(Scalar::zero);
        *entry += &coeff;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &[u32]) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Highest total degree present, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(|m| degree(m)).max()
    }

    pub fn truncated(&self, order: usize) -> Self {
        Polynomial {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| degree(m) <= order)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    /// Product truncated at `order`.
    pub fn mul_truncated(&self, other: &Polynomial, order: usize) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, a) in self.terms() {
            for (n, b) in other.terms() {
                let p: Monomial = m.iter().zip(n).map(|(x, y)| x + y).collect();
                if degree(&p) <= order {
                    out.add_term(p, a * b);
                }
            }
        }
        out
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| format!("({c})*{}", format_monomial(m)))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graded_lex_order() {
        let b = MonomialBasis::new(2, 2);
        let names: Vec<String> = b.monomials().iter().map(|m| format_monomial(m)).collect();
        assert_eq!(names, ["1", "x1", "x2", "x1^2", "x1*x2", "x2^2"]);
        assert_eq!(MonomialBasis::new(3, 5).len(), 56);
        assert_eq!(MonomialBasis::new(2, 5).len(), 21);
    }

    #[test]
    fn lower_order_is_prefix() {
        let big = MonomialBasis::new(3, 4);
        let small = MonomialBasis::new(3, 2);
        assert_eq!(&big.monomials()[..small.len()], small.monomials());
    }

    #[test]
    fn shifts() {
        let b = MonomialBasis::new(2, 3);
        assert_eq!(b.shifted(&[1, 0], &[1, 1]), b.index_of(&[2, 1]));
        assert_eq!(b.shifted(&[0, 1], &[-1, 1]), None);
        assert_eq!(b.shifted(&[2, 1], &[1, 0]), None);
    }

    #[test]
    fn polynomial_product() {
        let x = Polynomial::monomial(vec![1, 0], Scalar::one());
        let y = Polynomial::monomial(vec![0, 1], Scalar::from(2));
        let s = x.add(&y);
        let sq = s.mul_truncated(&s, 2);
        assert_eq!(sq.coeff(&[1, 1]), Scalar::from(4));
        assert_eq!(sq.coeff(&[0, 2]), Scalar::from(4));
        assert!(s.mul_truncated(&s, 1).is_zero());
    }
}
