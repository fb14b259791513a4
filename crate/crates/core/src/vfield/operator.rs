use std::fmt;
use std::sync::Arc;

use super::basis::{format_monomial, MonomialBasis, Polynomial};
use crate::error::{Error, Result};
use crate::exactnum::{EpsJet, Ring, Scalar};
use crate::words::{Letter, Spectrum};

fn int<T: Ring>(k: i64) -> T {
    T::from(Scalar::from(k))
}

/// `B_n = Σ_i a_i x^{n+e_i} ∂_i`, acting by `B_n(x^m) = ⟨a, m⟩ x^{n+m}`.
#[derive(Clone, Debug, PartialEq)]
pub struct HomogeneousOp<T: Ring = Scalar> {
    n: Letter,
    a: Vec<T>,
}

impl<T: Ring> HomogeneousOp<T> {
    /// Checks that `n` is a prepared letter and that `a_i = 0` whenever
    /// `n + e_i` has a negative entry.
    pub fn new(n: Letter, a: Vec<T>) -> Result<Self> {
        n.check_prepared()?;
        if a.len() != n.dim() {
            return Err(Error::DimensionMismatch {
                expected: n.dim(),
                found: a.len(),
            });
        }
        for (i, ai) in a.iter().enumerate() {
            if !ai.is_zero() && !Self::slot_allowed(&n, i) {
                return Err(Error::InvalidLetter {
                    letter: n.to_string(),
                    reason: format!("coefficient a_{} must vanish since n + e_{} has a negative entry", i + 1, i + 1),
                });
            }
        }
        Ok(HomogeneousOp { n, a })
    }

    fn slot_allowed(n: &Letter, i: usize) -> bool {
        n.components()
            .iter()
            .enumerate()
            .all(|(j, &x)| x + i64::from(i == j) >= 0)
    }

    pub fn letter(&self) -> &Letter {
        &self.n
    }

    pub fn coeffs(&self) -> &[T] {
        &self.a
    }

    pub fn is_zero(&self) -> bool {
        self.a.iter().all(Ring::is_zero)
    }

    /// `β_{n,m} = ⟨a, m⟩`.
    pub fn beta(&self, m: &[u32]) -> T {
        self.a
            .iter()
            .zip(m)
            .filter(|(_, &e)| e > 0)
            .fold(T::zero(), |acc, (ai, &e)| acc + ai.clone() * int(e as i64))
    }

    pub fn map_coeffs<U: Ring>(&self, f: impl Fn(&T) -> U) -> HomogeneousOp<U> {
        HomogeneousOp {
            n: self.n.clone(),
            a: self.a.iter().map(f).collect(),
        }
    }

    pub fn add(&self, other: &HomogeneousOp<T>) -> Result<HomogeneousOp<T>> {
        if self.n != other.n {
            return Err(Error::Invalid(format!(
                "cannot add operators of degrees {} and {}",
                self.n, other.n
            )));
        }
        Ok(HomogeneousOp {
            n: self.n.clone(),
            a: self.a.iter().zip(&other.a).map(|(x, y)| x.clone() + y.clone()).collect(),
        })
    }

    /// `[self, other] = other∘self − self∘other`, homogeneous of degree
    /// `n_self + n_other`.
    ///
    /// With `self = Σ a'_i x^{c+e_i}∂_i` and `other = Σ a_i x^{n+e_i}∂_i` the
    /// coefficients are `⟨a, c⟩ a' − ⟨a', n⟩ a`.
    pub fn bracket(&self, other: &HomogeneousOp<T>) -> HomogeneousOp<T> {
        let pair = |a: &[T], l: &Letter| {
            a.iter()
                .zip(l.components())
                .fold(T::zero(), |acc, (ai, &k)| acc + ai.clone() * int(k))
        };
        let s = pair(&other.a, &self.n);
        let t = pair(&self.a, &other.n);
        let n: Vec<i64> = self
            .n
            .components()
            .iter()
            .zip(other.n.components())
            .map(|(x, y)| x + y)
            .collect();
        HomogeneousOp {
            n: Letter::new(n),
            a: self
                .a
                .iter()
                .zip(&other.a)
                .map(|(ap, a)| s.clone() * ap.clone() - t.clone() * a.clone())
                .collect(),
        }
    }

    pub fn matrix(&self, basis: &Arc<MonomialBasis>) -> TruncatedOperator<T> {
        let mut out = TruncatedOperator::zero(basis);
        for col in 0..basis.len() {
            let m = basis.monomial(col);
            if let Some(row) = basis.shifted(m, self.n.components()) {
                let beta = self.beta(m);
                if !beta.is_zero() {
                    out.set(row, col, beta);
                }
            }
        }
        out
    }
}

impl HomogeneousOp<Scalar> {
    /// The operator with `a_i = i` on every admissible slot.
    pub fn with_default_coeffs(n: Letter) -> Result<Self> {
        n.check_prepared()?;
        let a = (0..n.dim())
            .map(|i| {
                if Self::slot_allowed(&n, i) {
                    Scalar::from(i as i64 + 1)
                } else {
                    Scalar::zero()
                }
            })
            .collect();
        HomogeneousOp::new(n, a)
    }
}

impl<T: Ring> fmt::Display for HomogeneousOp<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coeffs: Vec<String> = self.a.iter().map(|x| x.to_string()).collect();
        write!(f, "B_{} a=({})", self.n, coeffs.join(", "))
    }
}

/// Applies `B` to a polynomial, dropping monomials beyond degree `order`.
pub fn apply_op(b: &HomogeneousOp<Scalar>, p: &Polynomial, order: usize) -> Polynomial {
    let mut out = Polynomial::zero();
    for (m, c) in p.terms() {
        let beta = b.beta(m);
        if beta.is_zero() {
            continue;
        }
        let target: Option<Vec<u32>> = m
            .iter()
            .zip(b.letter().components())
            .map(|(&e, &k)| u32::try_from(e as i64 + k).ok())
            .collect();
        if let Some(t) = target {
            if super::basis::degree(&t) <= order {
                out.add_term(t, &beta * c);
            }
        }
    }
    out
}

/// An exact linear map on the monomials of degree at most `order`.
///
/// Entry `(row, col)` is the coefficient of basis monomial `row` in the image
/// of basis monomial `col`. Composition `P∘Q` applies `Q` first.
#[derive(Clone, Debug)]
pub struct TruncatedOperator<T: Ring = Scalar> {
    basis: Arc<MonomialBasis>,
    entries: Vec<T>,
}

impl<T: Ring> PartialEq for TruncatedOperator<T> {
    fn eq(&self, other: &Self) -> bool {
        self.same_basis(other) && self.entries == other.entries
    }
}

impl<T: Ring> TruncatedOperator<T> {
    pub fn zero(basis: &Arc<MonomialBasis>) -> Self {
        TruncatedOperator {
            basis: basis.clone(),
            entries: vec![T::zero(); basis.len() * basis.len()],
        }
    }

    pub fn identity(basis: &Arc<MonomialBasis>) -> Self {
        let mut out = Self::zero(basis);
        for i in 0..basis.len() {
            out.set(i, i, T::one());
        }
        out
    }

    /// The diagonal operator `X_lin(x^m) = ⟨m, λ⟩ x^m`.
    pub fn linear_part(lam: &Spectrum, basis: &Arc<MonomialBasis>) -> Result<Self> {
        if lam.dim() != basis.dim() {
            return Err(Error::DimensionMismatch {
                expected: basis.dim(),
                found: lam.dim(),
            });
        }
        let mut out = Self::zero(basis);
        for (i, m) in basis.monomials().iter().enumerate() {
            let w: Scalar = m
                .iter()
                .zip(lam.values())
                .map(|(&e, l)| &Scalar::from(e as i64) * l)
                .sum();
            out.set(i, i, T::from(w));
        }
        Ok(out)
    }

    pub fn basis(&self) -> &Arc<MonomialBasis> {
        &self.basis
    }

    pub fn order(&self) -> usize {
        self.basis.order()
    }

    pub fn entry(&self, row: usize, col: usize) -> &T {
        &self.entries[row * self.basis.len() + col]
    }

    pub fn set(&mut self, row: usize, col: usize, v: T) {
        let n = self.basis.len();
        self.entries[row * n + col] = v;
    }

    pub(crate) fn add_to(&mut self, row: usize, col: usize, v: T) {
        let n = self.basis.len();
        let e = &mut self.entries[row * n + col];
        *e = e.clone() + v;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Ring::is_zero)
    }

    fn same_basis(&self, other: &Self) -> bool {
        self.basis.dim() == other.basis.dim() && self.basis.order() == other.basis.order()
    }

    fn check_basis(&self, other: &Self) -> Result<()> {
        if self.basis.dim() != other.basis.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.basis.dim(),
                found: other.basis.dim(),
            });
        }
        if self.basis.order() != other.basis.order() {
            return Err(Error::Invalid(format!(
                "truncation orders differ: {} and {}",
                self.basis.order(),
                other.basis.order()
            )));
        }
        Ok(())
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&T, &T) -> T) -> Result<Self> {
        self.check_basis(other)?;
        Ok(TruncatedOperator {
            basis: self.basis.clone(),
            entries: self.entries.iter().zip(&other.entries).map(|(x, y)| f(x, y)).collect(),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |x, y| x.clone() + y.clone())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |x, y| x.clone() - y.clone())
    }

    pub fn scale(&self, s: &T) -> Self {
        self.map(|x| s.clone() * x.clone())
    }

    pub fn map<U: Ring>(&self, f: impl Fn(&T) -> U) -> TruncatedOperator<U> {
        TruncatedOperator {
            basis: self.basis.clone(),
            entries: self.entries.iter().map(f).collect(),
        }
    }

    /// `self∘other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.check_basis(other)?;
        let n = self.basis.len();
        let mut out = Self::zero(&self.basis);
        for k in 0..n {
            for col in 0..n {
                let q = other.entry(k, col);
                if q.is_zero() {
                    continue;
                }
                for row in 0..n {
                    let p = self.entry(row, k);
                    if !p.is_zero() {
                        out.add_to(row, col, p.clone() * q.clone());
                    }
                }
            }
        }
        Ok(out)
    }

    /// Nonzero entries `(row, col, value)`, column by column.
    pub fn nonzero_entries(&self) -> Vec<(usize, usize, &T)> {
        let n = self.basis.len();
        let mut out = Vec::new();
        for col in 0..n {
            for row in 0..n {
                let v = self.entry(row, col);
                if !v.is_zero() {
                    out.push((row, col, v));
                }
            }
        }
        out
    }

    /// First entry, in column order, where the two operators differ.
    pub fn first_difference(&self, other: &Self) -> Result<Option<(usize, usize)>> {
        self.check_basis(other)?;
        let n = self.basis.len();
        for col in 0..n {
            for row in 0..n {
                if self.entry(row, col) != other.entry(row, col) {
                    return Ok(Some((row, col)));
                }
            }
        }
        Ok(None)
    }

    /// Every nonzero entry maps degree `k` to degree `k + shift`.
    pub fn is_homogeneous(&self, shift: usize) -> bool {
        self.nonzero_entries().iter().all(|&(row, col, _)| {
            super::basis::degree(self.basis.monomial(row))
                == super::basis::degree(self.basis.monomial(col)) + shift
        })
    }

    /// The same operator on the monomials of degree at most `order`.
    pub fn restrict(&self, order: usize) -> Result<Self> {
        if order > self.order() {
            return Err(Error::Invalid(format!(
                "cannot restrict order {} to the larger order {order}",
                self.order()
            )));
        }
        let basis = MonomialBasis::new(self.basis.dim(), order);
        let mut out = Self::zero(&basis);
        for row in 0..basis.len() {
            for col in 0..basis.len() {
                out.set(row, col, self.entry(row, col).clone());
            }
        }
        Ok(out)
    }
}

impl TruncatedOperator<Scalar> {
    pub fn apply(&self, p: &Polynomial) -> Result<Polynomial> {
        let mut out = Polynomial::zero();
        for (m, c) in p.terms() {
            let col = self.basis.index_of(m).ok_or_else(|| {
                Error::Invalid(format!("monomial {} beyond the truncation order", format_monomial(m)))
            })?;
            for row in 0..self.basis.len() {
                let v = self.entry(row, col);
                if !v.is_zero() {
                    out.add_term(self.basis.monomial(row).to_vec(), v * c);
                }
            }
        }
        Ok(out)
    }
}

impl TruncatedOperator<EpsJet> {
    /// The `ε⁰` coefficient.
    pub fn value_part(&self) -> TruncatedOperator<Scalar> {
        self.map(|x| x.val.clone())
    }

    /// The `ε¹` coefficient.
    pub fn eps_part(&self) -> TruncatedOperator<Scalar> {
        self.map(|x| x.d.clone())
    }
}

impl<T: Ring> fmt::Display for TruncatedOperator<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let entries = self.nonzero_entries();
        if entries.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        let mut current = usize::MAX;
        for (row, col, v) in entries {
            if col != current {
                if !first {
                    writeln!(f)?;
                }
                write!(f, "{} ->", format_monomial(self.basis.monomial(col)))?;
                current = col;
                first = false;
            } else {
                write!(f, " +")?;
            }
            write!(f, " ({v})*{}", format_monomial(self.basis.monomial(row)))?;
        }
        Ok(())
    }
}

/// `[P, Q] = Q∘P − P∘Q`.
///
/// With this orientation `[B_c, X_lin] = ω(c)·B_c`, and `ad_θ(Y) = [Y, θ]`
/// gives the Lie series `e^θ Y e^{−θ}`.
pub fn lie_bracket<T: Ring>(p: &TruncatedOperator<T>, q: &TruncatedOperator<T>) -> Result<TruncatedOperator<T>> {
    q.compose(p)?.sub(&p.compose(q)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l(s: &str) -> Letter {
        s.parse().unwrap()
    }

    fn op(n: &str, a: &[i64]) -> HomogeneousOp {
        HomogeneousOp::new(l(n), a.iter().map(|&x| Scalar::from(x)).collect()).unwrap()
    }

    #[test]
    fn validation() {
        assert!(HomogeneousOp::<Scalar>::new(l("(-1,2)"), vec![Scalar::one(), Scalar::zero()]).is_ok());
        assert!(HomogeneousOp::<Scalar>::new(l("(-1,2)"), vec![Scalar::zero(), Scalar::one()]).is_err());
        assert!(HomogeneousOp::<Scalar>::new(l("(-1,0)"), vec![Scalar::one(), Scalar::zero()]).is_err());
        let d = HomogeneousOp::with_default_coeffs(l("(2,-1)")).unwrap();
        assert_eq!(d.coeffs(), &[Scalar::zero(), Scalar::from(2)]);
    }

    #[test]
    fn apply_examples() {
        let b = op("(1,1)", &[1, 0]);
        let one = Polynomial::monomial(vec![0, 0], Scalar::one());
        assert!(apply_op(&b, &one, 5).is_zero());
        let x1 = Polynomial::monomial(vec![1, 0], Scalar::one());
        assert_eq!(apply_op(&b, &x1, 5), Polynomial::monomial(vec![2, 1], Scalar::one()));
        let x2 = Polynomial::monomial(vec![0, 1], Scalar::one());
        assert!(apply_op(&b, &x2, 5).is_zero());
        assert!(apply_op(&b, &x1, 2).is_zero());
    }

    #[test]
    fn matrix_matches_apply() {
        let basis = MonomialBasis::new(2, 4);
        let b = op("(-1,2)", &[3, 0]);
        let m = b.matrix(&basis);
        for mono in basis.monomials() {
            let p = Polynomial::monomial(mono.clone(), Scalar::one());
            assert_eq!(m.apply(&p).unwrap(), apply_op(&b, &p, 4));
        }
    }

    #[test]
    fn bracket_with_linear_part() {
        let basis = MonomialBasis::new(2, 5);
        let lam = Spectrum::from_ints(&[1, -1]);
        let xlin = TruncatedOperator::linear_part(&lam, &basis).unwrap();
        let b = op("(0,2)", &[1, 1]);
        let bm = b.matrix(&basis);
        let lhs = lie_bracket(&bm, &xlin).unwrap();
        assert_eq!(lhs, bm.scale(&Scalar::from(-2)));
        assert!(lie_bracket(&bm, &bm).unwrap().is_zero());
    }

    #[test]
    fn symbolic_bracket_matches_matrices() {
        let basis = MonomialBasis::new(2, 6);
        let c = op("(0,2)", &[1, 2]);
        let n = op("(1,1)", &[3, -1]);
        let sym = c.bracket(&n);
        assert_eq!(sym.letter(), &l("(1,3)"));
        let mat = lie_bracket(&c.matrix(&basis), &n.matrix(&basis)).unwrap();
        assert_eq!(sym.matrix(&basis), mat);
        assert!(mat.is_homogeneous(4));
    }

    #[test]
    fn restriction_is_top_left_block() {
        let basis = MonomialBasis::new(2, 5);
        let m = op("(1,0)", &[1, 1]).matrix(&basis);
        let small = MonomialBasis::new(2, 3);
        assert_eq!(m.restrict(3).unwrap(), op("(1,0)", &[1, 1]).matrix(&small));
    }
}
