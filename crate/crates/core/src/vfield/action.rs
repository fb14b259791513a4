use std::fmt;
use std::sync::Arc;

use super::basis::{format_monomial, Monomial, MonomialBasis, Polynomial};
use super::field::{FieldTerm, PreparedVectorField};
use super::operator::{lie_bracket, HomogeneousOp, TruncatedOperator};
use crate::error::{Error, Result};
use crate::exactnum::{Ring, Scalar};
use crate::moulds::Mould;
use crate::nilmould::{dia_mould, nil_mould};
use crate::words::Letter;

/// Adds `coeff · B_{ops[r-1]}∘…∘B_{ops[0]}` to `target`, the first operator
/// acting first. Each basis monomial has a single monomial image, so the
/// composition is followed column by column.
pub(crate) fn accumulate_word<T: Ring>(target: &mut TruncatedOperator<T>, ops: &[&HomogeneousOp<T>], coeff: &T) {
    let basis = target.basis().clone();
    for col in 0..basis.len() {
        let mut row = col;
        let mut c = coeff.clone();
        let mut alive = true;
        for op in ops {
            let m = basis.monomial(row);
            let beta = op.beta(m);
            match basis.shifted(m, op.letter().components()) {
                Some(next) if !beta.is_zero() => {
                    c = c * beta;
                    row = next;
                }
                _ => {
                    alive = false;
                    break;
                }
            }
        }
        if alive && !c.is_zero() {
            target.add_to(row, col, c);
        }
    }
}

pub(crate) fn lookup<'a, T: Ring>(x: &'a PreparedVectorField<T>, w: &[Letter]) -> Result<Vec<&'a HomogeneousOp<T>>> {
    w.iter()
        .map(|n| x.op(n).ok_or_else(|| Error::UnknownLetter(n.to_string())))
        .collect()
}

/// `B_w = B_{n_r}∘…∘B_{n_1}` at truncation `order`; `B_∅` is the identity.
pub fn compose_word<T: Ring>(x: &PreparedVectorField<T>, w: &[Letter], order: usize) -> Result<TruncatedOperator<T>> {
    let ops = lookup(x, w)?;
    let mut out = TruncatedOperator::zero(&x.basis(order));
    accumulate_word(&mut out, &ops, &T::one());
    Ok(out)
}

/// Nonempty words over `alphabet` with `Σ |n_i| ≤ budget`, shortest first.
/// Every letter must have positive degree.
pub fn words_within_degree(alphabet: &[Letter], budget: i64) -> Vec<Vec<Letter>> {
    let mut out = Vec::new();
    let mut layer: Vec<(Vec<Letter>, i64)> = vec![(Vec::new(), 0)];
    while !layer.is_empty() {
        let mut next = Vec::new();
        for (w, deg) in &layer {
            for a in alphabet {
                let d = deg + a.degree();
                if d <= budget {
                    let mut v = w.clone();
                    v.push(a.clone());
                    next.push((v, d));
                }
            }
        }
        out.extend(next.iter().map(|(w, _)| w.clone()));
        layer = next;
    }
    out
}

/// Words contributing to an operator at truncation `order`: a word of total
/// degree `D` sends every nonconstant monomial to degree at least `D + 1`.
pub(crate) fn contributing_words(alphabet: &[Letter], order: usize) -> Vec<Vec<Letter>> {
    words_within_degree(alphabet, order as i64 - 1)
}

/// `Act^M(X) = Σ_w M^w B_w` at truncation `order`, including `M^∅·id`.
pub fn act<T: Ring>(m: &Mould<Letter>, x: &PreparedVectorField<T>, order: usize) -> Result<TruncatedOperator<T>> {
    let basis = x.basis(order);
    let mut out = TruncatedOperator::zero(&basis);
    let empty = m.eval(&[])?;
    if !empty.is_zero() {
        out = out.add(&TruncatedOperator::identity(&basis).scale(&T::from(empty)))?;
    }
    for w in contributing_words(&x.alphabet(), order) {
        let v = m.eval(&w)?;
        if v.is_zero() {
            continue;
        }
        accumulate_word(&mut out, &lookup(x, &w)?, &T::from(v));
    }
    Ok(out)
}

/// `X_nil = Σ Nil^w B_w`.
pub fn nil_part(x: &PreparedVectorField, order: usize) -> Result<TruncatedOperator> {
    act(&nil_mould().on_letters(x.lam()), x, order)
}

/// `Σ Dia^w B_w`, without the linear part.
pub fn dia_nonlinear_part(x: &PreparedVectorField, order: usize) -> Result<TruncatedOperator> {
    act(&dia_mould().on_letters(x.lam()), x, order)
}

/// `X_dia = X_lin + Σ Dia^w B_w`, so that `X_nil + X_dia = X`.
pub fn dia_part(x: &PreparedVectorField, order: usize) -> Result<TruncatedOperator> {
    x.linear_operator(order).add(&dia_nonlinear_part(x, order)?)
}

/// A pair of monomials on which a product rule fails.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductRuleFailure {
    pub rule: &'static str,
    pub f: Monomial,
    pub g: Monomial,
    pub lhs: Polynomial,
    pub rhs: Polynomial,
}

impl fmt::Display for ProductRuleFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "f = {}, g = {}: P(fg) = {} but {} = {}",
            format_monomial(&self.f),
            format_monomial(&self.g),
            self.lhs,
            self.rule,
            self.rhs
        )
    }
}

fn column(p: &TruncatedOperator, col: usize) -> Polynomial {
    let basis = p.basis();
    let mut out = Polynomial::zero();
    for row in 0..basis.len() {
        let v = p.entry(row, col);
        if !v.is_zero() {
            out.add_term(basis.monomial(row).to_vec(), v.clone());
        }
    }
    out
}

/// Checks `P(fg) = P(f)g + fP(g)` for all monomials with `|f| + |g| ≤ N`.
pub fn is_derivation(p: &TruncatedOperator) -> Option<ProductRuleFailure> {
    let order = p.order();
    let mono = |m: &[u32]| Polynomial::monomial(m.to_vec(), Scalar::one());
    product_rule(p, "P(f)g + fP(g)", |pf, pg, f, g| {
        pf.mul_truncated(&mono(g), order).add(&mono(f).mul_truncated(pg, order))
    })
}

/// Checks `P(fg) = P(f)P(g)` for all monomials with `|f| + |g| ≤ N`, the
/// rule satisfied by the action of a symmetral mould such as `La`.
pub fn is_multiplicative(p: &TruncatedOperator) -> Option<ProductRuleFailure> {
    let order = p.order();
    product_rule(p, "P(f)P(g)", |pf, pg, _, _| pf.mul_truncated(pg, order))
}

fn product_rule(
    p: &TruncatedOperator,
    rule: &'static str,
    rhs: impl Fn(&Polynomial, &Polynomial, &[u32], &[u32]) -> Polynomial,
) -> Option<ProductRuleFailure> {
    let basis: &Arc<MonomialBasis> = p.basis();
    for i in 0..basis.len() {
        for j in i..basis.len() {
            let (f, g) = (basis.monomial(i), basis.monomial(j));
            let prod: Monomial = f.iter().zip(g).map(|(a, b)| a + b).collect();
            let Some(k) = basis.index_of(&prod) else { continue };
            let lhs = column(p, k);
            let rhs = rhs(&column(p, i), &column(p, j), f, g);
            if lhs != rhs {
                return Some(ProductRuleFailure {
                    rule,
                    f: f.to_vec(),
                    g: g.to_vec(),
                    lhs,
                    rhs,
                });
            }
        }
    }
    None
}

/// `exp(θ)(Y) = Σ_{r ≤ terms} ad_θ^r(Y) / r!` with `ad_θ(Y) = [Y, θ]`.
pub fn exp_ad(theta: &TruncatedOperator, y: &TruncatedOperator, terms: usize) -> Result<TruncatedOperator> {
    let mut out = y.clone();
    let mut current = y.clone();
    let mut fact = Scalar::one();
    for r in 1..=terms {
        current = lie_bracket(&current, theta)?;
        if current.is_zero() {
            break;
        }
        fact = &fact * &Scalar::from(r as i64);
        out = out.add(&current.scale(&fact.inv()?))?;
    }
    Ok(out)
}

/// Reads a derivation back as a vector field: component `i` is `P(x_i)`.
pub fn derivation_terms(p: &TruncatedOperator) -> Result<Vec<FieldTerm>> {
    if let Some(fail) = is_derivation(p) {
        return Err(Error::Invalid(format!("operator is not a derivation: {fail}")));
    }
    let basis = p.basis();
    let d = basis.dim();
    let mut terms = Vec::new();
    for i in 0..d {
        let mut e = vec![0u32; d];
        e[i] = 1;
        let Some(col) = basis.index_of(&e) else { continue };
        for (m, c) in column(p, col).terms() {
            terms.push(FieldTerm {
                component: i + 1,
                exponents: m.clone(),
                coeff: c.clone(),
            });
        }
    }
    Ok(terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moulds::UniversalMould;
    use crate::words::Spectrum;

    fn l(s: &str) -> Letter {
        s.parse().unwrap()
    }

    fn field() -> PreparedVectorField {
        let lam = Spectrum::from_ints(&[1, -1]);
        PreparedVectorField::new(
            lam,
            vec![
                HomogeneousOp::new(l("(1,1)"), vec![Scalar::one(), Scalar::from(2)]).unwrap(),
                HomogeneousOp::new(l("(2,0)"), vec![Scalar::from(3), Scalar::zero()]).unwrap(),
            ],
        )
        .unwrap()
    }

    #[test]
    fn composition_order() {
        let x = field();
        let basis = x.basis(6);
        let (n, m) = (l("(1,1)"), l("(2,0)"));
        let bn = x.op(&n).unwrap().matrix(&basis);
        let bm = x.op(&m).unwrap().matrix(&basis);
        assert_eq!(compose_word(&x, &[n.clone(), m.clone()], 6).unwrap(), bm.compose(&bn).unwrap());
        assert_ne!(compose_word(&x, &[n, m], 6).unwrap(), bn.compose(&bm).unwrap());
        assert_eq!(compose_word(&x, &[], 6).unwrap(), TruncatedOperator::identity(&basis));
        assert!(compose_word(&x, &[l("(0,2)")], 6).is_err());
    }

    #[test]
    fn long_words_vanish() {
        let x = field();
        let w = vec![l("(1,1)"); 3];
        assert!(compose_word(&x, &w, 5).unwrap().is_zero());
    }

    #[test]
    fn identity_mould_gives_nonlinear_part() {
        let x = field();
        assert_eq!(act(&Mould::identity(), &x, 5).unwrap(), x.nonlinear_operator(5));
        assert!(act(&Mould::zero(), &x, 5).unwrap().is_zero());
    }

    #[test]
    fn derivation_checks() {
        let x = field();
        let basis = x.basis(6);
        let b = x.op(&l("(1,1)")).unwrap().matrix(&basis);
        assert!(is_derivation(&b).is_none());
        let bb = compose_word(&x, &[l("(1,1)"), l("(2,0)")], 6).unwrap();
        assert!(is_derivation(&bb).is_some());
        assert!(is_derivation(&TruncatedOperator::identity(&basis)).is_some());
    }

    #[test]
    fn la_action_is_an_automorphism() {
        let lam = Spectrum::from_ints(&[1, 3]);
        let x = PreparedVectorField::new(
            lam.clone(),
            vec![
                HomogeneousOp::new(l("(1,0)"), vec![Scalar::one(), Scalar::from(2)]).unwrap(),
                HomogeneousOp::new(l("(0,1)"), vec![Scalar::from(-1), Scalar::one()]).unwrap(),
            ],
        )
        .unwrap();
        let p = act(&UniversalMould::linearization().on_letters(&lam), &x, 5).unwrap();
        assert!(is_multiplicative(&p).is_none());
        assert!(is_derivation(&p).is_some());
        assert!(is_multiplicative(&x.nonlinear_operator(5)).is_some());
    }

    #[test]
    fn nil_part_of_non_resonant_field_vanishes() {
        let lam = Spectrum::from_ints(&[1, 3]);
        let x = PreparedVectorField::new(
            lam,
            vec![HomogeneousOp::new(l("(1,0)"), vec![Scalar::one(), Scalar::from(2)]).unwrap()],
        )
        .unwrap();
        assert!(nil_part(&x, 5).unwrap().is_zero());
    }

    #[test]
    fn nil_part_of_single_resonant_letter() {
        let lam = Spectrum::from_ints(&[1, -1]);
        let b = HomogeneousOp::new(l("(1,1)"), vec![Scalar::one(), Scalar::from(-1)]).unwrap();
        let x = PreparedVectorField::new(lam, vec![b.clone()]).unwrap();
        assert_eq!(nil_part(&x, 5).unwrap(), b.matrix(&x.basis(5)));
    }

    #[test]
    fn exp_ad_matches_conjugation() {
        let x = field();
        let basis = x.basis(5);
        let theta = x.op(&l("(2,0)")).unwrap().matrix(&basis);
        let y = x.linear_operator(5);
        let lhs = exp_ad(&theta, &y, 10).unwrap();
        let exp = |t: &TruncatedOperator| {
            let mut out = TruncatedOperator::identity(&basis);
            let mut power = TruncatedOperator::identity(&basis);
            let mut fact = Scalar::one();
            for r in 1..=6 {
                power = power.compose(t).unwrap();
                fact = &fact * &Scalar::from(r);
                out = out.add(&power.scale(&fact.inv().unwrap())).unwrap();
            }
            out
        };
        let neg = theta.scale(&Scalar::from(-1));
        let rhs = exp(&theta).compose(&y).unwrap().compose(&exp(&neg)).unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(exp_ad(&TruncatedOperator::zero(&basis), &y, 5).unwrap(), y);
    }

    #[test]
    fn derivation_round_trip() {
        let x = field();
        let terms = derivation_terms(&x.nonlinear_operator(5)).unwrap();
        let back = PreparedVectorField::parse_field(&terms, x.lam()).unwrap();
        assert_eq!(back, x);
    }
}
