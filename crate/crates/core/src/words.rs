//! Letters, words and the combinatorics on them.
//!
//! Positions are 1-based everywhere, so `conf(1, w)` merges the first two
//! entries of `w`.

use std::fmt;
use std::hash::Hash;
use std::ops::Deref;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::Scalar;

/// Something that can sit at a position of a word and be contracted with its
/// neighbour. Implemented by [`Letter`] (integer vectors) and [`Scalar`]
/// (weights), so contractions share one code path.
pub trait Symbol: Clone + Eq + Hash + fmt::Debug + fmt::Display + Send + Sync + 'static {
    fn merge(&self, other: &Self) -> Self;
}

impl Symbol for Scalar {
    fn merge(&self, other: &Self) -> Self {
        self + other
    }
}

/// An exponent shift `n ∈ Zᵈ`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Letter(Vec<i64>);

impl Letter {
    pub fn new(components: Vec<i64>) -> Self {
        Letter(components)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn components(&self) -> &[i64] {
        &self.0
    }

    /// Total degree `|n|`.
    pub fn degree(&self) -> i64 {
        self.0.iter().sum()
    }

    /// Prepared-form validity: nonnegative entries except at most one `-1`,
    /// and `|n| ≥ 1`.
    pub fn check_prepared(&self) -> Result<()> {
        let invalid = |reason: &str| Error::InvalidLetter {
            letter: self.to_string(),
            reason: reason.to_string(),
        };
        if self.0.is_empty() {
            return Err(invalid("empty letter"));
        }
        if self.0.iter().any(|&x| x < -1) {
            return Err(invalid("component below -1"));
        }
        if self.0.iter().filter(|&&x| x == -1).count() > 1 {
            return Err(invalid("more than one component equal to -1"));
        }
        if self.degree() < 1 {
            return Err(invalid("total degree below 1"));
        }
        Ok(())
    }

    pub fn is_prepared(&self) -> bool {
        self.check_prepared().is_ok()
    }
}

impl Symbol for Letter {
    fn merge(&self, other: &Self) -> Self {
        debug_assert_eq!(self.dim(), other.dim());
        Letter(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, x) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Letter {
    type Err = Error;

    /// `(1,1)`, `[1,1]` or bare `1,1`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let t = t
            .strip_prefix('(')
            .and_then(|x| x.strip_suffix(')'))
            .or_else(|| t.strip_prefix('[').and_then(|x| x.strip_suffix(']')))
            .unwrap_or(t);
        let comps = t
            .split(',')
            .map(|x| x.trim().parse::<i64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| Error::Parse {
                what: "letter",
                input: s.to_string(),
            })?;
        Ok(Letter(comps))
    }
}

impl From<&[i64]> for Letter {
    fn from(c: &[i64]) -> Self {
        Letter(c.to_vec())
    }
}

impl<const D: usize> From<[i64; D]> for Letter {
    fn from(c: [i64; D]) -> Self {
        Letter(c.to_vec())
    }
}

/// The diagonal of the linear part, `λ = (λ₁,…,λ_d)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Spectrum(Vec<Scalar>);

impl Spectrum {
    pub fn new(lambda: Vec<Scalar>) -> Result<Self> {
        if lambda.is_empty() {
            return Err(Error::Invalid("spectrum needs dimension at least 1".into()));
        }
        Ok(Spectrum(lambda))
    }

    pub fn from_ints(lambda: &[i64]) -> Self {
        Spectrum(lambda.iter().map(|&x| Scalar::from(x)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn values(&self) -> &[Scalar] {
        &self.0
    }

    /// `⟨m, λ⟩` for an arbitrary integer vector.
    pub fn pair(&self, m: &[i64]) -> Result<Scalar> {
        if m.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: m.len(),
            });
        }
        Ok(m.iter()
            .zip(&self.0)
            .filter(|(&k, _)| k != 0)
            .map(|(&k, l)| &Scalar::from(k) * l)
            .sum())
    }
}

impl FromStr for Spectrum {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Spectrum::new(parse_scalar_list(s)?)
    }
}

impl fmt::Display for Spectrum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", join(&self.0, ","))
    }
}

/// A finite word; `Word<Letter>` indexes moulds on an alphabet, `WeightWord`
/// indexes universal moulds directly.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize)]
pub struct Word<L>(Vec<L>);

pub type WeightWord = Word<Scalar>;

impl<L: Symbol> Word<L> {
    pub fn new(letters: Vec<L>) -> Self {
        Word(letters)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letters(&self) -> &[L] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<L> {
        self.0
    }

    pub fn concat(&self, other: &[L]) -> Self {
        let mut v = self.0.clone();
        v.extend_from_slice(other);
        Word(v)
    }

    /// Forward contraction `n^{<i} (n_i + n_{i+1}) n^{>i+1}`, `1 ≤ i < l(w)`.
    pub fn conf(&self, i: usize) -> Result<Self> {
        conf(i, &self.0).map(Word)
    }

    /// Backward contraction `n^{<i-1} (n_{i-1} + n_i) n^{>i}`, `1 < i ≤ l(w)`.
    pub fn conb(&self, i: usize) -> Result<Self> {
        conb(i, &self.0).map(Word)
    }

    /// `(n^{<i}, n^{>i})`.
    pub fn split(&self, i: usize) -> Result<(Self, Self)> {
        let (a, b) = split(&self.0, i)?;
        Ok((Word(a.to_vec()), Word(b.to_vec())))
    }
}

impl<L> Deref for Word<L> {
    type Target = [L];
    fn deref(&self) -> &[L] {
        &self.0
    }
}

impl<L> From<Vec<L>> for Word<L> {
    fn from(v: Vec<L>) -> Self {
        Word(v)
    }
}

impl<L: fmt::Display> fmt::Display for Word<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", join(&self.0, ","))
    }
}

impl<L: fmt::Display> fmt::Debug for Word<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Word<Letter> {
    type Err = Error;

    /// `[(1,1),(2,0)]`; brackets optional, `[]` is the empty word.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let t = t
            .strip_prefix('[')
            .and_then(|x| x.strip_suffix(']'))
            .unwrap_or(t)
            .trim();
        let mut letters = Vec::new();
        let mut rest = t;
        while !rest.is_empty() {
            let rest_t = rest.trim_start_matches([',', ' ']);
            if rest_t.is_empty() {
                break;
            }
            let (open, close) = match rest_t.chars().next() {
                Some('(') => ('(', ')'),
                Some('[') => ('[', ']'),
                _ => {
                    return Err(Error::Parse {
                        what: "word",
                        input: s.to_string(),
                    })
                }
            };
            let end = rest_t.find(close).ok_or_else(|| Error::Parse {
                what: "word",
                input: s.to_string(),
            })?;
            debug_assert!(rest_t.starts_with(open));
            letters.push(rest_t[..=end].parse()?);
            rest = &rest_t[end + 1..];
        }
        Ok(Word(letters))
    }
}

impl FromStr for WeightWord {
    type Err = Error;

    /// Comma-separated scalars, e.g. `0, 2, -2`; surrounding brackets or
    /// parentheses are optional.
    fn from_str(s: &str) -> Result<Self> {
        Ok(Word(parse_scalar_list(s)?))
    }
}

fn parse_scalar_list(s: &str) -> Result<Vec<Scalar>> {
    let t = s.trim();
    let t = t
        .strip_prefix('(')
        .and_then(|x| x.strip_suffix(')'))
        .or_else(|| t.strip_prefix('[').and_then(|x| x.strip_suffix(']')))
        .unwrap_or(t)
        .trim();
    if t.is_empty() {
        return Ok(Vec::new());
    }
    t.split(',').map(str::parse).collect()
}

pub(crate) fn join<T: fmt::Display>(items: &[T], sep: &str) -> String {
    items.iter().map(ToString::to_string).collect::<Vec<_>>().join(sep)
}

/// `ω(n) = ⟨n, λ⟩`.
pub fn weight(n: &Letter, lam: &Spectrum) -> Result<Scalar> {
    lam.pair(n.components())
}

/// Componentwise weight of a word.
pub fn weight_word(w: &[Letter], lam: &Spectrum) -> Result<WeightWord> {
    w.iter().map(|n| weight(n, lam)).collect::<Result<Vec<_>>>().map(Word)
}

pub fn is_resonant(n: &Letter, lam: &Spectrum) -> Result<bool> {
    Ok(weight(n, lam)?.is_zero())
}

/// All order-preserving interleavings of `a` and `b`, with multiplicity.
pub fn shuffles<L: Clone>(a: &[L], b: &[L]) -> Vec<Vec<L>> {
    fn go<L: Clone>(a: &[L], b: &[L], prefix: &mut Vec<L>, out: &mut Vec<Vec<L>>) {
        match (a.split_first(), b.split_first()) {
            (None, _) => {
                let mut w = prefix.clone();
                w.extend_from_slice(b);
                out.push(w);
            }
            (_, None) => {
                let mut w = prefix.clone();
                w.extend_from_slice(a);
                out.push(w);
            }
            (Some((x, ra)), Some((y, rb))) => {
                prefix.push(x.clone());
                go(ra, b, prefix, out);
                prefix.pop();
                prefix.push(y.clone());
                go(a, rb, prefix, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(a, b, &mut Vec::with_capacity(a.len() + b.len()), &mut out);
    out
}

pub fn conf<L: Symbol>(i: usize, w: &[L]) -> Result<Vec<L>> {
    if i == 0 || i >= w.len() {
        return Err(Error::PositionOutOfRange {
            op: "conf",
            pos: i,
            len: w.len(),
        });
    }
    let mut v = Vec::with_capacity(w.len() - 1);
    v.extend_from_slice(&w[..i - 1]);
    v.push(w[i - 1].merge(&w[i]));
    v.extend_from_slice(&w[i + 1..]);
    Ok(v)
}

pub fn conb<L: Symbol>(i: usize, w: &[L]) -> Result<Vec<L>> {
    if i < 2 || i > w.len() {
        return Err(Error::PositionOutOfRange {
            op: "conb",
            pos: i,
            len: w.len(),
        });
    }
    conf(i - 1, w)
}

pub fn split<L>(w: &[L], i: usize) -> Result<(&[L], &[L])> {
    if i == 0 || i > w.len() {
        return Err(Error::PositionOutOfRange {
            op: "split",
            pos: i,
            len: w.len(),
        });
    }
    Ok((&w[..i - 1], &w[i..]))
}

/// Every word over `alphabet` of length at most `max_len`, shortest first,
/// in lexicographic order of alphabet positions within a length.
pub fn words_up_to<L: Clone>(alphabet: &[L], max_len: usize) -> Vec<Vec<L>> {
    let mut out = vec![Vec::new()];
    let mut layer: Vec<Vec<L>> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(layer.len() * alphabet.len());
        for w in &layer {
            for a in alphabet {
                let mut v = w.clone();
                v.push(a.clone());
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ww(s: &str) -> Vec<Scalar> {
        s.parse::<WeightWord>().unwrap().into_letters()
    }

    #[test]
    fn weights() {
        let lam = Spectrum::from_ints(&[1, -1]);
        assert_eq!(weight(&Letter::from([1, 1]), &lam).unwrap(), Scalar::zero());
        assert_eq!(weight(&Letter::from([2, 0]), &lam).unwrap(), Scalar::from(2));
        let lam_i: Spectrum = "i,-i".parse().unwrap();
        assert_eq!(weight(&Letter::from([0, 1]), &lam_i).unwrap(), "-i".parse().unwrap());
        assert!(is_resonant(&Letter::from([3, 3]), &lam_i).unwrap());
        assert!(!is_resonant(&Letter::from([2, 0]), &lam).unwrap());
        assert!(matches!(
            weight(&Letter::from([1, 1, 1]), &lam),
            Err(Error::DimensionMismatch { expected: 2, found: 3 })
        ));
    }

    #[test]
    fn weight_words() {
        let lam = Spectrum::from_ints(&[1, -1]);
        assert!(weight_word(&[], &lam).unwrap().is_empty());
        let w: Word<Letter> = "[(1,1),(2,0)]".parse().unwrap();
        assert_eq!(weight_word(&w, &lam).unwrap().letters(), &ww("0,2")[..]);
        let w: Word<Letter> = "[(1,1),(1,1)]".parse().unwrap();
        assert_eq!(weight_word(&w, &lam).unwrap().letters(), &ww("0,0")[..]);
    }

    #[test]
    fn shuffle_counts() {
        let s = shuffles(&['x'], &['y']);
        assert_eq!(s, vec![vec!['x', 'y'], vec!['y', 'x']]);
        let s = shuffles(&[0], &[0, 0]);
        assert_eq!(s.len(), 3);
        assert!(s.iter().all(|w| w == &vec![0, 0, 0]));
        // Independent count: choose which of the 5 slots hold a's letters.
        let a = ['a', 'b'];
        let b = ['c', 'd', 'e'];
        let mut brute = 0;
        for mask in 0u32..32 {
            if mask.count_ones() == 2 {
                brute += 1;
            }
        }
        assert_eq!(shuffles(&a, &b).len(), brute);
        assert_eq!(brute, 10);
    }

    #[test]
    fn contractions() {
        let w = ww("1,2,3");
        assert_eq!(conf(2, &w).unwrap(), ww("1,5"));
        assert_eq!(conf(1, &w).unwrap(), ww("3,3"));
        assert!(conf(3, &w).is_err());
        assert!(conf(0, &w).is_err());
        assert_eq!(conb(2, &w).unwrap(), ww("3,3"));
        assert_eq!(conb(3, &w).unwrap(), ww("1,5"));
        assert!(conb(1, &w).is_err());
        assert!(conb(4, &w).is_err());
        let letters: Word<Letter> = "[(1,0),(0,2),(1,1)]".parse().unwrap();
        assert_eq!(letters.conf(1).unwrap().to_string(), "[(1,2),(1,1)]");
    }

    #[test]
    fn splits() {
        let w = ['a', 'b', 'c'];
        assert_eq!(split(&w, 1).unwrap(), (&[][..], &['b', 'c'][..]));
        assert_eq!(split(&w, 3).unwrap(), (&['a', 'b'][..], &[][..]));
        assert_eq!(split(&w, 2).unwrap(), (&['a'][..], &['c'][..]));
        assert!(split(&w, 0).is_err());
        assert!(split(&w, 4).is_err());
    }

    #[test]
    fn prepared_letters() {
        assert!(Letter::from([-1, 2]).is_prepared());
        assert!(!Letter::from([-1, 1]).is_prepared());
        assert!(Letter::from([1, 1]).is_prepared());
        assert!(!Letter::from([-1, 0]).is_prepared());
        assert!(!Letter::from([-1, -1, 4]).is_prepared());
        assert!(!Letter::from([-2, 3]).is_prepared());
    }

    #[test]
    fn word_text_round_trip() {
        let w: Word<Letter> = "[(1,1), [2,0]]".parse().unwrap();
        assert_eq!(w.to_string(), "[(1,1),(2,0)]");
        assert_eq!(w.to_string().parse::<Word<Letter>>().unwrap(), w);
        assert!("[]".parse::<Word<Letter>>().unwrap().is_empty());
        assert!("[(1,x)]".parse::<Word<Letter>>().is_err());
    }

    #[test]
    fn enumerates_words() {
        let ws = words_up_to(&['a', 'b'], 3);
        assert_eq!(ws.len(), 1 + 2 + 4 + 8);
        assert!(ws[0].is_empty());
    }
}
