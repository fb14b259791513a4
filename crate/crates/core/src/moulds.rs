//! The mould algebra.
//!
//! A [`Mould`] is a lazily evaluated function on words. Tabulated moulds,
//! universal moulds and every derived mould (products, linear combinations,
//! variances) share this representation, so composite moulds only evaluate the
//! finitely many values they actually need.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::ops::{Add, Mul, Sub};
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::Scalar;
use crate::random;
use crate::words::{self, shuffles, weight_word, Letter, Spectrum, Symbol, Word};

type Rule<L> = dyn Fn(&[L]) -> Result<Scalar> + Send + Sync;
type WeightRule = dyn Fn(&[Scalar]) -> Result<Scalar> + Send + Sync;
type SingularSet = dyn Fn(&[Scalar]) -> bool + Send + Sync;

/// A function from words over `L` to scalars.
#[derive(Clone)]
pub struct Mould<L> {
    name: Arc<str>,
    rule: Arc<Rule<L>>,
}

impl<L> fmt::Debug for Mould<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mould({})", self.name)
    }
}

impl<L: Symbol> Mould<L> {
    pub fn from_fn(
        name: impl AsRef<str>,
        rule: impl Fn(&[L]) -> Result<Scalar> + Send + Sync + 'static,
    ) -> Self {
        Mould {
            name: Arc::from(name.as_ref()),
            rule: Arc::new(rule),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn renamed(&self, name: impl AsRef<str>) -> Self {
        Mould {
            name: Arc::from(name.as_ref()),
            rule: self.rule.clone(),
        }
    }

    pub fn eval(&self, w: &[L]) -> Result<Scalar> {
        (self.rule)(w)
    }

    pub fn zero() -> Self {
        Mould::from_fn("0", |_| Ok(Scalar::zero()))
    }

    /// The product unit: 1 on `∅`, 0 elsewhere.
    pub fn unit() -> Self {
        Mould::from_fn("1_empty", |w| Ok(indicator(w.is_empty())))
    }

    /// Value `v` on every word, `∅` included.
    pub fn constant(v: Scalar) -> Self {
        Mould::from_fn(format!("const:{v}"), move |_| Ok(v.clone()))
    }

    /// `I•`: 1 on words of length one, 0 elsewhere (including `∅`).
    pub fn identity() -> Self {
        Mould::from_fn("I", |w| Ok(indicator(w.len() == 1)))
    }

    /// `I_c•`: 1 on the one-letter word `(c)`, 0 elsewhere.
    pub fn dirac(c: L) -> Self {
        Mould::from_fn(format!("I_{c}"), move |w| Ok(indicator(w.len() == 1 && w[0] == c)))
    }

    /// `(M × N)^w = Σ_{w=ab} M^a N^b`, empty factors included.
    pub fn product(&self, other: &Mould<L>) -> Mould<L> {
        let (m, n) = (self.clone(), other.clone());
        Mould::from_fn(format!("({}×{})", self.name, other.name), move |w| {
            let mut acc = Scalar::zero();
            for k in 0..=w.len() {
                let a = m.eval(&w[..k])?;
                if a.is_zero() {
                    continue;
                }
                let b = n.eval(&w[k..])?;
                acc += &(&a * &b);
            }
            Ok(acc)
        })
    }

    /// Pointwise `αM + βN`.
    pub fn linear(alpha: Scalar, m: &Mould<L>, beta: Scalar, n: &Mould<L>) -> Mould<L> {
        let name = format!("({alpha}·{} + {beta}·{})", m.name, n.name);
        let (m, n) = (m.clone(), n.clone());
        Mould::from_fn(name, move |w| {
            let mut acc = Scalar::zero();
            if !alpha.is_zero() {
                acc += &(&alpha * &m.eval(w)?);
            }
            if !beta.is_zero() {
                acc += &(&beta * &n.eval(w)?);
            }
            Ok(acc)
        })
    }

    pub fn scaled(&self, s: Scalar) -> Mould<L> {
        Mould::linear(s, self, Scalar::zero(), &Mould::zero())
    }

    /// Compares two moulds on every word over `alphabet` up to `max_len` and
    /// returns the first word where they differ.
    pub fn first_difference(
        &self,
        other: &Mould<L>,
        alphabet: &[L],
        max_len: usize,
    ) -> Result<Option<(Word<L>, Scalar, Scalar)>> {
        for w in words::words_up_to(alphabet, max_len) {
            let (a, b) = (self.eval(&w)?, other.eval(&w)?);
            if a != b {
                return Ok(Some((Word::new(w), a, b)));
            }
        }
        Ok(None)
    }

    /// Mould equality is only decidable up to a length bound.
    pub fn equal_up_to(&self, other: &Mould<L>, alphabet: &[L], max_len: usize) -> Result<bool> {
        Ok(self.first_difference(other, alphabet, max_len)?.is_none())
    }
}

fn indicator(b: bool) -> Scalar {
    if b {
        Scalar::one()
    } else {
        Scalar::zero()
    }
}

impl<L: Symbol> Mul for &Mould<L> {
    type Output = Mould<L>;
    fn mul(self, rhs: &Mould<L>) -> Mould<L> {
        self.product(rhs)
    }
}

impl<L: Symbol> Add for &Mould<L> {
    type Output = Mould<L>;
    fn add(self, rhs: &Mould<L>) -> Mould<L> {
        Mould::linear(Scalar::one(), self, Scalar::one(), rhs)
    }
}

impl<L: Symbol> Sub for &Mould<L> {
    type Output = Mould<L>;
    fn sub(self, rhs: &Mould<L>) -> Mould<L> {
        Mould::linear(Scalar::one(), self, -Scalar::one(), rhs)
    }
}

/// A mould given by a rule on weight sequences, `M^n = F_r(ω(n))`.
///
/// The rule is only consulted outside the declared singular set; on singular
/// inputs evaluation fails with [`Error::Singular`].
#[derive(Clone)]
pub struct UniversalMould {
    name: Arc<str>,
    rule: Arc<WeightRule>,
    singular: Arc<SingularSet>,
}

impl fmt::Debug for UniversalMould {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UniversalMould({})", self.name)
    }
}

impl UniversalMould {
    pub fn new(
        name: impl AsRef<str>,
        rule: impl Fn(&[Scalar]) -> Result<Scalar> + Send + Sync + 'static,
        singular: impl Fn(&[Scalar]) -> bool + Send + Sync + 'static,
    ) -> Self {
        UniversalMould {
            name: Arc::from(name.as_ref()),
            rule: Arc::new(rule),
            singular: Arc::new(singular),
        }
    }

    /// A rule defined on every weight sequence.
    pub fn total(
        name: impl AsRef<str>,
        rule: impl Fn(&[Scalar]) -> Result<Scalar> + Send + Sync + 'static,
    ) -> Self {
        UniversalMould::new(name, rule, |_| false)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn is_singular(&self, weights: &[Scalar]) -> bool {
        (self.singular)(weights)
    }

    pub fn eval(&self, weights: &[Scalar]) -> Result<Scalar> {
        if self.is_singular(weights) {
            return Err(Error::Singular {
                mould: self.name.to_string(),
                word: Word::new(weights.to_vec()).to_string(),
            });
        }
        (self.rule)(weights)
    }

    pub fn on_weights(&self) -> Mould<Scalar> {
        let u = self.clone();
        Mould::from_fn(self.name.as_ref(), move |w| u.eval(w))
    }

    /// Evaluation on letter words through `ω(n) = ⟨n, λ⟩`.
    pub fn on_letters(&self, lam: &Spectrum) -> Mould<Letter> {
        let (u, lam) = (self.clone(), lam.clone());
        Mould::from_fn(self.name.as_ref(), move |w| u.eval(&weight_word(w, &lam)?))
    }

    /// `La_r(x) = 1 / ((x₁+…+x_r)(x₁+…+x_{r−1})⋯x₁)`, singular where a prefix
    /// sum vanishes; `La_0 = 1`.
    pub fn linearization() -> Self {
        UniversalMould::new(
            "La",
            |x| {
                let mut acc = Scalar::one();
                let mut prefix = Scalar::zero();
                for xi in x {
                    prefix += xi;
                    acc = &acc * &prefix.inv()?;
                }
                Ok(acc)
            },
            |x| {
                let mut prefix = Scalar::zero();
                x.iter().any(|xi| {
                    prefix += xi;
                    prefix.is_zero()
                })
            },
        )
    }

    /// `1 / l(n)!`.
    pub fn invfact() -> Self {
        UniversalMould::total("invfact", |x| {
            let fact: i64 = (1..=x.len() as i64).product();
            Scalar::from(fact).inv()
        })
    }
}

/// A mould stored as a finite table over a fixed alphabet.
///
/// Words with a letter outside the alphabet evaluate to 0; words longer than
/// `max_len` are an error rather than 0.
#[derive(Clone, Debug)]
pub struct TabulatedMould<L: Symbol> {
    alphabet: Vec<L>,
    members: HashSet<L>,
    max_len: usize,
    table: HashMap<Vec<L>, Scalar>,
}

impl<L: Symbol> TabulatedMould<L> {
    pub fn new(alphabet: Vec<L>, max_len: usize) -> Self {
        let members = alphabet.iter().cloned().collect();
        TabulatedMould {
            alphabet,
            members,
            max_len,
            table: HashMap::new(),
        }
    }

    pub fn alphabet(&self) -> &[L] {
        &self.alphabet
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    pub fn insert(&mut self, w: Vec<L>, value: Scalar) -> Result<()> {
        if w.len() > self.max_len {
            return Err(Error::LengthOverflow {
                len: w.len(),
                max_len: self.max_len,
            });
        }
        if let Some(l) = w.iter().find(|l| !self.members.contains(l)) {
            return Err(Error::Invalid(format!("letter {l} is outside the alphabet")));
        }
        if value.is_zero() {
            self.table.remove(&w);
        } else {
            self.table.insert(w, value);
        }
        Ok(())
    }

    pub fn eval(&self, w: &[L]) -> Result<Scalar> {
        if w.len() > self.max_len {
            return Err(Error::LengthOverflow {
                len: w.len(),
                max_len: self.max_len,
            });
        }
        if w.iter().any(|l| !self.members.contains(l)) {
            return Ok(Scalar::zero());
        }
        Ok(self.table.get(w).cloned().unwrap_or_default())
    }

    /// Tabulates `m` on every word over `alphabet` up to `max_len`.
    pub fn tabulate(m: &Mould<L>, alphabet: &[L], max_len: usize) -> Result<Self> {
        let mut t = TabulatedMould::new(alphabet.to_vec(), max_len);
        for w in words::words_up_to(alphabet, max_len) {
            let v = m.eval(&w)?;
            t.insert(w, v)?;
        }
        Ok(t)
    }

    /// Independent small random values on every word, `∅` included.
    pub fn random<R: Rng>(alphabet: &[L], max_len: usize, rng: &mut R) -> Self {
        let mut t = TabulatedMould::new(alphabet.to_vec(), max_len);
        for w in words::words_up_to(alphabet, max_len) {
            let v = random::small_scalar(rng);
            t.insert(w, v).expect("word drawn from the alphabet");
        }
        t
    }

    pub fn to_mould(&self, name: impl AsRef<str>) -> Mould<L> {
        let t = Arc::new(self.clone());
        Mould::from_fn(name, move |w| t.eval(w))
    }

    /// Nonzero entries, sorted by length and then by alphabet position.
    pub fn entries(&self) -> Vec<(Word<L>, Scalar)> {
        let pos: HashMap<&L, usize> = self.alphabet.iter().enumerate().map(|(k, l)| (l, k)).collect();
        let mut v: Vec<_> = self.table.iter().collect();
        v.sort_by_key(|(w, _)| (w.len(), w.iter().map(|l| pos[l]).collect::<Vec<_>>()));
        v.into_iter().map(|(w, s)| (Word::new(w.clone()), s.clone())).collect()
    }
}

#[derive(Serialize, Deserialize)]
struct TabulatedFile {
    max_len: usize,
    alphabet: Vec<Vec<i64>>,
    entries: Vec<(Vec<Vec<i64>>, Scalar)>,
}

impl TabulatedMould<Letter> {
    pub fn to_json(&self) -> String {
        let file = TabulatedFile {
            max_len: self.max_len,
            alphabet: self.alphabet.iter().map(|l| l.components().to_vec()).collect(),
            entries: self
                .entries()
                .into_iter()
                .map(|(w, s)| (w.iter().map(|l| l.components().to_vec()).collect(), s))
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: TabulatedFile = serde_json::from_str(text).map_err(|e| Error::Parse {
            what: "tabulated mould",
            input: e.to_string(),
        })?;
        let mut t = TabulatedMould::new(file.alphabet.into_iter().map(Letter::new).collect(), file.max_len);
        for (w, s) in file.entries {
            t.insert(w.into_iter().map(Letter::new).collect(), s)?;
        }
        Ok(t)
    }
}

/// Why a mould failed the alternality test.
#[derive(Clone, Debug, PartialEq)]
pub enum AlternalityViolation<L: Symbol> {
    EmptyWord(Scalar),
    Shuffle {
        left: Word<L>,
        right: Word<L>,
        sum: Scalar,
    },
}

impl<L: Symbol> fmt::Display for AlternalityViolation<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlternalityViolation::EmptyWord(v) => write!(f, "M^∅ = {v} ≠ 0"),
            AlternalityViolation::Shuffle { left, right, sum } => {
                write!(f, "shuffle sum over sh({left}, {right}) = {sum} ≠ 0")
            }
        }
    }
}

/// Checks `M^∅ = 0` and that every shuffle sum of two nonempty words with
/// total length at most `max_total_len` vanishes. Returns the first
/// violation found.
pub fn is_alternal<L: Symbol>(
    m: &Mould<L>,
    alphabet: &[L],
    max_total_len: usize,
) -> Result<Option<AlternalityViolation<L>>> {
    let e = m.eval(&[])?;
    if !e.is_zero() {
        return Ok(Some(AlternalityViolation::EmptyWord(e)));
    }
    let all = words::words_up_to(alphabet, max_total_len.saturating_sub(1));
    for a in all.iter().filter(|a| !a.is_empty()) {
        for b in all.iter().filter(|b| !b.is_empty() && a.len() + b.len() <= max_total_len) {
            let mut sum = Scalar::zero();
            for w in shuffles(a, b) {
                sum += &m.eval(&w)?;
            }
            if !sum.is_zero() {
                return Ok(Some(AlternalityViolation::Shuffle {
                    left: Word::new(a.clone()),
                    right: Word::new(b.clone()),
                    sum,
                }));
            }
        }
    }
    Ok(None)
}

/// Moulds addressable by name from the command line.
#[derive(Clone, Debug, PartialEq)]
pub enum NamedMould {
    Identity,
    Dirac(Letter),
    Linearization,
    Constant(Scalar),
    InvFact,
    Nil,
    Dia,
}

impl NamedMould {
    /// Parses `I`, `Ic`, `La`, `Nil`, `Dia`, `invfact` or `const:<v>`. `Ic`
    /// takes its letter from `c`.
    pub fn parse(name: &str, c: Option<&Letter>) -> Result<Self> {
        let bad = || Error::Parse {
            what: "mould name",
            input: name.to_string(),
        };
        Ok(match name.trim() {
            "I" => NamedMould::Identity,
            "Ic" => NamedMould::Dirac(c.cloned().ok_or_else(bad)?),
            "La" | "Na" => NamedMould::Linearization,
            "invfact" => NamedMould::InvFact,
            "Nil" => NamedMould::Nil,
            "Dia" => NamedMould::Dia,
            other => match other.strip_prefix("const:") {
                Some(v) => NamedMould::Constant(v.parse()?),
                None => return Err(bad()),
            },
        })
    }

    /// The universal rule behind this mould, if it has one.
    pub fn universal(&self) -> Option<UniversalMould> {
        match self {
            NamedMould::Linearization => Some(UniversalMould::linearization()),
            NamedMould::InvFact => Some(UniversalMould::invfact()),
            NamedMould::Nil => Some(crate::nilmould::nil_mould()),
            NamedMould::Dia => Some(crate::nilmould::dia_mould()),
            NamedMould::Identity => Some(UniversalMould::total("I", |x| Ok(indicator(x.len() == 1)))),
            NamedMould::Constant(v) => {
                let v = v.clone();
                Some(UniversalMould::total(format!("const:{v}"), move |_| Ok(v.clone())))
            }
            NamedMould::Dirac(_) => None,
        }
    }

    /// Realizes the mould on letter words; universal moulds need `lam`.
    pub fn on_letters(&self, lam: Option<&Spectrum>) -> Result<Mould<Letter>> {
        match self {
            NamedMould::Identity => Ok(Mould::identity()),
            NamedMould::Dirac(c) => Ok(Mould::dirac(c.clone())),
            NamedMould::Constant(v) => Ok(Mould::constant(v.clone())),
            _ => {
                let u = self.universal().expect("universal rule");
                let lam = lam.ok_or_else(|| Error::MissingSpectrum(u.name().to_string()))?;
                Ok(u.on_letters(lam))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::rng;

    fn s(x: &str) -> Scalar {
        x.parse().unwrap()
    }

    fn ww(x: &str) -> Vec<Scalar> {
        x.parse::<crate::words::WeightWord>().unwrap().into_letters()
    }

    fn l(x: &str) -> Letter {
        x.parse().unwrap()
    }

    #[test]
    fn named_values() {
        let i = Mould::<Letter>::identity();
        assert_eq!(i.eval(&[l("(1,1)")]).unwrap(), Scalar::one());
        assert_eq!(i.eval(&[]).unwrap(), Scalar::zero());
        let c = l("(1,1)");
        let ic = Mould::dirac(c.clone());
        assert_eq!(ic.eval(std::slice::from_ref(&c)).unwrap(), Scalar::one());
        assert_eq!(ic.eval(&[c.clone(), c.clone()]).unwrap(), Scalar::zero());
        assert_eq!(ic.eval(&[c.clone(), l("(2,0)")]).unwrap(), Scalar::zero());
        let la = UniversalMould::linearization();
        assert_eq!(la.eval(&ww("1,1")).unwrap(), s("1/2"));
        assert_eq!(la.eval(&ww("3/4")).unwrap(), s("4/3"));
        assert_eq!(la.eval(&[]).unwrap(), Scalar::one());
        assert!(matches!(la.eval(&ww("0,5")), Err(Error::Singular { .. })));
        assert!(matches!(la.eval(&ww("1,-1,3")), Err(Error::Singular { .. })));
    }

    #[test]
    fn missing_spectrum() {
        assert!(matches!(
            NamedMould::Linearization.on_letters(None),
            Err(Error::MissingSpectrum(_))
        ));
        assert!(NamedMould::parse("Ic", None).is_err());
        assert_eq!(
            NamedMould::parse("const:1/2", None).unwrap(),
            NamedMould::Constant(s("1/2"))
        );
    }

    #[test]
    fn tabulated_length_overflow() {
        let a = vec![l("(1,0)")];
        let t = TabulatedMould::random(&a, 2, &mut rng(1));
        assert!(t.eval(&vec![a[0].clone(); 2]).is_ok());
        assert!(matches!(
            t.eval(&vec![a[0].clone(); 3]),
            Err(Error::LengthOverflow { len: 3, max_len: 2 })
        ));
        assert_eq!(t.eval(&[l("(0,1)")]).unwrap(), Scalar::zero());
    }

    #[test]
    fn dirac_products() {
        let c = s("0");
        let m = s("2");
        let ic = Mould::dirac(c.clone());
        let i = Mould::<Scalar>::identity();
        let left = &ic * &i;
        let right = &i * &ic;
        for w in words::words_up_to(&[c.clone(), m.clone()], 3) {
            let want_l = indicator(w == vec![c.clone(), m.clone()] || w == vec![c.clone(), c.clone()]);
            let want_r = indicator(w == vec![m.clone(), c.clone()] || w == vec![c.clone(), c.clone()]);
            assert_eq!(left.eval(&w).unwrap(), want_l, "{w:?}");
            assert_eq!(right.eval(&w).unwrap(), want_r, "{w:?}");
        }
        assert_eq!((&ic * &i).eval(&[]).unwrap(), Scalar::zero());
    }

    #[test]
    fn linear_identities() {
        let a = vec![l("(1,0)"), l("(0,1)")];
        let m = TabulatedMould::random(&a, 3, &mut rng(2)).to_mould("M");
        let n = TabulatedMould::random(&a, 3, &mut rng(3)).to_mould("N");
        let z = Mould::linear(Scalar::zero(), &m, Scalar::one(), &n);
        assert!(z.equal_up_to(&n, &a, 3).unwrap());
        assert!((&m - &m).equal_up_to(&Mould::zero(), &a, 3).unwrap());
    }

    #[test]
    fn alternality() {
        let a = vec![l("(1,0)"), l("(0,1)"), l("(2,0)")];
        assert_eq!(is_alternal(&Mould::identity(), &a, 4).unwrap(), None);
        let one = Mould::<Letter>::constant(Scalar::one());
        assert_eq!(
            is_alternal(&one, &a, 4).unwrap(),
            Some(AlternalityViolation::EmptyWord(Scalar::one()))
        );
        // Constant 1 off ∅ is not alternal either: sh(x, y) has two words.
        let off_empty = &one - &Mould::unit();
        assert!(matches!(
            is_alternal(&off_empty, &a, 2).unwrap(),
            Some(AlternalityViolation::Shuffle { .. })
        ));
    }

    #[test]
    fn json_round_trip() {
        let a = vec![l("(1,1)"), l("(2,0)")];
        let t = TabulatedMould::random(&a, 2, &mut rng(5));
        let back = TabulatedMould::from_json(&t.to_json()).unwrap();
        assert!(t
            .to_mould("t")
            .equal_up_to(&back.to_mould("b"), &a, 2)
            .unwrap());
        assert_eq!(back.max_len(), 2);
    }
}
