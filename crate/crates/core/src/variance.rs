//! Variance operators on moulds.
//!
//! `Var_{c,i}(M)^n` is 0 unless `n_i = c`, and otherwise
//! `ω(c)·M^n + M^{conf_i(n)} − M^{conb_i(n)}`, where a contraction that would
//! need a missing neighbour is dropped (no `conf` term at the last position,
//! no `conb` term at the first). `Var_c` sums the positions.
//!
//! When `c` is not in the base alphabet, words containing `c` at least twice
//! are sent to 0: in the ε-expansion such words only appear at order `ε²`.
//! When `c` belongs to the base alphabet every occurrence contributes.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exactnum::Scalar;
use crate::moulds::Mould;
use crate::words::{self, conb, conf, weight, Letter, Spectrum, Symbol, Word};

/// The letter `c`, its weight, and the alphabets `A` and `A_c = A ∪ {c}`.
#[derive(Clone, Debug)]
pub struct VarianceContext<L: Symbol> {
    c: L,
    omega_c: Scalar,
    base: Vec<L>,
    extended: Vec<L>,
    c_in_base: bool,
}

impl<L: Symbol> VarianceContext<L> {
    fn build(c: L, omega_c: Scalar, base: Vec<L>) -> Self {
        let mut seen = HashSet::new();
        let base: Vec<L> = base.into_iter().filter(|l| seen.insert(l.clone())).collect();
        let c_in_base = base.contains(&c);
        let mut extended = base.clone();
        if !c_in_base {
            extended.push(c.clone());
        }
        VarianceContext {
            c,
            omega_c,
            base,
            extended,
            c_in_base,
        }
    }

    pub fn letter(&self) -> &L {
        &self.c
    }

    pub fn omega_c(&self) -> &Scalar {
        &self.omega_c
    }

    pub fn base_alphabet(&self) -> &[L] {
        &self.base
    }

    /// `A_c`, the index alphabet of every `Var_c` output.
    pub fn extended_alphabet(&self) -> &[L] {
        &self.extended
    }

    pub fn c_in_base(&self) -> bool {
        self.c_in_base
    }

    /// The same letter, seen as an operator on moulds over `A_c` (so `c` is
    /// part of the alphabet and every occurrence contributes).
    pub fn on_extended(&self) -> Self {
        VarianceContext::build(self.c.clone(), self.omega_c.clone(), self.extended.clone())
    }
}

impl VarianceContext<Letter> {
    pub fn new(c: Letter, lam: &Spectrum, base: impl IntoIterator<Item = Letter>) -> Result<Self> {
        let omega_c = weight(&c, lam)?;
        let base: Vec<Letter> = base.into_iter().collect();
        for l in &base {
            if l.dim() != lam.dim() {
                return Err(Error::DimensionMismatch {
                    expected: lam.dim(),
                    found: l.dim(),
                });
            }
        }
        Ok(VarianceContext::build(c, omega_c, base))
    }
}

impl VarianceContext<Scalar> {
    /// Weight-word mode: the letter is a weight and is its own `ω`.
    pub fn for_weight(c: Scalar, base: impl IntoIterator<Item = Scalar>) -> Self {
        VarianceContext::build(c.clone(), c, base.into_iter().collect())
    }
}

fn repeated_outside_base<L: Symbol>(ctx: &VarianceContext<L>, w: &[L]) -> bool {
    !ctx.c_in_base && w.iter().filter(|l| **l == ctx.c).count() >= 2
}

/// `Var_{c,i}(M)^w` for `1 ≤ i ≤ l(w)`.
pub fn var_ci<L: Symbol>(m: &Mould<L>, ctx: &VarianceContext<L>, w: &[L], i: usize) -> Result<Scalar> {
    if i == 0 || i > w.len() {
        return Err(Error::PositionOutOfRange {
            op: "var_ci",
            pos: i,
            len: w.len(),
        });
    }
    if w[i - 1] != ctx.c || repeated_outside_base(ctx, w) {
        return Ok(Scalar::zero());
    }
    let mut v = &ctx.omega_c * &m.eval(w)?;
    if i < w.len() {
        v += &m.eval(&conf(i, w)?)?;
    }
    if i > 1 {
        v -= &m.eval(&conb(i, w)?)?;
    }
    Ok(v)
}

/// `Var_c(M)`, evaluated lazily.
pub fn var_c<L: Symbol>(m: &Mould<L>, ctx: &VarianceContext<L>) -> Mould<L> {
    let (m, ctx) = (m.clone(), ctx.clone());
    Mould::from_fn(format!("Var_{}({})", ctx.c, m.name()), move |w| {
        let mut acc = Scalar::zero();
        for i in 1..=w.len() {
            acc += &var_ci(&m, &ctx, w, i)?;
        }
        Ok(acc)
    })
}

/// `∇(M)^n = ω(n)·M^n` where `ω(n)` is the total weight; `omega` gives the
/// weight of one letter.
pub fn nabla<L: Symbol>(
    m: &Mould<L>,
    omega: impl Fn(&L) -> Result<Scalar> + Send + Sync + 'static,
) -> Mould<L> {
    let m = m.clone();
    Mould::from_fn(format!("∇({})", m.name()), move |w| {
        let mut total = Scalar::zero();
        for l in w {
            total += &omega(l)?;
        }
        if total.is_zero() {
            return Ok(Scalar::zero());
        }
        Ok(&total * &m.eval(w)?)
    })
}

pub fn nabla_letters(m: &Mould<Letter>, lam: &Spectrum) -> Mould<Letter> {
    let lam = lam.clone();
    nabla(m, move |l| weight(l, &lam))
}

pub fn nabla_weights(m: &Mould<Scalar>) -> Mould<Scalar> {
    nabla(m, |x| Ok(x.clone()))
}

/// A word where an operator identity failed, with both sides.
#[derive(Clone, Debug, PartialEq)]
pub struct Counterexample<L: Symbol> {
    pub word: Word<L>,
    pub lhs: Scalar,
    pub rhs: Scalar,
}

impl<L: Symbol> fmt::Display for Counterexample<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at {}: lhs = {}, rhs = {}", self.word, self.lhs, self.rhs)
    }
}

pub(crate) fn compare_on_words<L: Symbol>(
    lhs: &Mould<L>,
    rhs: &Mould<L>,
    alphabet: &[L],
    max_len: usize,
) -> Result<Option<Counterexample<L>>> {
    Ok(lhs
        .first_difference(rhs, alphabet, max_len)?
        .map(|(word, lhs, rhs)| Counterexample { word, lhs, rhs }))
}

/// A mould operator, such as `M ↦ Var_c(M)`.
pub type MouldOp<L> = Arc<dyn Fn(&Mould<L>) -> Mould<L> + Send + Sync>;

/// Checks `D(M×N) = D(M)×N + M×D(N)` on every word over `alphabet` up to
/// `max_len`.
pub fn check_derivation<L: Symbol>(
    op: &dyn Fn(&Mould<L>) -> Mould<L>,
    m: &Mould<L>,
    n: &Mould<L>,
    alphabet: &[L],
    max_len: usize,
) -> Result<Option<Counterexample<L>>> {
    let lhs = op(&(m * n));
    let rhs = &(&op(m) * n) + &(m * &op(n));
    compare_on_words(&lhs, &rhs, alphabet, max_len)
}

/// Checks `Σ_{a∈A} Var_a(M) = ∇(M)` on every word over `alphabet` up to
/// `max_len`, each `Var_a` taken with base alphabet `A`.
pub fn check_nabla_decomposition(
    m: &Mould<Letter>,
    alphabet: &[Letter],
    lam: &Spectrum,
    max_len: usize,
) -> Result<Option<Counterexample<Letter>>> {
    let ctxs = alphabet
        .iter()
        .map(|a| VarianceContext::new(a.clone(), lam, alphabet.iter().cloned()))
        .collect::<Result<Vec<_>>>()?;
    let vars: Vec<Mould<Letter>> = ctxs.iter().map(|ctx| var_c(m, ctx)).collect();
    let sum = Mould::from_fn("ΣVar_a", move |w| {
        let mut acc = Scalar::zero();
        for v in &vars {
            acc += &v.eval(w)?;
        }
        Ok(acc)
    });
    compare_on_words(&sum, &nabla_letters(m, lam), alphabet, max_len)
}

/// Every word over the context's extended alphabet up to `max_len`.
pub fn extended_words<L: Symbol>(ctx: &VarianceContext<L>, max_len: usize) -> Vec<Vec<L>> {
    words::words_up_to(ctx.extended_alphabet(), max_len)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moulds::{TabulatedMould, UniversalMould};
    use crate::random::rng;

    fn l(x: &str) -> Letter {
        x.parse().unwrap()
    }

    fn setup() -> (Spectrum, Letter, Letter, VarianceContext<Letter>) {
        let lam = Spectrum::from_ints(&[1, -1]);
        let c = l("(0,2)");
        let m = l("(2,0)");
        let ctx = VarianceContext::new(c.clone(), &lam, [m.clone()]).unwrap();
        (lam, c, m, ctx)
    }

    #[test]
    fn identity_mould_cases() {
        let (_, c, m, ctx) = setup();
        let i = Mould::<Letter>::identity();
        assert_eq!(var_ci(&i, &ctx, std::slice::from_ref(&c), 1).unwrap(), Scalar::from(-2));
        assert_eq!(var_ci(&i, &ctx, &[c.clone(), m.clone()], 1).unwrap(), Scalar::one());
        assert_eq!(var_ci(&i, &ctx, &[m.clone(), c.clone()], 2).unwrap(), -Scalar::one());
        assert_eq!(var_ci(&i, &ctx, &[m.clone(), c.clone()], 1).unwrap(), Scalar::zero());
        assert!(var_ci(&i, &ctx, std::slice::from_ref(&m), 2).is_err());
    }

    #[test]
    fn identity_variance_table() {
        let (_, c, _, ctx) = setup();
        let v = var_c(&Mould::identity(), &ctx);
        for w in extended_words(&ctx, 3) {
            let want = if w == vec![c.clone()] {
                ctx.omega_c().clone()
            } else if w.len() == 2 && w[0] == c && w[1] != c {
                Scalar::one()
            } else if w.len() == 2 && w[1] == c && w[0] != c {
                -Scalar::one()
            } else {
                Scalar::zero()
            };
            assert_eq!(v.eval(&w).unwrap(), want, "{w:?}");
        }
    }

    #[test]
    fn locality_and_repeated_letter() {
        let (_, c, m, ctx) = setup();
        let mm = TabulatedMould::random(ctx.extended_alphabet(), 4, &mut rng(9)).to_mould("M");
        let v = var_c(&mm, &ctx);
        for w in extended_words(&ctx, 4) {
            if !w.contains(&c) {
                assert_eq!(v.eval(&w).unwrap(), Scalar::zero());
            }
        }
        assert_eq!(v.eval(&[c.clone(), c.clone()]).unwrap(), Scalar::zero());
        assert_eq!(v.eval(&[c.clone(), m.clone(), c.clone()]).unwrap(), Scalar::zero());
        // Over A_c the occurrences add up instead.
        let v_ext = var_c(&mm, &ctx.on_extended());
        let w = [c.clone(), m.clone(), c.clone()];
        let by_hand = &var_ci(&mm, &ctx.on_extended(), &w, 1).unwrap()
            + &var_ci(&mm, &ctx.on_extended(), &w, 3).unwrap();
        assert_eq!(v_ext.eval(&w).unwrap(), by_hand);
    }

    #[test]
    fn nabla_cases() {
        let lam = Spectrum::from_ints(&[1, -1]);
        let n = l("(2,0)");
        let i = Mould::<Letter>::identity();
        assert_eq!(nabla_letters(&i, &lam).eval(std::slice::from_ref(&n)).unwrap(), Scalar::from(2));
        let res = l("(1,1)");
        let m = Mould::<Letter>::constant(Scalar::from(7));
        assert_eq!(nabla_letters(&m, &lam).eval(&[res.clone(), res]).unwrap(), Scalar::zero());
    }

    #[test]
    fn derivation_negative_control() {
        let (_, _, _, ctx) = setup();
        let a = ctx.extended_alphabet().to_vec();
        let m = TabulatedMould::random(&a, 3, &mut rng(1)).to_mould("M");
        let n = TabulatedMould::random(&a, 3, &mut rng(2)).to_mould("N");
        let square = |x: &Mould<Letter>| {
            let x = x.clone();
            Mould::from_fn("sq", move |w| {
                let v = x.eval(w)?;
                Ok(&v * &v)
            })
        };
        assert!(check_derivation(&square, &m, &n, &a, 3).unwrap().is_some());
        let ext = ctx.on_extended();
        let var = |x: &Mould<Letter>| var_c(x, &ext);
        assert_eq!(check_derivation(&var, &m, &n, &a, 3).unwrap(), None);
    }

    #[test]
    fn repeated_letter_rule_needs_moulds_on_the_base_alphabet() {
        let (_, _, m, ctx) = setup();
        let var = |x: &Mould<Letter>| var_c(x, &ctx);
        let base = [m];
        let mb = TabulatedMould::random(&base, 4, &mut rng(3)).to_mould("M");
        let nb = TabulatedMould::random(&base, 4, &mut rng(4)).to_mould("N");
        assert_eq!(check_derivation(&var, &mb, &nb, ctx.extended_alphabet(), 4).unwrap(), None);
        // Moulds that do not vanish on words containing c break the rule.
        let a = ctx.extended_alphabet().to_vec();
        let me = TabulatedMould::random(&a, 4, &mut rng(5)).to_mould("M");
        let ne = TabulatedMould::random(&a, 4, &mut rng(6)).to_mould("N");
        let ce = check_derivation(&var, &me, &ne, &a, 4).unwrap().expect("Leibniz fails");
        assert!(ce.word.iter().filter(|l| **l == *ctx.letter()).count() >= 2);
    }

    #[test]
    fn nabla_decomposition_length_one_and_la() {
        let lam = Spectrum::from_ints(&[1, -2]);
        let a = vec![l("(1,0)"), l("(2,0)")];
        let la = UniversalMould::linearization().on_letters(&lam);
        assert_eq!(check_nabla_decomposition(&la, &a, &lam, 3).unwrap(), None);
    }
}
