//! Seeded randomized suites for the mould identities.
//!
//! Each suite draws its own configurations from a seed, so a run is
//! reproducible from `(seed, trials, max_len)` alone.

use std::fmt;

use rand::Rng;
use serde::Serialize;

use crate::error::Result;
use crate::exactnum::Scalar;
use crate::moulds::{is_alternal, TabulatedMould};
use crate::nilmould::{functional_equation_check, nil_mould, NilSolver};
use crate::random::{self, nonzero_scalar, CheckRng};
use crate::variance::{check_derivation, check_nabla_decomposition, var_c, VarianceContext};
use crate::words::{weight, Letter, Spectrum};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub trials: usize,
    pub max_len: usize,
    pub passed: usize,
    /// Description of the first failing trial.
    pub first_failure: Option<String>,
    /// Per-suite counts worth reporting, such as how many trials had `c ∈ A`.
    pub notes: Vec<String>,
}

impl SuiteReport {
    fn new(suite: &str, seed: u64, trials: usize, max_len: usize) -> Self {
        SuiteReport {
            suite: suite.to_string(),
            seed,
            trials,
            max_len,
            passed: 0,
            first_failure: None,
            notes: Vec::new(),
        }
    }

    fn record(&mut self, failure: Option<String>) {
        match failure {
            None => self.passed += 1,
            Some(f) => {
                self.first_failure.get_or_insert(f);
            }
        }
    }

    pub fn all_passed(&self) -> bool {
        self.passed == self.trials
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} ({}/{} trials, seed {}, max length {})",
            self.suite,
            if self.all_passed() { "PASS" } else { "FAIL" },
            self.passed,
            self.trials,
            self.seed,
            self.max_len
        )?;
        for n in &self.notes {
            write!(f, "\n  {n}")?;
        }
        if let Some(fail) = &self.first_failure {
            write!(f, "\n  first failure: {fail}")?;
        }
        Ok(())
    }
}

fn gaussian_spectrum(rng: &mut CheckRng, dim: usize) -> Spectrum {
    Spectrum::new((0..dim).map(|_| nonzero_scalar(rng)).collect()).expect("dim ≥ 1")
}

fn letter_outside(rng: &mut CheckRng, alphabet: &[Letter]) -> Letter {
    loop {
        let c = random::prepared_letter(rng, alphabet[0].dim());
        if !alphabet.contains(&c) {
            return c;
        }
    }
}

fn show(alphabet: &[Letter]) -> String {
    let v: Vec<String> = alphabet.iter().map(|l| l.to_string()).collect();
    format!("{{{}}}", v.join(", "))
}

/// Leibniz rule for `Var_c` on random tabulated moulds.
///
/// Trials cycle through three set-ups over a random alphabet `A` of one to
/// three letters: `c ∈ A`; `c ∉ A` with moulds on `A` (so words with two
/// `c`s fall under the repeated-letter rule); and `c ∉ A` with moulds on
/// `A ∪ {c}`, where `Var_c` acts on the extended alphabet.
pub fn derivation_suite(seed: u64, trials: usize, max_len: usize) -> Result<SuiteReport> {
    let mut rng = random::rng(seed);
    let mut report = SuiteReport::new("derivation", seed, trials, max_len);
    let mut kinds = [0usize; 3];
    for t in 0..trials {
        let lam = gaussian_spectrum(&mut rng, 2);
        let size = rng.gen_range(1..=3);
        let a = random::alphabet(&mut rng, 2, size);
        let kind = t % 3;
        kinds[kind] += 1;
        let c = if kind == 0 {
            random::pick(&mut rng, &a).clone()
        } else {
            letter_outside(&mut rng, &a)
        };
        let mut ctx = VarianceContext::new(c.clone(), &lam, a.iter().cloned())?;
        let support = if kind == 2 {
            ctx = ctx.on_extended();
            ctx.extended_alphabet().to_vec()
        } else {
            a.clone()
        };
        let m = TabulatedMould::random(&support, max_len, &mut rng).to_mould("M");
        let n = TabulatedMould::random(&support, max_len, &mut rng).to_mould("N");
        let op = |x: &crate::moulds::Mould<Letter>| var_c(x, &ctx);
        let res = check_derivation(&op, &m, &n, ctx.extended_alphabet(), max_len)?;
        report.record(res.map(|ce| format!("λ = ({lam}), A = {}, c = {c}: {ce}", show(&a))));
    }
    report.notes.push(format!(
        "c in A: {}, c outside A (moulds on A): {}, c outside A (moulds on A ∪ {{c}}): {}",
        kinds[0], kinds[1], kinds[2]
    ));
    Ok(report)
}

/// `Σ_{a∈A} Var_a = ∇` on random tabulated moulds over alphabets of one to
/// three letters.
pub fn nabla_suite(seed: u64, trials: usize, max_len: usize) -> Result<SuiteReport> {
    let mut rng = random::rng(seed);
    let mut report = SuiteReport::new("nabla", seed, trials, max_len);
    for _ in 0..trials {
        let lam = gaussian_spectrum(&mut rng, 2);
        let size = rng.gen_range(1..=3);
        let a = random::alphabet(&mut rng, 2, size);
        let m = TabulatedMould::random(&a, max_len, &mut rng).to_mould("M");
        let res = check_nabla_decomposition(&m, &a, &lam, max_len)?;
        report.record(res.map(|ce| format!("λ = ({lam}), A = {}: {ce}", show(&a))));
    }
    Ok(report)
}

/// Alternality of `Nil` on two-letter alphabets with random integer spectra,
/// so that resonances are frequent.
pub fn alternality_suite(seed: u64, trials: usize, max_len: usize) -> Result<SuiteReport> {
    let mut rng = random::rng(seed);
    let mut report = SuiteReport::new("alternality", seed, trials, max_len);
    let mut resonant = 0;
    for _ in 0..trials {
        let lam = random::int_spectrum(&mut rng, 2);
        let a = random::alphabet(&mut rng, 2, 2);
        if a.iter().any(|l| weight(l, &lam).map(|w| w.is_zero()).unwrap_or(false)) {
            resonant += 1;
        }
        let res = is_alternal(&nil_mould().on_letters(&lam), &a, max_len)?;
        report.record(res.map(|v| format!("λ = ({lam}), A = {}: {v}", show(&a))));
    }
    report.notes.push(format!("alphabets with a resonant letter: {resonant}"));
    Ok(report)
}

/// The `Nil` functional equation (and the `Dia` one for resonant `c`) on
/// random configurations. Odd trials pick a resonant `c` when one exists.
pub fn functional_suite(seed: u64, trials: usize, max_len: usize) -> Result<SuiteReport> {
    let mut rng = random::rng(seed);
    let mut report = SuiteReport::new("functional", seed, trials, max_len);
    let mut resonant_c = 0;
    for t in 0..trials {
        let lam = random::int_spectrum(&mut rng, 2);
        let size = rng.gen_range(1..=2);
        let a = random::alphabet(&mut rng, 2, size);
        let mut c = random::prepared_letter(&mut rng, 2);
        if t % 2 == 1 {
            for _ in 0..200 {
                let cand = random::prepared_letter(&mut rng, 2);
                if weight(&cand, &lam)?.is_zero() {
                    c = cand;
                    break;
                }
            }
        }
        if weight(&c, &lam)?.is_zero() {
            resonant_c += 1;
        }
        let r = functional_equation_check(&a, &lam, &c, max_len)?;
        let failure = if r.passed() {
            None
        } else {
            let ce = r.nil.or(r.dia.flatten()).expect("a failing side");
            Some(format!("λ = ({lam}), A = {}, c = {c}: {ce}", show(&a)))
        };
        report.record(failure);
    }
    report.notes.push(format!("resonant c: {resonant_c}, non-resonant c: {}", trials - resonant_c));
    Ok(report)
}

/// Route agreement of the `Nil` recursion on random weight words.
///
/// Entries come from a small pool `{0, ±a, ±b, ±(a+b)}` so that many words
/// are resonant and have several admissible routes.
pub fn consistency_suite(seed: u64, trials: usize, max_len: usize) -> Result<SuiteReport> {
    let mut rng = random::rng(seed);
    let mut report = SuiteReport::new("consistency", seed, trials, max_len);
    let solver = NilSolver::default();
    let mut multi = 0;
    let mut resonant = 0;
    for _ in 0..trials {
        let a = nonzero_scalar(&mut rng);
        let b = nonzero_scalar(&mut rng);
        let ab = &a + &b;
        let pool = [Scalar::zero(), a.clone(), -&a, b.clone(), -&b, ab.clone(), -&ab];
        let len = rng.gen_range(1..=max_len.max(1));
        let w: Vec<Scalar> = (0..len).map(|_| random::pick(&mut rng, &pool).clone()).collect();
        if w.iter().sum::<Scalar>().is_zero() {
            resonant += 1;
        }
        let r = solver.consistency_check(&w);
        if r.routes.len() > 1 {
            multi += 1;
        }
        report.record((!r.agree).then(|| r.to_string()));
    }
    report.notes.push(format!(
        "resonant words: {resonant}, words with at least two routes: {multi}"
    ));
    Ok(report)
}

/// Names accepted by [`run_suite`].
pub const SUITES: [&str; 5] = ["derivation", "nabla", "alternality", "functional", "consistency"];

pub fn run_suite(name: &str, seed: u64, trials: usize, max_len: usize) -> Result<SuiteReport> {
    match name {
        "derivation" => derivation_suite(seed, trials, max_len),
        "nabla" => nabla_suite(seed, trials, max_len),
        "alternality" => alternality_suite(seed, trials, max_len),
        "functional" => functional_suite(seed, trials, max_len),
        "consistency" => consistency_suite(seed, trials, max_len),
        other => Err(crate::error::Error::Invalid(format!("unknown suite {other}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_runs_pass() {
        for name in SUITES {
            let r = run_suite(name, 5, 6, 3).unwrap();
            assert!(r.all_passed(), "{r}");
        }
    }

    #[test]
    fn deterministic() {
        assert_eq!(derivation_suite(9, 4, 3).unwrap(), derivation_suite(9, 4, 3).unwrap());
    }
}
