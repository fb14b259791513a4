//! The moulds `Nil•` and `Dia•` of the nilpotent / diagonalizable
//! decomposition, computed on weight words.
//!
//! Initial conditions: `Nil^∅ = 0`, `Nil^(ω) = 1` if `ω = 0` and 0 otherwise,
//! and `Nil^{0^r} = 0` for `r ≥ 2` (alternality of the all-zero shuffles).
//! Every other value follows from
//!
//! * the master formula `|ω|·Nil^ω = Nil^{ω^{>1}} − Nil^{ω^{<r}}` when the
//!   total weight is nonzero, or
//! * the variance equation at a position `i` with `ω_i ≠ 0`:
//!   `ω_i·Nil^ω + [i<r]·Nil^{conf_i ω} − [i>1]·Nil^{conb_i ω}
//!    = [i=1]·Nil^{ω^{>1}} − [i=r]·Nil^{ω^{<r}}`.
//!
//! Both routes only refer to shorter words, so the recursion terminates. The
//! system is overdetermined; [`NilSolver::consistency_check`] evaluates every
//! admissible route and reports whether they agree.

mod table;

pub use table::{table, RowReport, RowStatus, TableReport};

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use serde::Serialize;

use crate::error::Result;
use crate::exactnum::Scalar;
use crate::moulds::{Mould, UniversalMould};
use crate::variance::{compare_on_words, var_c, Counterexample, VarianceContext};
use crate::words::{conb, conf, Letter, Spectrum, WeightWord, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ConsistencyMode {
    /// Resonant words use the smallest position with a nonzero weight.
    #[default]
    FirstAdmissible,
    /// Every freshly computed value is re-derived through all admissible
    /// routes; disagreements are recorded.
    CheckAllPositions,
}

/// One way of evaluating `Nil^ω`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Route {
    /// Fixed initial condition.
    Base,
    /// `|ω|·Nil^ω = Nil^{tail} − Nil^{init}`.
    Master,
    /// Variance equation at this 1-based position.
    Position(usize),
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Route::Base => write!(f, "base"),
            Route::Master => write!(f, "master"),
            Route::Position(i) => write!(f, "position {i}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConsistencyReport {
    pub word: WeightWord,
    pub routes: Vec<(Route, Scalar)>,
    pub agree: bool,
}

impl ConsistencyReport {
    pub fn value(&self) -> &Scalar {
        &self.routes[0].1
    }
}

impl fmt::Display for ConsistencyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "word {}", self.word)?;
        for (route, v) in &self.routes {
            writeln!(f, "  {route}: {v}")?;
        }
        write!(f, "  agree: {}", if self.agree { "yes" } else { "NO" })
    }
}

/// Memoized solver for `Nil•`.
#[derive(Debug, Default)]
pub struct NilSolver {
    mode: ConsistencyMode,
    memo: Mutex<HashMap<Vec<Scalar>, Scalar>>,
    conflicts: Mutex<Vec<ConsistencyReport>>,
}

impl NilSolver {
    pub fn new(mode: ConsistencyMode) -> Self {
        NilSolver {
            mode,
            ..Default::default()
        }
    }

    pub fn mode(&self) -> ConsistencyMode {
        self.mode
    }

    fn base_value(w: &[Scalar]) -> Option<Scalar> {
        match w {
            [] => Some(Scalar::zero()),
            [x] if x.is_zero() => Some(Scalar::one()),
            [_] => Some(Scalar::zero()),
            _ if w.iter().all(Scalar::is_zero) => Some(Scalar::zero()),
            _ => None,
        }
    }

    pub fn nil_value(&self, w: &[Scalar]) -> Scalar {
        if let Some(v) = Self::base_value(w) {
            return v;
        }
        if let Some(v) = self.memo.lock().expect("memo lock").get(w) {
            return v.clone();
        }
        let v = match self.mode {
            ConsistencyMode::FirstAdmissible => self.first_route(w),
            ConsistencyMode::CheckAllPositions => {
                let report = self.consistency_check(w);
                if !report.agree {
                    self.conflicts.lock().expect("conflict lock").push(report.clone());
                }
                report.value().clone()
            }
        };
        self.memo
            .lock()
            .expect("memo lock")
            .entry(w.to_vec())
            .or_insert(v)
            .clone()
    }

    /// `Dia^ω = I^ω − Nil^ω`.
    pub fn dia_value(&self, w: &[Scalar]) -> Scalar {
        let i = if w.len() == 1 { Scalar::one() } else { Scalar::zero() };
        &i - &self.nil_value(w)
    }

    fn first_route(&self, w: &[Scalar]) -> Scalar {
        let total: Scalar = w.iter().sum();
        if !total.is_zero() {
            return self.master(w, &total);
        }
        let i = w.iter().position(|x| !x.is_zero()).expect("not all zero") + 1;
        self.position(w, i)
    }

    fn master(&self, w: &[Scalar], total: &Scalar) -> Scalar {
        let diff = &self.nil_value(&w[1..]) - &self.nil_value(&w[..w.len() - 1]);
        diff.checked_div(total).expect("nonzero total weight")
    }

    fn position(&self, w: &[Scalar], i: usize) -> Scalar {
        let r = w.len();
        let mut rhs = Scalar::zero();
        if i == 1 {
            rhs += &self.nil_value(&w[1..]);
        }
        if i == r {
            rhs -= &self.nil_value(&w[..r - 1]);
        }
        if i < r {
            rhs -= &self.nil_value(&conf(i, w).expect("i < r"));
        }
        if i > 1 {
            rhs += &self.nil_value(&conb(i, w).expect("i > 1"));
        }
        rhs.checked_div(&w[i - 1]).expect("nonzero weight at the chosen position")
    }

    /// Evaluates `Nil^ω` through every admissible equation.
    pub fn consistency_check(&self, w: &[Scalar]) -> ConsistencyReport {
        let word = Word::new(w.to_vec());
        if let Some(v) = Self::base_value(w) {
            return ConsistencyReport {
                word,
                routes: vec![(Route::Base, v)],
                agree: true,
            };
        }
        let mut routes = Vec::new();
        let total: Scalar = w.iter().sum();
        if !total.is_zero() {
            routes.push((Route::Master, self.master(w, &total)));
        }
        for (k, x) in w.iter().enumerate() {
            if !x.is_zero() {
                routes.push((Route::Position(k + 1), self.position(w, k + 1)));
            }
        }
        let agree = routes.windows(2).all(|p| p[0].1 == p[1].1);
        ConsistencyReport { word, routes, agree }
    }

    /// Route disagreements recorded in [`ConsistencyMode::CheckAllPositions`].
    pub fn conflicts(&self) -> Vec<ConsistencyReport> {
        self.conflicts.lock().expect("conflict lock").clone()
    }
}

fn shared_solver() -> Arc<NilSolver> {
    static SOLVER: OnceLock<Arc<NilSolver>> = OnceLock::new();
    SOLVER.get_or_init(|| Arc::new(NilSolver::default())).clone()
}

/// `Nil•` as a universal mould, backed by a process-wide memo.
pub fn nil_mould() -> UniversalMould {
    nil_mould_with(shared_solver())
}

pub fn nil_mould_with(solver: Arc<NilSolver>) -> UniversalMould {
    UniversalMould::total("Nil", move |w| Ok(solver.nil_value(w)))
}

/// `Dia• = I• − Nil•` as a universal mould.
pub fn dia_mould() -> UniversalMould {
    let solver = shared_solver();
    UniversalMould::total("Dia", move |w| Ok(solver.dia_value(w)))
}

/// Outcome of [`functional_equation_check`].
#[derive(Clone, Debug, PartialEq)]
pub struct FunctionalReport {
    pub nil: Option<Counterexample<Letter>>,
    /// Checked only when `ω(c) = 0`.
    pub dia: Option<Option<Counterexample<Letter>>>,
}

impl FunctionalReport {
    pub fn passed(&self) -> bool {
        self.nil.is_none() && !matches!(self.dia, Some(Some(_)))
    }
}

/// Checks `Var_c(Nil) = I_c × Nil − Nil × I_c` on every word over
/// `A_c = A ∪ {c}` up to `max_len`, and the same identity for `Dia` when `c`
/// is resonant.
///
/// `Var_c` is taken as an operator on moulds over `A_c`, so a repeated `c`
/// contributes at each occurrence.
pub fn functional_equation_check(
    alphabet: &[Letter],
    lam: &Spectrum,
    c: &Letter,
    max_len: usize,
) -> Result<FunctionalReport> {
    c.check_prepared()?;
    let ctx = VarianceContext::new(c.clone(), lam, alphabet.iter().cloned())?.on_extended();
    let ic = Mould::dirac(c.clone());
    let check = |m: &Mould<Letter>| {
        let lhs = var_c(m, &ctx);
        let rhs = &(&ic * m) - &(m * &ic);
        compare_on_words(&lhs, &rhs, ctx.extended_alphabet(), max_len)
    };
    let nil = check(&nil_mould().on_letters(lam))?;
    let dia = if ctx.omega_c().is_zero() {
        Some(check(&dia_mould().on_letters(lam))?)
    } else {
        None
    };
    Ok(FunctionalReport { nil, dia })
}
