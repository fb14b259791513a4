//! Command-line front end behind the `mould` binary.
//!
//! [`run`] parses arguments and returns the exit code with the text to
//! print, so the whole interface is testable in-process. Exit codes: 0 when
//! every requested check passes, 1 when a check fails, 2 for malformed
//! arguments and 3 for errors raised by the computation itself.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::checks::run_suite;
use crate::error::{Error, Result};
use crate::exactnum::Scalar;
use crate::moulds::NamedMould;
use crate::nilmould::{table, ConsistencyMode, NilSolver};
use crate::variance::{var_c, var_ci, VarianceContext};
use crate::vfield::{
    act, default_perturbation, derivation_terms, dia_part, format_monomial, is_derivation, lie_bracket, nil_part,
    variance_oracle, HomogeneousOp, PreparedVectorField, TruncatedOperator,
};
use crate::words::{Letter, Spectrum, WeightWord, Word};

#[derive(Parser, Debug)]
#[command(name = "mould", version, about = "Exact mould calculus for local vector fields")]
struct Cli {
    /// Output style.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Emit {
    Matrix,
    Field,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Suite {
    Derivation,
    Nabla,
    Alternality,
    Functional,
    Consistency,
}

impl Suite {
    fn name(self) -> &'static str {
        match self {
            Suite::Derivation => "derivation",
            Suite::Nabla => "nabla",
            Suite::Alternality => "alternality",
            Suite::Functional => "functional",
            Suite::Consistency => "consistency",
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Value of Nil on a weight word.
    Nil {
        /// Comma-separated weights, e.g. "0,1,0".
        #[arg(long)]
        weights: WeightWord,
    },
    /// Check the closed-form Nil tables for words of length 1 to 3.
    NilTable {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
        length: u8,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long)]
        seed: u64,
    },
    /// Evaluate Nil on a weight word through each admissible equation.
    NilCheck {
        #[arg(long)]
        weights: WeightWord,
        /// List every route instead of the one the solver uses.
        #[arg(long)]
        all_routes: bool,
    },
    /// Value of Var_c(M) on a letter word.
    Variance {
        /// I, Ic, La, Na, Nil, Dia, invfact or const:<v>.
        #[arg(long)]
        mould: String,
        /// The letter c, e.g. "(0,2)".
        #[arg(long)]
        letter: Letter,
        /// Letter word, e.g. "[(0,2),(1,1)]".
        #[arg(long)]
        word: Word<Letter>,
        /// Comma-separated spectrum, e.g. "1,-1".
        #[arg(long)]
        lambda: Spectrum,
        /// Base alphabet A; defaults to the letters of the word other than c.
        #[arg(long)]
        alphabet: Option<Word<Letter>>,
        /// Only the contribution of this 1-based position.
        #[arg(long)]
        position: Option<usize>,
    },
    /// Operator Σ M^w B_w of a field at a truncation order.
    Act {
        #[arg(long)]
        field: PathBuf,
        #[arg(long)]
        mould: String,
        #[arg(long)]
        order: usize,
        #[arg(long, value_enum, default_value_t = Emit::Matrix)]
        emit: Emit,
    },
    /// Nilpotent and diagonalizable parts of a field and their commutator.
    Decompose {
        #[arg(long)]
        field: PathBuf,
        #[arg(long)]
        order: usize,
    },
    /// Seeded randomized verification suites.
    Check {
        #[arg(value_enum)]
        suite: Suite,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 4)]
        maxlen: usize,
    },
    /// Compare the jet conjugation of a field with the variance formula.
    Oracle {
        #[arg(long)]
        field: PathBuf,
        #[arg(long)]
        letter: Letter,
        /// Must be universal: La, Na, Nil, Dia, I, invfact or const:<v>.
        #[arg(long)]
        mould: String,
        #[arg(long)]
        order: usize,
        /// Coefficients of the perturbation B_c, e.g. "1,2"; defaults to the
        /// field's own B_c, or a_i = i when c is not a letter of the field.
        #[arg(long)]
        coeffs: Option<String>,
    },
}

/// Exit code and text produced by one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String, passed: bool) -> Self {
        Outcome {
            code: if passed { 0 } else { 1 },
            stdout,
            stderr: String::new(),
        }
    }

    fn fail(code: i32, msg: String) -> Self {
        Outcome {
            code,
            stdout: String::new(),
            stderr: msg,
        }
    }
}

/// Runs one command line; `args` starts with the program name.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return Outcome::ok(e.to_string(), true);
            }
            let rendered = e.to_string();
            let line = rendered.lines().next().unwrap_or("error: invalid arguments").trim();
            return Outcome::fail(2, format!("{line}\n"));
        }
    };
    let structured = cli.format == Format::Structured;
    match dispatch(cli.command) {
        Ok(out) => {
            let mut text = if structured {
                serde_json::to_string_pretty(&out.data).expect("serializable")
            } else {
                out.text.trim_end().to_string()
            };
            text.push('\n');
            Outcome::ok(text, out.passed)
        }
        Err(e @ Error::Parse { .. }) => Outcome::fail(2, format!("error: {e}\n")),
        Err(e) => Outcome::fail(3, format!("error: {e}\n")),
    }
}

struct Output {
    text: String,
    data: Value,
    passed: bool,
}

fn load_field(path: &Path) -> Result<PreparedVectorField> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Invalid(format!("cannot read field file {}: {e}", path.display())))?;
    PreparedVectorField::from_json(&text)
}

fn entries_json(p: &TruncatedOperator) -> Value {
    let basis = p.basis();
    Value::Array(
        p.nonzero_entries()
            .into_iter()
            .map(|(row, col, v)| {
                json!({
                    "column": format_monomial(basis.monomial(col)),
                    "row": format_monomial(basis.monomial(row)),
                    "value": v,
                })
            })
            .collect(),
    )
}

fn dispatch(command: Command) -> Result<Output> {
    match command {
        Command::Nil { weights } => {
            let v = NilSolver::default().nil_value(&weights);
            Ok(Output {
                text: v.to_string(),
                data: json!({ "weights": weights, "value": v }),
                passed: true,
            })
        }
        Command::NilTable { length, samples, seed } => {
            let r = table(length as usize, samples, seed)?;
            Ok(Output {
                text: r.to_string(),
                data: serde_json::to_value(&r).expect("serializable"),
                passed: r.passed(),
            })
        }
        Command::NilCheck { weights, all_routes } => {
            let solver = NilSolver::new(ConsistencyMode::CheckAllPositions);
            let r = solver.consistency_check(&weights);
            let conflicts = solver.conflicts();
            let passed = r.agree && conflicts.is_empty();
            let text = if all_routes {
                let mut t = r.to_string();
                if !conflicts.is_empty() {
                    let _ = write!(t, "\nshorter words with disagreeing routes: {}", conflicts.len());
                }
                t
            } else {
                let (route, v) = &r.routes[0];
                format!("{v} (via {route}; routes agree: {})", if passed { "yes" } else { "no" })
            };
            Ok(Output {
                text,
                data: json!({
                    "weights": r.word,
                    "routes": r.routes.iter().map(|(rt, v)| json!({"route": rt.to_string(), "value": v})).collect::<Vec<_>>(),
                    "agree": passed,
                }),
                passed,
            })
        }
        Command::Variance {
            mould,
            letter,
            word,
            lambda,
            alphabet,
            position,
        } => {
            let m = NamedMould::parse(&mould, Some(&letter))?.on_letters(Some(&lambda))?;
            let base: Vec<Letter> = match alphabet {
                Some(a) => a.into_letters(),
                None => {
                    let set: BTreeSet<Letter> = word.iter().filter(|l| **l != letter).cloned().collect();
                    set.into_iter().collect()
                }
            };
            let ctx = VarianceContext::new(letter.clone(), &lambda, base)?;
            let v = match position {
                Some(i) => var_ci(&m, &ctx, &word, i)?,
                None => var_c(&m, &ctx).eval(&word)?,
            };
            Ok(Output {
                text: v.to_string(),
                data: json!({
                    "mould": mould,
                    "letter": letter,
                    "word": word,
                    "c_in_alphabet": ctx.c_in_base(),
                    "position": position,
                    "value": v,
                }),
                passed: true,
            })
        }
        Command::Act {
            field,
            mould,
            order,
            emit,
        } => {
            let x = load_field(&field)?;
            let m = NamedMould::parse(&mould, None)?.on_letters(Some(x.lam()))?;
            let p = act(&m, &x, order)?;
            match emit {
                Emit::Matrix => Ok(Output {
                    text: p.to_string(),
                    data: json!({ "order": order, "mould": mould, "entries": entries_json(&p) }),
                    passed: true,
                }),
                Emit::Field => {
                    let terms = derivation_terms(&p)?;
                    let text = terms
                        .iter()
                        .map(|t| format!("component {}: ({})*{}", t.component, t.coeff, format_monomial(&t.exponents)))
                        .collect::<Vec<_>>()
                        .join("\n");
                    Ok(Output {
                        text: if text.is_empty() { "0".to_string() } else { text },
                        data: json!({ "dim": x.dim(), "lambda": x.lam().values(), "terms": terms }),
                        passed: true,
                    })
                }
            }
        }
        Command::Decompose { field, order } => decompose(&load_field(&field)?, order),
        Command::Check {
            suite,
            seed,
            trials,
            maxlen,
        } => {
            let r = run_suite(suite.name(), seed, trials, maxlen)?;
            Ok(Output {
                text: r.to_string(),
                data: serde_json::to_value(&r).expect("serializable"),
                passed: r.all_passed(),
            })
        }
        Command::Oracle {
            field,
            letter,
            mould,
            order,
            coeffs,
        } => {
            let x = load_field(&field)?;
            let u = NamedMould::parse(&mould, Some(&letter))?
                .universal()
                .ok_or_else(|| Error::Invalid(format!("mould {mould} is not universal")))?;
            let bc = match coeffs {
                Some(text) => {
                    let a = text
                        .split(',')
                        .map(|s| s.trim().parse::<Scalar>())
                        .collect::<Result<Vec<_>>>()?;
                    HomogeneousOp::new(letter.clone(), a)?
                }
                None => default_perturbation(&x, &letter)?,
            };
            let r = variance_oracle(&u, &x, &bc, order)?;
            let text = format!("perturbation {bc}\n{r}");
            Ok(Output {
                text,
                data: json!({
                    "letter": letter,
                    "mould": mould,
                    "order": order,
                    "coeffs": bc.coeffs(),
                    "passed": r.passed(),
                    "mismatches": r.mismatches,
                    "first_mismatch": r.first_mismatch,
                    "nonzero_entries": r.lhs.nonzero_entries().len(),
                }),
                passed: r.passed(),
            })
        }
    }
}

fn decompose(x: &PreparedVectorField, order: usize) -> Result<Output> {
    let nil = nil_part(x, order)?;
    let dia = dia_part(x, order)?;
    let reconstructed = nil.add(&dia)? == x.operator(order);
    let nil_derivation = is_derivation(&nil).is_none();
    let dia_derivation = is_derivation(&dia).is_none();
    let comm = lie_bracket(&dia, &nil)?;
    let basis = comm.basis().clone();
    let mut residual = vec![0usize; order + 1];
    for (_, col, _) in comm.nonzero_entries() {
        let d: u32 = basis.monomial(col).iter().sum();
        residual[d as usize] += 1;
    }
    let passed = reconstructed && nil_derivation && dia_derivation && comm.is_zero();
    let yes = |b: bool| if b { "yes" } else { "no" };
    let mut text = String::new();
    let _ = writeln!(text, "field: {x}");
    let _ = writeln!(text, "nil part:\n{nil}");
    let _ = writeln!(text, "dia part (linear part included):\n{dia}");
    let _ = writeln!(text, "nil + dia = X: {}", yes(reconstructed));
    let _ = writeln!(text, "nil part is a derivation: {}", yes(nil_derivation));
    let _ = writeln!(text, "dia part is a derivation: {}", yes(dia_derivation));
    let _ = writeln!(text, "commutator [dia, nil], nonzero entries by source degree:");
    for (d, r) in residual.iter().enumerate() {
        let _ = writeln!(text, "  degree {d}: {r}");
    }
    let _ = write!(text, "result: {}", if passed { "PASS" } else { "FAIL" });
    Ok(Output {
        text,
        data: json!({
            "order": order,
            "nil": entries_json(&nil),
            "dia": entries_json(&dia),
            "reconstructs": reconstructed,
            "nil_is_derivation": nil_derivation,
            "dia_is_derivation": dia_derivation,
            "commutator_residual_by_degree": residual,
            "passed": passed,
        }),
        passed,
    })
}
