//! Closed-form tables of `Nil•` for words of length 1 to 3, checked
//! against the solver on random instantiations.
//!
//! Each row is characterised by which nonempty subsets of its weights sum to
//! zero. Samples are redrawn until they realise exactly that pattern, so
//! degenerate instances such as `(t, t, −t)` never stand in for a generic row.

use std::fmt;

use serde::Serialize;

use super::NilSolver;
use crate::error::{Error, Result};
use crate::exactnum::Scalar;
use crate::random::{nonzero_scalar, rng};
use crate::words::WeightWord;

type Build = fn(&[Scalar; 3]) -> Vec<Scalar>;
type Closed = fn(&[Scalar; 3]) -> Scalar;

struct Row {
    pattern: &'static str,
    formula: &'static str,
    build: Build,
    closed: Closed,
    zero_subsets: &'static [u8],
    kind: RowKind,
}

enum RowKind {
    Plain,
    /// The tabulated value is wrong; the solver is expected to return `value`.
    Discrepancy { formula: &'static str, value: Closed },
    /// A competing closed form that must be rejected by the solver.
    RejectedAlternative { formula: &'static str, value: Closed },
}

fn inv(x: &Scalar) -> Scalar {
    x.inv().expect("sample weights are nonzero")
}

fn z() -> Scalar {
    Scalar::zero()
}

fn two() -> Scalar {
    Scalar::from(2)
}

fn rows(length: usize) -> Vec<Row> {
    use RowKind::*;
    match length {
        1 => vec![
            Row {
                pattern: "(ω), ω≠0",
                formula: "0",
                build: |s| vec![s[0].clone()],
                closed: |_| z(),
                zero_subsets: &[],
                kind: Plain,
            },
            Row {
                pattern: "(0)",
                formula: "1",
                build: |_| vec![z()],
                closed: |_| Scalar::one(),
                zero_subsets: &[0b1],
                kind: Plain,
            },
        ],
        2 => vec![
            Row {
                pattern: "(ω₁,ω₂) generic",
                formula: "0",
                build: |s| vec![s[0].clone(), s[1].clone()],
                closed: |_| z(),
                zero_subsets: &[],
                kind: Plain,
            },
            Row {
                pattern: "(0,ω)",
                formula: "−ω⁻¹",
                build: |s| vec![z(), s[0].clone()],
                closed: |s| -inv(&s[0]),
                zero_subsets: &[0b01],
                kind: Plain,
            },
            Row {
                pattern: "(ω,0)",
                formula: "ω⁻¹",
                build: |s| vec![s[0].clone(), z()],
                closed: |s| inv(&s[0]),
                zero_subsets: &[0b10],
                kind: Plain,
            },
            Row {
                pattern: "(0,0)",
                formula: "0",
                build: |_| vec![z(), z()],
                closed: |_| z(),
                zero_subsets: &[0b01, 0b10, 0b11],
                kind: Plain,
            },
            Row {
                pattern: "(ω,−ω)",
                formula: "−ω⁻¹",
                build: |s| vec![s[0].clone(), -&s[0]],
                closed: |s| -inv(&s[0]),
                zero_subsets: &[0b11],
                kind: Plain,
            },
        ],
        3 => vec![
            Row {
                pattern: "(ω₁,ω₂,ω₃) generic",
                formula: "0",
                build: |s| s.to_vec(),
                closed: |_| z(),
                zero_subsets: &[],
                kind: Plain,
            },
            Row {
                pattern: "(ω,ω̃,−ω̃)",
                formula: "−ω⁻¹ω̃⁻¹",
                build: |s| vec![s[0].clone(), s[1].clone(), -&s[1]],
                closed: |s| -(&inv(&s[0]) * &inv(&s[1])),
                zero_subsets: &[0b110],
                kind: Plain,
            },
            Row {
                pattern: "(ω̃,ω,−ω̃)",
                formula: "0",
                build: |s| vec![s[1].clone(), s[0].clone(), -&s[1]],
                closed: |_| z(),
                zero_subsets: &[0b101],
                kind: Plain,
            },
            Row {
                pattern: "(ω,−ω,ω̃)",
                formula: "ω⁻¹ω̃⁻¹",
                build: |s| vec![s[0].clone(), -&s[0], s[1].clone()],
                closed: |s| &inv(&s[0]) * &inv(&s[1]),
                zero_subsets: &[0b011],
                kind: Plain,
            },
            Row {
                pattern: "(0,ω,ω̃)",
                formula: "ω⁻¹(ω+ω̃)⁻¹",
                build: |s| vec![z(), s[0].clone(), s[1].clone()],
                closed: |s| &inv(&s[0]) * &inv(&(&s[0] + &s[1])),
                zero_subsets: &[0b001],
                kind: Plain,
            },
            Row {
                pattern: "(ω,0,ω̃)",
                formula: "−ω⁻¹ω̃⁻¹",
                build: |s| vec![s[0].clone(), z(), s[1].clone()],
                closed: |s| -(&inv(&s[0]) * &inv(&s[1])),
                zero_subsets: &[0b010],
                kind: RejectedAlternative {
                    formula: "−2ω⁻¹ω̃⁻¹",
                    value: |s| -(&two() * &(&inv(&s[0]) * &inv(&s[1]))),
                },
            },
            Row {
                pattern: "(ω,ω̃,0)",
                formula: "ω̃⁻¹(ω+ω̃)⁻¹",
                build: |s| vec![s[0].clone(), s[1].clone(), z()],
                closed: |s| &inv(&s[1]) * &inv(&(&s[0] + &s[1])),
                zero_subsets: &[0b100],
                kind: Plain,
            },
            Row {
                pattern: "(ω,0,0)",
                formula: "ω⁻²",
                build: |s| vec![s[0].clone(), z(), z()],
                closed: |s| inv(&(&s[0] * &s[0])),
                zero_subsets: &[0b010, 0b100, 0b110],
                kind: Discrepancy {
                    formula: "−ω⁻²",
                    value: |s| -inv(&(&s[0] * &s[0])),
                },
            },
            Row {
                pattern: "(0,ω,0)",
                formula: "2ω⁻²",
                build: |s| vec![z(), s[0].clone(), z()],
                closed: |s| &two() * &inv(&(&s[0] * &s[0])),
                zero_subsets: &[0b001, 0b100, 0b101],
                kind: Plain,
            },
            Row {
                pattern: "(0,0,ω)",
                formula: "−ω⁻²",
                build: |s| vec![z(), z(), s[0].clone()],
                closed: |s| -inv(&(&s[0] * &s[0])),
                zero_subsets: &[0b001, 0b010, 0b011],
                kind: Plain,
            },
            Row {
                pattern: "(0,0,0) resonant",
                formula: "0",
                build: |_| vec![z(), z(), z()],
                closed: |_| z(),
                zero_subsets: &[1, 2, 3, 4, 5, 6, 7],
                kind: Plain,
            },
            Row {
                pattern: "(0,ω,−ω) resonant",
                formula: "−ω⁻²",
                build: |s| vec![z(), s[0].clone(), -&s[0]],
                closed: |s| -inv(&(&s[0] * &s[0])),
                zero_subsets: &[0b001, 0b110, 0b111],
                kind: Plain,
            },
            Row {
                pattern: "(ω,0,−ω) resonant",
                formula: "2ω⁻²",
                build: |s| vec![s[0].clone(), z(), -&s[0]],
                closed: |s| &two() * &inv(&(&s[0] * &s[0])),
                zero_subsets: &[0b010, 0b101, 0b111],
                kind: Plain,
            },
            Row {
                pattern: "(ω,−ω,0) resonant",
                formula: "−ω⁻²",
                build: |s| vec![s[0].clone(), -&s[0], z()],
                closed: |s| -inv(&(&s[0] * &s[0])),
                zero_subsets: &[0b100, 0b011, 0b111],
                kind: Plain,
            },
        ],
        _ => Vec::new(),
    }
}

/// Bitmasks (bit `k` = position `k+1`) of the nonempty subsets summing to 0.
fn zero_subsets(w: &[Scalar]) -> Vec<u8> {
    (1u8..(1 << w.len()))
        .filter(|mask| {
            let sum: Scalar = w
                .iter()
                .enumerate()
                .filter(|(k, _)| mask & (1 << k) != 0)
                .map(|(_, x)| x)
                .sum();
            sum.is_zero()
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum RowStatus {
    Pass,
    /// The tabulated value is contradicted by the defining equations; the
    /// solver value is the one those equations force.
    DocumentedDiscrepancy,
    Fail,
}

impl fmt::Display for RowStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RowStatus::Pass => "pass",
            RowStatus::DocumentedDiscrepancy => "documented discrepancy",
            RowStatus::Fail => "FAIL",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Mismatch {
    pub weights: WeightWord,
    pub solver: Scalar,
    pub table: Scalar,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RowReport {
    pub pattern: String,
    pub formula: String,
    pub status: RowStatus,
    pub samples: usize,
    /// Samples where the solver equals the tabulated closed form.
    pub matches: usize,
    pub first_mismatch: Option<Mismatch>,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TableReport {
    pub length: usize,
    pub samples: usize,
    pub seed: u64,
    pub rows: Vec<RowReport>,
}

impl TableReport {
    /// No row failed (documented discrepancies are allowed).
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.status != RowStatus::Fail)
    }

    pub fn count(&self, status: RowStatus) -> usize {
        self.rows.iter().filter(|r| r.status == status).count()
    }
}

impl fmt::Display for TableReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "Nil table, length {}, {} samples per row, seed {}",
            self.length, self.samples, self.seed
        )?;
        for r in &self.rows {
            writeln!(
                f,
                "{} {} {} ({}/{} match)",
                pad(&r.pattern, 22),
                pad(&r.formula, 14),
                r.status,
                r.matches,
                r.samples
            )?;
            if let Some(m) = &r.first_mismatch {
                writeln!(f, "    at {}: solver {}, table {}", m.weights, m.solver, m.table)?;
            }
            for note in &r.notes {
                writeln!(f, "    {note}")?;
            }
        }
        write!(
            f,
            "summary: {} pass, {} documented discrepancy, {} fail",
            self.count(RowStatus::Pass),
            self.count(RowStatus::DocumentedDiscrepancy),
            self.count(RowStatus::Fail)
        )
    }
}

/// Pads to a column width, not counting combining marks such as the tilde
/// in `ω̃`.
fn pad(s: &str, width: usize) -> String {
    let shown = s.chars().filter(|c| !('\u{300}'..='\u{36f}').contains(c)).count();
    format!("{s}{}", " ".repeat(width.saturating_sub(shown)))
}

const MAX_REDRAWS: usize = 10_000;

/// Regenerates the closed-form table for words of the given length (1 to 3)
/// with `samples` random instantiations per row.
pub fn table(length: usize, samples: usize, seed: u64) -> Result<TableReport> {
    if !(1..=3).contains(&length) {
        return Err(Error::Invalid(format!("table length must be 1, 2 or 3, got {length}")));
    }
    let solver = NilSolver::default();
    let mut rng = rng(seed);
    let mut reports = Vec::new();
    for row in rows(length) {
        let mut pattern = row.zero_subsets.to_vec();
        pattern.sort_unstable();
        let mut draws = Vec::with_capacity(samples);
        while draws.len() < samples {
            let mut found = None;
            for _ in 0..MAX_REDRAWS {
                let s = [nonzero_scalar(&mut rng), nonzero_scalar(&mut rng), nonzero_scalar(&mut rng)];
                if zero_subsets(&(row.build)(&s)) == pattern {
                    found = Some(s);
                    break;
                }
            }
            let s = found.ok_or_else(|| Error::Invalid(format!("could not sample row {}", row.pattern)))?;
            draws.push(s);
        }
        reports.push(check_row(&row, &draws, &solver));
    }
    Ok(TableReport {
        length,
        samples,
        seed,
        rows: reports,
    })
}

fn check_row(row: &Row, draws: &[[Scalar; 3]], solver: &NilSolver) -> RowReport {
    let mut matches = 0;
    let mut first_mismatch = None;
    let mut expected_hits = 0;
    let mut alternative_hits = 0;
    let mut shuffle_ok = true;
    for s in draws {
        let w = (row.build)(s);
        let got = solver.nil_value(&w);
        let table = (row.closed)(s);
        if got == table {
            matches += 1;
        } else if first_mismatch.is_none() {
            first_mismatch = Some(Mismatch {
                weights: WeightWord::new(w.clone()),
                solver: got.clone(),
                table,
            });
        }
        match &row.kind {
            RowKind::Plain => {}
            RowKind::Discrepancy { value, .. } => {
                if got == value(s) {
                    expected_hits += 1;
                }
                let om = &s[0];
                let sum = &solver.nil_value(&[z(), om.clone(), z()]) + &(&two() * &got);
                shuffle_ok &= sum.is_zero();
            }
            RowKind::RejectedAlternative { value, .. } => {
                if got == value(s) {
                    alternative_hits += 1;
                }
            }
        }
    }
    let n = draws.len();
    let mut notes = Vec::new();
    let status = match &row.kind {
        RowKind::Plain | RowKind::RejectedAlternative { .. } if matches == n => RowStatus::Pass,
        RowKind::Discrepancy { .. } if matches == 0 && expected_hits == n && shuffle_ok => {
            RowStatus::DocumentedDiscrepancy
        }
        _ => RowStatus::Fail,
    };
    match &row.kind {
        RowKind::Plain => {}
        RowKind::Discrepancy { formula, .. } => {
            notes.push(format!(
                "solver gives {formula} on {expected_hits}/{n} samples; the tabulated value is inconsistent:"
            ));
            notes.push(
                "master formula: Nil(ω,0,0) = (Nil(0,0) − Nil(ω,0))/ω = (0 − ω⁻¹)/ω = −ω⁻²".to_string(),
            );
            notes.push(format!(
                "alternality of (0)⧢(ω,0): Nil(0,ω,0) + 2·Nil(ω,0,0) = 2ω⁻² − 2ω⁻² = 0 ({})",
                if shuffle_ok { "verified on every sample" } else { "VIOLATED" }
            ));
        }
        RowKind::RejectedAlternative { formula, .. } => {
            notes.push(format!(
                "alternative form {formula} matches on {alternative_hits}/{n} samples; tabulated form confirmed"
            ));
        }
    }
    RowReport {
        pattern: row.pattern.to_string(),
        formula: row.formula.to_string(),
        status,
        samples: n,
        matches,
        first_mismatch,
        notes,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subset_patterns() {
        let w: Vec<Scalar> = vec![Scalar::from(2), Scalar::from(1), Scalar::from(-1)];
        assert_eq!(zero_subsets(&w), vec![0b110]);
        let w: Vec<Scalar> = vec![Scalar::from(1), Scalar::from(1), Scalar::from(-1)];
        assert_eq!(zero_subsets(&w), vec![0b101, 0b110]);
    }

    #[test]
    fn lengths_one_and_two_pass() {
        for len in [1, 2] {
            let r = table(len, 20, 3).unwrap();
            assert_eq!(r.count(RowStatus::Pass), r.rows.len(), "{r}");
        }
    }

    #[test]
    fn length_three_has_one_discrepancy() {
        let r = table(3, 20, 11).unwrap();
        assert!(r.passed(), "{r}");
        assert_eq!(r.count(RowStatus::DocumentedDiscrepancy), 1);
        let row = r.rows.iter().find(|r| r.status == RowStatus::DocumentedDiscrepancy).unwrap();
        assert_eq!(row.pattern, "(ω,0,0)");
        assert_eq!(row.matches, 0);
    }

    #[test]
    fn bad_length() {
        assert!(table(4, 1, 0).is_err());
    }
}
