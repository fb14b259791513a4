//! Splitting a field into commuting nilpotent and diagonalizable parts.

use mould_calc::vfield::{derivation_terms, dia_part, format_monomial, is_derivation, lie_bracket, nil_part, PreparedVectorField};
use mould_calc::Result;

const FIELD: &str = r#"{
  "dim": 2,
  "lambda": [["1", "0"], ["-1", "0"]],
  "terms": [
    {"component": 1, "exponents": [2, 1], "coeff": ["1", "0"]},
    {"component": 2, "exponents": [1, 2], "coeff": ["-2", "0"]},
    {"component": 1, "exponents": [3, 0], "coeff": ["3", "0"]},
    {"component": 2, "exponents": [0, 3], "coeff": ["1", "1"]}
  ]
}"#;

fn main() -> Result<()> {
    let x = PreparedVectorField::from_json(FIELD)?;
    let order = 5;
    let nil = nil_part(&x, order)?;
    let dia = dia_part(&x, order)?;
    println!("nilpotent part:");
    for t in derivation_terms(&nil)? {
        println!("  component {}: ({})*{}", t.component, t.coeff, format_monomial(&t.exponents));
    }
    println!("X = nil + dia: {}", nil.add(&dia)? == x.operator(order));
    println!("[dia, nil] = 0: {}", lie_bracket(&dia, &nil)?.is_zero());
    println!("both derivations: {}", is_derivation(&nil).is_none() && is_derivation(&dia).is_none());
    Ok(())
}
