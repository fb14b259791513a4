//! Independent check of the variance formula: conjugate the field by a jet
//! perturbation and compare with the mould-side prediction.

use mould_calc::moulds::UniversalMould;
use mould_calc::vfield::{default_perturbation, eps_conjugate, variance_oracle, PreparedVectorField};
use mould_calc::{Letter, Result};

const FIELD: &str = r#"{
  "dim": 2,
  "lambda": [["1", "0"], ["-2", "0"]],
  "terms": [
    {"component": 1, "exponents": [2, 0], "coeff": ["1", "0"]},
    {"component": 2, "exponents": [1, 1], "coeff": ["2", "0"]},
    {"component": 1, "exponents": [0, 2], "coeff": ["-1", "0"]}
  ]
}"#;

fn main() -> Result<()> {
    let x = PreparedVectorField::from_json(FIELD)?;
    let c: Letter = "(3,0)".parse()?;
    let bc = default_perturbation(&x, &c)?;
    println!("perturbation {bc}");
    let xe = eps_conjugate(&x, &bc)?;
    println!("ε-part touches letters {:?}", xe.eps_part().alphabet().iter().map(ToString::to_string).collect::<Vec<_>>());
    for m in [UniversalMould::linearization(), UniversalMould::invfact()] {
        let report = variance_oracle(&m, &x, &bc, 5)?;
        println!("{}: {report}", m.name());
    }
    Ok(())
}
