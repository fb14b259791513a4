//! Letters, weights, shuffles and contractions.

use mould_calc::words::{conb, conf, is_resonant, shuffles, weight, weight_word};
use mould_calc::{Letter, Result, Spectrum};

fn main() -> Result<()> {
    let lam = Spectrum::from_ints(&[1, -1]);
    let word: Vec<Letter> = ["(1,1)", "(2,0)", "(-1,2)"]
        .iter()
        .map(|s| s.parse())
        .collect::<Result<_>>()?;
    for n in &word {
        println!("{n}: degree {}, weight {}, resonant {}", n.degree(), weight(n, &lam)?, is_resonant(n, &lam)?);
    }
    let omega = weight_word(&word, &lam)?;
    println!("weights of {:?}: {omega}", word.iter().map(ToString::to_string).collect::<Vec<_>>());
    println!("conf_1: {:?}", conf(1, omega.letters())?);
    println!("conb_2: {:?}", conb(2, omega.letters())?);
    println!("conb_1 -> {:?}", conb(1, omega.letters()).err());

    let sh = shuffles(&['a', 'b'], &['x']);
    println!("sh(ab, x) = {}", sh.iter().map(|w| w.iter().collect::<String>()).collect::<Vec<_>>().join(" + "));
    Ok(())
}
