//! Seeded generators for randomized checks.
//!
//! Values are drawn from rationals `p/q` with `|p|, |q| ≤ 9` so that
//! intermediate denominators stay small.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exactnum::{Rational, Scalar};
use crate::words::{Letter, Spectrum};

pub type CheckRng = ChaCha8Rng;

pub fn rng(seed: u64) -> CheckRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn small_rational<R: Rng>(rng: &mut R) -> Rational {
    let p = rng.gen_range(-9i64..=9);
    let q = rng.gen_range(1i64..=9);
    Rational::new(p, q).expect("nonzero denominator")
}

pub fn nonzero_rational<R: Rng>(rng: &mut R) -> Rational {
    loop {
        let r = small_rational(rng);
        if !r.is_zero() {
            return r;
        }
    }
}

/// A scalar that is real with probability one half, otherwise a Gaussian
/// rational with nonzero imaginary part.
pub fn small_scalar<R: Rng>(rng: &mut R) -> Scalar {
    if rng.gen_bool(0.5) {
        Scalar::real(small_rational(rng))
    } else {
        Scalar::new(small_rational(rng), nonzero_rational(rng))
    }
}

pub fn nonzero_scalar<R: Rng>(rng: &mut R) -> Scalar {
    loop {
        let s = small_scalar(rng);
        if !s.is_zero() {
            return s;
        }
    }
}

/// Small integer spectrum; integer entries make resonances common.
pub fn int_spectrum<R: Rng>(rng: &mut R, dim: usize) -> Spectrum {
    let v: Vec<i64> = (0..dim).map(|_| rng.gen_range(-3i64..=3)).collect();
    Spectrum::from_ints(&v)
}

/// Prepared-form letter with entries in `-1..=2` and degree at most 3.
pub fn prepared_letter<R: Rng>(rng: &mut R, dim: usize) -> Letter {
    loop {
        let v: Vec<i64> = (0..dim).map(|_| rng.gen_range(-1i64..=2)).collect();
        let l = Letter::new(v);
        if l.is_prepared() && l.degree() <= 3 {
            return l;
        }
    }
}

/// `size` distinct prepared letters.
pub fn alphabet<R: Rng>(rng: &mut R, dim: usize, size: usize) -> Vec<Letter> {
    let mut out: Vec<Letter> = Vec::with_capacity(size);
    while out.len() < size {
        let l = prepared_letter(rng, dim);
        if !out.contains(&l) {
            out.push(l);
        }
    }
    out
}

pub fn pick<'a, R: Rng, T>(rng: &mut R, items: &'a [T]) -> &'a T {
    items.choose(rng).expect("nonempty slice")
}
