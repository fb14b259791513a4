use proptest::prelude::*;

use mould_calc::exactnum::{EpsJet, Rational, Scalar};
use mould_calc::moulds::{Mould, TabulatedMould};
use mould_calc::nilmould::{dia_mould, nil_mould};
use mould_calc::variance::{var_c, VarianceContext};
use mould_calc::vfield::{apply_op, compose_word, HomogeneousOp, MonomialBasis, Polynomial, PreparedVectorField};
use mould_calc::words::{conb, conf, shuffles, words_up_to};
use mould_calc::{Letter, Spectrum};

fn rational() -> impl Strategy<Value = Rational> {
    (-12i64..=12, 1i64..=7).prop_map(|(p, q)| Rational::new(p, q).unwrap())
}

fn scalar() -> impl Strategy<Value = Scalar> {
    (rational(), rational()).prop_map(|(re, im)| Scalar::new(re, im))
}

fn nonzero_scalar() -> impl Strategy<Value = Scalar> {
    scalar().prop_filter("nonzero", |s| !s.is_zero())
}

fn small_weight() -> impl Strategy<Value = Scalar> {
    (-3i64..=3).prop_map(Scalar::from)
}

fn weight_word(max: usize) -> impl Strategy<Value = Vec<Scalar>> {
    prop::collection::vec(small_weight(), 0..=max)
}

fn tabulated(seed: u64, alphabet: &[Scalar], len: usize) -> Mould<Scalar> {
    let mut rng = mould_calc::random::rng(seed);
    TabulatedMould::random(alphabet, len, &mut rng).to_mould(format!("T{seed}"))
}

fn two_dim_letter() -> impl Strategy<Value = Letter> {
    (-1i64..=3, -1i64..=3)
        .prop_map(|(a, b)| Letter::new(vec![a, b]))
        .prop_filter("prepared", |l| l.is_prepared())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn scalar_field_axioms(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a - &a, Scalar::zero());
        if !a.is_zero() {
            prop_assert_eq!(&a * &a.inv().unwrap(), Scalar::one());
        }
    }

    #[test]
    fn scalar_text_round_trip(a in scalar()) {
        prop_assert_eq!(a.to_string().parse::<Scalar>().unwrap(), a.clone());
        let j = serde_json::to_string(&a).unwrap();
        prop_assert_eq!(serde_json::from_str::<Scalar>(&j).unwrap(), a);
    }

    #[test]
    fn jet_inverse(v in nonzero_scalar(), d in scalar()) {
        let x = EpsJet::new(v, d);
        let one = EpsJet::constant(Scalar::one());
        prop_assert_eq!(&x * &x.inv().unwrap(), one);
    }

    #[test]
    fn eps_squares_to_zero(d in scalar(), e in scalar()) {
        let p = &EpsJet::eps(d) * &EpsJet::eps(e);
        prop_assert!(p.val.is_zero() && p.d.is_zero());
    }

    #[test]
    fn shuffle_symmetry_and_count(a in weight_word(4), b in weight_word(4)) {
        let mut ab = shuffles(&a, &b);
        let mut ba = shuffles(&b, &a);
        let n = a.len() + b.len();
        let binom = (1..=a.len()).fold(1usize, |acc, k| acc * (n - a.len() + k) / k);
        prop_assert_eq!(ab.len(), binom);
        ab.sort_by_key(|w| format!("{w:?}"));
        ba.sort_by_key(|w| format!("{w:?}"));
        prop_assert_eq!(ab, ba);
    }

    #[test]
    fn contractions_agree(w in prop::collection::vec(small_weight(), 2..=6), k in 1usize..6) {
        let i = 1 + k % (w.len() - 1);
        let f = conf(i, &w).unwrap();
        let b = conb(i + 1, &w).unwrap();
        prop_assert_eq!(&f, &b);
        prop_assert_eq!(f.len(), w.len() - 1);
        let total: Scalar = w.iter().sum();
        prop_assert_eq!(f.iter().sum::<Scalar>(), total);
    }

    #[test]
    fn product_is_associative_with_unit(s1 in 0u64..1000, s2 in 0u64..1000, s3 in 0u64..1000) {
        let alphabet = [Scalar::from(1), Scalar::from(-2)];
        let (m, n, p) = (tabulated(s1, &alphabet, 4), tabulated(s2, &alphabet, 4), tabulated(s3, &alphabet, 4));
        prop_assert!((&(&m * &n) * &p).equal_up_to(&(&m * &(&n * &p)), &alphabet, 4).unwrap());
        prop_assert!((&m * &Mould::unit()).equal_up_to(&m, &alphabet, 4).unwrap());
        prop_assert!((&Mould::unit() * &m).equal_up_to(&m, &alphabet, 4).unwrap());
    }

    #[test]
    fn variance_is_linear(s1 in 0u64..1000, s2 in 0u64..1000, a in scalar(), b in scalar()) {
        let alphabet = [Scalar::from(1), Scalar::from(2)];
        let ctx = VarianceContext::for_weight(Scalar::from(2), alphabet.iter().cloned());
        let (m, n) = (tabulated(s1, &alphabet, 4), tabulated(s2, &alphabet, 4));
        let lhs = var_c(&Mould::linear(a.clone(), &m, b.clone(), &n), &ctx);
        let rhs = Mould::linear(a, &var_c(&m, &ctx), b, &var_c(&n, &ctx));
        prop_assert!(lhs.equal_up_to(&rhs, &alphabet, 4).unwrap());
    }

    #[test]
    fn nil_plus_dia_is_the_identity_mould(w in weight_word(4)) {
        let total = &nil_mould().eval(&w).unwrap() + &dia_mould().eval(&w).unwrap();
        prop_assert_eq!(total, Mould::<Scalar>::identity().eval(&w).unwrap());
    }

    #[test]
    fn nil_master_formula(w in prop::collection::vec(small_weight(), 2..=4)) {
        let total: Scalar = w.iter().sum();
        prop_assume!(!total.is_zero());
        let nil = nil_mould();
        let rhs = &nil.eval(&w[1..]).unwrap() - &nil.eval(&w[..w.len() - 1]).unwrap();
        prop_assert_eq!(&total * &nil.eval(&w).unwrap(), rhs);
    }

    #[test]
    fn composed_words_are_homogeneous(ls in prop::collection::vec(two_dim_letter(), 1..=2)) {
        let lam = Spectrum::from_ints(&[1, -1]);
        let field = PreparedVectorField::new(
            lam,
            ls.iter().map(|l| HomogeneousOp::with_default_coeffs(l.clone()).unwrap()),
        ).unwrap();
        let basis = field.basis(5);
        let op = compose_word(&field, &ls, 5).unwrap();
        let mut shift = [0i64; 2];
        for l in &ls {
            for (s, c) in shift.iter_mut().zip(l.components()) {
                *s += c;
            }
        }
        prop_assert!(op.is_homogeneous((shift[0] + shift[1]) as usize));
        for (row, col, _) in op.nonzero_entries() {
            let (r, c) = (basis.monomial(row), basis.monomial(col));
            for k in 0..2 {
                prop_assert_eq!(r[k] as i64, c[k] as i64 + shift[k]);
            }
        }
    }

    #[test]
    fn truncation_is_coherent(l in two_dim_letter(), e0 in 0u32..3, e1 in 0u32..3) {
        let b = HomogeneousOp::with_default_coeffs(l).unwrap();
        let lo = MonomialBasis::new(2, 4);
        let hi = MonomialBasis::new(2, 6);
        prop_assert_eq!(b.matrix(&hi).restrict(4).unwrap(), b.matrix(&lo));
        let p = Polynomial::monomial(vec![e0, e1], Scalar::one());
        prop_assert_eq!(apply_op(&b, &p, 6).truncated(4), apply_op(&b, &p, 4));
    }
}

#[test]
fn all_words_enumerated() {
    let a = [Scalar::from(1), Scalar::from(2), Scalar::from(3)];
    assert_eq!(words_up_to(&a, 3).len(), 1 + 3 + 9 + 27);
}
