use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use phimod::digits::{words_of_period, DigitError, DigitRational};
use proptest::prelude::*;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// `Σ_{i=1}^{terms} a_i p^{-i}` for the periodic word, as an exact fraction.
fn partial_sum(p: u32, word: &[u32], terms: usize) -> BigRational {
    (1..=terms).fold(q(0, 1), |acc, i| {
        acc + BigRational::new(BigInt::from(word[(i - 1) % word.len()]), BigInt::from(p).pow(i as u32))
    })
}

fn mobius(n: usize) -> i64 {
    let (mut n, mut sign, mut d) = (n, 1i64, 2usize);
    while d * d <= n {
        if n % d == 0 {
            n /= d;
            if n % d == 0 {
                return 0;
            }
            sign = -sign;
        }
        d += 1;
    }
    if n > 1 {
        -sign
    } else {
        sign
    }
}

/// Words of exact period `s`, by Möbius inversion over divisors.
fn primitive_words(p: u32, s: usize) -> i64 {
    (1..=s).filter(|d| s.is_multiple_of(*d)).map(|d| mobius(s / d) * (p as i64).pow(d as u32)).sum()
}

#[test]
fn frozen_expansions() {
    let cases: [(u32, &str, &[u32]); 7] = [
        (3, "0", &[0]),
        (3, "1", &[2]),
        (3, "1/2", &[1]),
        (3, "1/4", &[0, 2]),
        (3, "3/4", &[2, 0]),
        (5, "1/3", &[1, 3]),
        (3, "1/13", &[0, 0, 2]),
    ];
    for (p, text, digits) in cases {
        let r = DigitRational::parse(text, p).unwrap();
        assert_eq!(r.digits(), digits, "{text} at p = {p}");
        assert_eq!(r.to_string(), if text.contains('/') { text.to_string() } else { format!("{text}/1") });
    }
    let r = DigitRational::new(3, vec![0, 2, 0, 2]).unwrap();
    assert_eq!(r.digits(), &[0, 2]);
    assert_eq!(r.minimal_period(), 2);
    assert_eq!(r.numerator(), BigInt::from(2));
    assert_eq!(r.digit(1), 0);
    assert_eq!(r.digit(0), 2);
    assert_eq!(r.co_digit(1), 2);
    assert_eq!(r.digits_to(6), vec![0, 2, 0, 2, 0, 2]);
}

#[test]
fn constructor_errors() {
    assert_eq!(DigitRational::new(2, vec![1]).unwrap_err(), DigitError::BadPrime(2));
    assert_eq!(DigitRational::new(3, vec![]).unwrap_err(), DigitError::Empty);
    assert_eq!(DigitRational::new(3, vec![3]).unwrap_err(), DigitError::BadDigit { digit: 3, p: 3 });
    assert!(matches!(DigitRational::from_fraction(9, 2, 3), Err(DigitError::BadRange { .. })));
    for bad in ["1/3", "2", "-1/2", "x", "1/0"] {
        assert!(DigitRational::parse(bad, 3).is_err(), "{bad}");
    }
}

#[test]
fn period_counts_match_mobius_inversion() {
    for p in [3u32, 5] {
        for s in 1..=4usize {
            let words = words_of_period(p, s);
            assert_eq!(words.len() as i64, primitive_words(p, s), "p = {p}, s = {s}");
            assert!(words.iter().all(|w| w.minimal_period() == s));
            let classes: BTreeSet<Vec<u32>> = words.iter().map(|w| w.iso_class_key().to_vec()).collect();
            assert_eq!(classes.len() * s, words.len());
        }
    }
    assert_eq!(words_of_period(3, 2).len(), 6);
    assert_eq!(words_of_period(3, 3).len(), 24);
}

#[test]
fn every_fraction_of_small_period() {
    for p in [3u32, 5, 7] {
        for s in 1..=3usize {
            let den = (p as u64).pow(s as u32) - 1;
            for m in 0..=den {
                let r = DigitRational::from_fraction(m, s, p).unwrap();
                assert_eq!(r.value(), BigRational::new(BigInt::from(m), BigInt::from(den)));
                assert_eq!(s % r.minimal_period(), 0);
                assert_eq!(DigitRational::from_rational(&r.value(), p).unwrap(), r);
            }
        }
    }
}

proptest! {
    #[test]
    fn value_is_the_digit_series(p in prop::sample::select(vec![3u32, 5, 7]), word in prop::collection::vec(0u32..7, 1..5)) {
        let word: Vec<u32> = word.into_iter().map(|d| d % p).collect();
        let r = DigitRational::new(p, word.clone()).unwrap();
        let terms = 40;
        let gap = r.value() - partial_sum(p, &word, terms);
        prop_assert!(gap >= q(0, 1));
        prop_assert!(gap <= BigRational::new(BigInt::from(1), BigInt::from(p).pow(terms as u32)));
    }

    #[test]
    fn shift_complement_and_iso_classes(p in prop::sample::select(vec![3u32, 5]), word in prop::collection::vec(0u32..5, 1..5), n in -6i64..6) {
        let word: Vec<u32> = word.into_iter().map(|d| d % p).collect();
        let r = DigitRational::new(p, word).unwrap();
        // r(1) = p·r − a_1.
        let pb = BigRational::from_integer(BigInt::from(p));
        prop_assert_eq!(r.shift(1).value(), &pb * r.value() - BigRational::from_integer(BigInt::from(r.digit(1))));
        prop_assert_eq!(r.shift(n).shift(-n), r.clone());
        prop_assert_eq!(r.shift(n).digit(1), r.digit(n + 1));
        prop_assert_eq!(r.complement().value(), q(1, 1) - r.value());
        prop_assert_eq!(r.complement().complement(), r.clone());
        let shifted = r.shift(n);
        let k = shifted.iso_class_equal(&r).expect("rotations are isomorphic");
        prop_assert_eq!(r.shift(k as i64), shifted.clone());
        prop_assert_eq!(shifted.iso_class_key(), r.iso_class_key());
        let json = serde_json::to_string(&r).unwrap();
        prop_assert_eq!(serde_json::from_str::<DigitRational>(&json).unwrap(), r);
    }
}

#[test]
fn deserialize_rejects_bad_digits() {
    assert!(serde_json::from_str::<DigitRational>(r#"{"p":3,"digits":[4]}"#).is_err());
    assert!(serde_json::from_str::<DigitRational>(r#"{"p":4,"digits":[1]}"#).is_err());
}

#[test]
fn common_period_is_lcm() {
    let a = DigitRational::parse("1/4", 3).unwrap();
    let b = DigitRational::parse("1/13", 3).unwrap();
    assert_eq!(a.common_period(&b), 6);
    assert_eq!(a.common_period(&a), 2);
}
