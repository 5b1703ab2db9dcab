//! Rationals in `[0,1]` with purely periodic base-`p` expansions.
//!
//! `r = Σ_{i≥1} a_i p^{-i}` with `a_{i+s} = a_i` is stored by its digit word
//! `(a_1, …, a_s)` of minimal period, so `r = m/(p^s − 1)` with
//! `m = Σ a_i p^{s−i}`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DigitError {
    #[error("{0} is not an odd prime")]
    BadPrime(u32),
    #[error("digit word is empty")]
    Empty,
    #[error("digit {digit} is not below p = {p}")]
    BadDigit { digit: u32, p: u32 },
    #[error("numerator {m} is outside [0, {max}]")]
    BadRange { m: String, max: String },
    #[error("{0} is not a rational in [0,1] with denominator prime to p")]
    NotPeriodic(String),
    #[error("period {0} is too long")]
    TooLong(usize),
}

fn is_odd_prime(p: u32) -> bool {
    p >= 3 && (2..).take_while(|d: &u32| d * d <= p).all(|d| !p.is_multiple_of(d))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct DigitRational {
    p: u32,
    digits: Vec<u32>,
    #[serde(skip)]
    least_rotation: Vec<u32>,
}

#[derive(Deserialize)]
struct RawDigits {
    p: u32,
    digits: Vec<u32>,
}

impl<'de> Deserialize<'de> for DigitRational {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let raw = RawDigits::deserialize(de)?;
        DigitRational::new(raw.p, raw.digits).map_err(serde::de::Error::custom)
    }
}

fn minimal_period_of(word: &[u32]) -> usize {
    let s = word.len();
    (1..=s)
        .filter(|d| s.is_multiple_of(*d))
        .find(|&d| (d..s).all(|i| word[i] == word[i - d]))
        .unwrap_or(s)
}

fn rotate(word: &[u32], n: i64) -> Vec<u32> {
    let s = word.len();
    let k = n.rem_euclid(s as i64) as usize;
    word[k..].iter().chain(&word[..k]).copied().collect()
}

impl DigitRational {
    /// The rational with the periodic digit word `digits`, collapsed to its minimal period.
    pub fn new(p: u32, digits: Vec<u32>) -> Result<Self, DigitError> {
        if !is_odd_prime(p) {
            return Err(DigitError::BadPrime(p));
        }
        if digits.is_empty() {
            return Err(DigitError::Empty);
        }
        if let Some(&digit) = digits.iter().find(|&&d| d >= p) {
            return Err(DigitError::BadDigit { digit, p });
        }
        let period = minimal_period_of(&digits);
        let digits = digits[..period].to_vec();
        let least_rotation = (0..period as i64)
            .map(|n| rotate(&digits, n))
            .min()
            .expect("word is nonempty");
        Ok(DigitRational {
            p,
            digits,
            least_rotation,
        })
    }

    /// `m/(p^s − 1)`.
    pub fn from_fraction(m: u64, s: usize, p: u32) -> Result<Self, DigitError> {
        if !is_odd_prime(p) {
            return Err(DigitError::BadPrime(p));
        }
        if s == 0 {
            return Err(DigitError::Empty);
        }
        let max = (p as u64)
            .checked_pow(s as u32)
            .map(|q| q - 1)
            .ok_or(DigitError::TooLong(s))?;
        if m > max {
            return Err(DigitError::BadRange {
                m: m.to_string(),
                max: max.to_string(),
            });
        }
        // Digits of m/(p^s − 1): a_i is the integer part of p·x, x ← frac(p·x).
        let den = max;
        let mut num = m;
        let mut digits = Vec::with_capacity(s);
        for _ in 0..s {
            if den == 0 {
                break;
            }
            let scaled = num as u128 * p as u128;
            let digit = (scaled / den as u128).min(p as u128 - 1) as u32;
            digits.push(digit);
            num = (scaled - digit as u128 * den as u128) as u64;
        }
        DigitRational::new(p, digits)
    }

    /// Any rational in `[0,1]` whose reduced denominator is prime to `p`.
    pub fn from_rational(r: &BigRational, p: u32) -> Result<Self, DigitError> {
        if !is_odd_prime(p) {
            return Err(DigitError::BadPrime(p));
        }
        let bad = || DigitError::NotPeriodic(r.to_string());
        if r.is_negative() || *r > BigRational::one() {
            return Err(bad());
        }
        let den = r.denom().clone();
        let pb = BigInt::from(p);
        if (&den % &pb).is_zero() {
            return Err(bad());
        }
        // s = multiplicative order of p modulo the denominator.
        let mut s = 1usize;
        let mut pow = &pb % &den;
        while !pow.is_one() && !den.is_one() {
            pow = (pow * &pb) % &den;
            s += 1;
            if s > 64 {
                return Err(DigitError::TooLong(s));
            }
        }
        let q = pb.pow(s as u32) - 1;
        let m = r * BigRational::from_integer(q);
        let m = m.to_integer().to_u64().ok_or(DigitError::TooLong(s))?;
        DigitRational::from_fraction(m, s, p)
    }

    /// Parse `"m/n"` or an integer.
    pub fn parse(text: &str, p: u32) -> Result<Self, DigitError> {
        let bad = || DigitError::NotPeriodic(text.to_string());
        let r = match text.trim().split_once('/') {
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().map_err(|_| bad())?;
                let d: BigInt = d.trim().parse().map_err(|_| bad())?;
                if d.is_zero() {
                    return Err(bad());
                }
                BigRational::new(n, d)
            }
            None => BigRational::from_integer(text.trim().parse().map_err(|_| bad())?),
        };
        DigitRational::from_rational(&r, p)
    }

    pub fn zero(p: u32) -> Result<Self, DigitError> {
        DigitRational::new(p, vec![0])
    }

    pub fn one(p: u32) -> Result<Self, DigitError> {
        DigitRational::new(p, vec![p.saturating_sub(1)])
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    /// The digit word of minimal period.
    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    /// `s(r)`.
    pub fn minimal_period(&self) -> usize {
        self.digits.len()
    }

    /// `a_i` for any integer `i`, with `a_1` the first stored digit.
    pub fn digit(&self, i: i64) -> u32 {
        self.digits[(i - 1).rem_euclid(self.digits.len() as i64) as usize]
    }

    /// `ã_i = p − 1 − a_i`.
    pub fn co_digit(&self, i: i64) -> u32 {
        self.p - 1 - self.digit(i)
    }

    /// `m` in `r = m/(p^s − 1)` with `s = s(r)`.
    pub fn numerator(&self) -> BigInt {
        self.digits
            .iter()
            .fold(BigInt::zero(), |acc, &d| acc * self.p + d)
    }

    pub fn value(&self) -> BigRational {
        let q = BigInt::from(self.p).pow(self.digits.len() as u32) - 1;
        BigRational::new(self.numerator(), q)
    }

    pub fn is_zero(&self) -> bool {
        self.digits.iter().all(|&d| d == 0)
    }

    pub fn is_one(&self) -> bool {
        self.digits.iter().all(|&d| d == self.p - 1)
    }

    /// `r̃ = 1 − r`.
    pub fn complement(&self) -> Self {
        let digits = self.digits.iter().map(|&d| self.p - 1 - d).collect();
        DigitRational::new(self.p, digits).expect("complement digits are in range")
    }

    /// `r(n) = Σ a_{i+n} p^{-i}`; `n` may be negative.
    pub fn shift(&self, n: i64) -> Self {
        DigitRational::new(self.p, rotate(&self.digits, n)).expect("rotation keeps digits valid")
    }

    /// Least rotation of the digit word; equal exactly for isomorphic simples.
    pub fn iso_class_key(&self) -> &[u32] {
        &self.least_rotation
    }

    /// The least `n ≥ 0` with `self = other(n)`, if any.
    pub fn iso_class_equal(&self, other: &DigitRational) -> Option<usize> {
        if self.p != other.p || self.least_rotation != other.least_rotation {
            return None;
        }
        (0..other.digits.len()).find(|&n| rotate(&other.digits, n as i64) == self.digits)
    }

    /// Digit word repeated to length `s`, which must be a multiple of the period.
    pub fn digits_to(&self, s: usize) -> Vec<u32> {
        assert!(s.is_multiple_of(self.digits.len()), "length is not a multiple of the period");
        (1..=s as i64).map(|i| self.digit(i)).collect()
    }

    /// Common multiple of two periods.
    pub fn common_period(&self, other: &DigitRational) -> usize {
        self.digits.len().lcm(&other.digits.len())
    }
}

impl fmt::Display for DigitRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = self.value();
        write!(f, "{}/{}", v.numer(), v.denom())
    }
}

/// All digit words of minimal period exactly `s`.
pub fn words_of_period(p: u32, s: usize) -> Vec<DigitRational> {
    let total = (p as u64).pow(s as u32);
    (0..total)
        .filter_map(|n| {
            let mut digits = Vec::with_capacity(s);
            let mut k = n;
            for _ in 0..s {
                digits.push((k % p as u64) as u32);
                k /= p as u64;
            }
            digits.reverse();
            (minimal_period_of(&digits) == s).then(|| DigitRational::new(p, digits).ok())?
        })
        .collect()
}
