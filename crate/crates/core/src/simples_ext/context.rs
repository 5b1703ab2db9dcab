//! Digit data of a pair of simples over a common period, and the three
//! admissibility predicates.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::ExtError;
use crate::digits::DigitRational;

/// `L₁ = L(r₁)^{s/s(r₁)}` and `L₂ = L(r₂)^{s/s(r₂)}` with `ã_i`, `b̃_j` read over `Z/s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtContext {
    p: u32,
    r1: DigitRational,
    r2: DigitRational,
    s: usize,
    a_tilde: Vec<usize>,
    b_tilde: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PairKind {
    Cr,
    St,
    Sp,
}

/// Every admissible pair with its least witness `m₀`, sorted by `(i, j)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct AdmissiblePairs {
    pub cr: Vec<(usize, usize, usize)>,
    pub st: Vec<(usize, usize, usize)>,
    /// `j₀` with `(0, j₀)` sp-admissible.
    pub sp: Vec<usize>,
}

/// The integer `C` attached to an admissible pair and whether its bounds hold.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairConstants {
    pub kind: PairKind,
    pub i0: usize,
    pub j0: usize,
    /// `None` for sp pairs, which are checked by an equality instead.
    pub c: Option<BigRational>,
    pub bounds_ok: bool,
    pub detail: String,
}

impl ExtContext {
    /// `s` defaults to `lcm(s(r₁), s(r₂))`.
    pub fn new(r1: DigitRational, r2: DigitRational, s: Option<usize>) -> Result<Self, ExtError> {
        if r1.p() != r2.p() {
            return Err(ExtError::InvalidSystem("r₁ and r₂ use different primes".into()));
        }
        let base = r1.common_period(&r2);
        let s = s.unwrap_or(base);
        if s == 0 || !s.is_multiple_of(base) {
            return Err(ExtError::InvalidSystem(format!(
                "s = {s} is not a multiple of s(r₁) = {} and s(r₂) = {}",
                r1.minimal_period(),
                r2.minimal_period()
            )));
        }
        let a_tilde = (0..s as i64).map(|i| r1.co_digit(i) as usize).collect();
        let b_tilde = (0..s as i64).map(|j| r2.co_digit(j) as usize).collect();
        Ok(ExtContext {
            p: r1.p(),
            r1,
            r2,
            s,
            a_tilde,
            b_tilde,
        })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn r1(&self) -> &DigitRational {
        &self.r1
    }

    pub fn r2(&self) -> &DigitRational {
        &self.r2
    }

    pub fn s(&self) -> usize {
        self.s
    }

    /// `q = p^s`.
    pub fn q(&self) -> BigInt {
        BigInt::from(self.p).pow(self.s as u32)
    }

    pub fn idx(&self, i: i64) -> usize {
        i.rem_euclid(self.s as i64) as usize
    }

    /// `ã_i` for `i ∈ Z/s`.
    pub fn a(&self, i: i64) -> usize {
        self.a_tilde[self.idx(i)]
    }

    /// `b̃_j` for `j ∈ Z/s`.
    pub fn b(&self, j: i64) -> usize {
        self.b_tilde[self.idx(j)]
    }

    pub fn a_tilde(&self) -> &[usize] {
        &self.a_tilde
    }

    pub fn b_tilde(&self) -> &[usize] {
        &self.b_tilde
    }

    /// `r̃₂ = 0` and `r̃₁ = 1`: the one context where forward propagation stalls at `t = p`.
    pub fn is_exceptional(&self) -> bool {
        let p = self.p as usize;
        self.b_tilde.iter().all(|&b| b == 0) && self.a_tilde.iter().all(|&a| a == p - 1)
    }

    /// First `m ∈ 1..=s` with `lhs(m) ≠ b̃_{j₀+m}`, where `lhs(m) = ã_{i₀+m} − shift`.
    fn first_step(&self, i0: usize, j0: usize, shift: i64) -> Option<(usize, std::cmp::Ordering)> {
        (1..=self.s).find_map(|m| {
            let lhs = self.a((i0 + m) as i64) as i64 - shift;
            let rhs = self.b((j0 + m) as i64) as i64;
            (lhs != rhs).then(|| (m, lhs.cmp(&rhs)))
        })
    }

    /// `ã_{i₀} ≠ b̃_{j₀}` and the first differing step has `ã > b̃`; returns `m₀`.
    pub fn cr_admissible(&self, i0: usize, j0: usize) -> Option<usize> {
        if self.a(i0 as i64) == self.b(j0 as i64) {
            return None;
        }
        match self.first_step(i0, j0, 0) {
            Some((m, std::cmp::Ordering::Greater)) => Some(m),
            _ => None,
        }
    }

    /// `b̃_{j₀} ≠ p−1`, `ã_{i₀} ≠ 0`, `ã_{i₀}−1 ≠ b̃_{j₀}` and the first step
    /// with `ã−1 ≠ b̃` has `ã−1 < b̃`; returns `m₀`.
    pub fn st_admissible(&self, i0: usize, j0: usize) -> Option<usize> {
        let p = self.p as usize;
        let (a, b) = (self.a(i0 as i64), self.b(j0 as i64));
        if b == p - 1 || a == 0 || a - 1 == b {
            return None;
        }
        match self.first_step(i0, j0, 1) {
            Some((m, std::cmp::Ordering::Less)) => Some(m),
            _ => None,
        }
    }

    /// `ã_m − 1 = b̃_{j₀+m}` for every `m ∈ Z/s` (the pair is `(0, j₀)`).
    pub fn sp_admissible(&self, j0: usize) -> bool {
        (0..self.s as i64).all(|m| self.a(m) as i64 - 1 == self.b(j0 as i64 + m) as i64)
    }

    pub fn admissible_pairs(&self) -> AdmissiblePairs {
        let mut out = AdmissiblePairs::default();
        for i in 0..self.s {
            for j in 0..self.s {
                if let Some(m0) = self.cr_admissible(i, j) {
                    out.cr.push((i, j, m0));
                }
                if let Some(m0) = self.st_admissible(i, j) {
                    out.st.push((i, j, m0));
                }
            }
        }
        out.sp = (0..self.s).filter(|&j| self.sp_admissible(j)).collect();
        out
    }

    pub fn is_admissible(&self, kind: PairKind, i0: usize, j0: usize) -> bool {
        match kind {
            PairKind::Cr => self.cr_admissible(i0, j0).is_some(),
            PairKind::St => self.st_admissible(i0, j0).is_some(),
            PairKind::Sp => i0 == 0 && self.sp_admissible(j0),
        }
    }

    /// `C_cr = −(q−1)(r₁(i₀) − r₂(j₀))` with `1 ≤ C ≤ q−1`,
    /// `C_st = −(q−1)(r₁(i₀) − r₂(j₀) − 1)` with `1 ≤ C < (q−1)(1 + 1/(p−1))`
    /// and `r₁(i₀) + 1/(p−1) > r₂(j₀)`; for sp, `r₁ + 1/(p−1) = r₂(j₀)`.
    /// Both `C` must be integers prime to `p`.
    pub fn check_pair_constants(&self, kind: PairKind, i0: usize, j0: usize) -> Result<PairConstants, ExtError> {
        if i0 >= self.s || j0 >= self.s || !self.is_admissible(kind, i0, j0) {
            return Err(ExtError::AdmissibilityMismatch(format!(
                "({i0}, {j0}) is not {kind:?}-admissible for r₁ = {}, r₂ = {}, s = {}",
                self.r1, self.r2, self.s
            )));
        }
        let r1 = self.r1.shift(i0 as i64).value();
        let r2 = self.r2.shift(j0 as i64).value();
        let p = BigInt::from(self.p);
        let q1 = BigRational::from_integer(self.q() - 1);
        let gap = BigRational::new(BigInt::one(), &p - 1);
        let integral_prime_to_p = |c: &BigRational| c.is_integer() && !c.to_integer().mod_floor(&p).is_zero();
        let one = BigRational::one();
        let (c, bounds_ok, detail) = match kind {
            PairKind::Cr => {
                let c = -(&q1 * (&r1 - &r2));
                let ok = integral_prime_to_p(&c) && c >= one && c <= q1 && r1 < r2;
                let detail = format!("C = {c}, 1 ≤ C ≤ {q1}, r₁(i₀) = {r1} < r₂(j₀) = {r2}");
                (Some(c), ok, detail)
            }
            PairKind::St => {
                let c = -(&q1 * (&r1 - &r2 - &one));
                let upper = &q1 * (&one + &gap);
                let ok = integral_prime_to_p(&c) && c >= one && c < upper && &r1 + &gap > r2;
                let detail = format!("C = {c}, 1 ≤ C < {upper}, r₁(i₀) + 1/(p−1) = {} > r₂(j₀) = {r2}", &r1 + &gap);
                (Some(c), ok, detail)
            }
            PairKind::Sp => {
                let lhs = &r1 + &gap;
                let ok = lhs == r2;
                (None, ok, format!("r₁ + 1/(p−1) = {lhs}, r₂(j₀) = {r2}"))
            }
        };
        Ok(PairConstants {
            kind,
            i0,
            j0,
            c,
            bounds_ok,
            detail,
        })
    }
}
