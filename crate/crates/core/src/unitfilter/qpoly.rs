//! Dense univariate polynomials over `Q` and `Z`, and three independent
//! resultant algorithms.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Coefficients in ascending degree with no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QPoly(Vec<BigRational>);

impl QPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        QPoly(coeffs)
    }

    pub fn zero() -> Self {
        QPoly(Vec::new())
    }

    pub fn constant(c: BigRational) -> Self {
        QPoly::new(vec![c])
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        QPoly::new(coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect())
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn lc(&self) -> BigRational {
        self.0.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.0.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn add(&self, other: &QPoly) -> QPoly {
        let n = self.0.len().max(other.0.len());
        QPoly::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn neg(&self) -> QPoly {
        QPoly(self.0.iter().map(|c| -c).collect())
    }

    pub fn sub(&self, other: &QPoly) -> QPoly {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &BigRational) -> QPoly {
        QPoly::new(self.0.iter().map(|x| x * c).collect())
    }

    pub fn mul(&self, other: &QPoly) -> QPoly {
        if self.is_zero() || other.is_zero() {
            return QPoly::zero();
        }
        let mut out = vec![BigRational::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        QPoly::new(out)
    }

    /// Euclidean division; panics on division by zero.
    pub fn div_rem(&self, divisor: &QPoly) -> (QPoly, QPoly) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lc = divisor.lc();
        let mut rem = self.0.clone();
        let mut quot = vec![BigRational::zero(); self.0.len().saturating_sub(dd)];
        while rem.len() > dd && !rem.is_empty() {
            let top = rem.len() - 1;
            let c = &rem[top] / &lc;
            let shift = top - dd;
            for (k, d) in divisor.0.iter().enumerate() {
                rem[shift + k] -= &c * d;
            }
            quot[shift] = c;
            rem.pop();
            while rem.last().is_some_and(Zero::is_zero) {
                rem.pop();
            }
        }
        (QPoly::new(quot), QPoly::new(rem))
    }

    pub fn rem(&self, divisor: &QPoly) -> QPoly {
        self.div_rem(divisor).1
    }

    /// `(g, s, t)` with `s·self + t·other = g` and `g` monic (or zero).
    pub fn xgcd(&self, other: &QPoly) -> (QPoly, QPoly, QPoly) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (QPoly::constant(BigRational::one()), QPoly::zero());
        let (mut t0, mut t1) = (QPoly::zero(), QPoly::constant(BigRational::one()));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s2 = s0.sub(&q.mul(&s1));
            let t2 = t0.sub(&q.mul(&t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
            t0 = std::mem::replace(&mut t1, t2);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = BigRational::one() / r0.lc();
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    /// The integer polynomial `c·self` with `c > 0` the lcm of the denominators.
    pub fn clear_denominators(&self) -> (BigInt, Vec<BigInt>) {
        let den = self.0.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints = self.0.iter().map(|c| (c * BigRational::from_integer(den.clone())).to_integer()).collect();
        (den, ints)
    }
}

fn ipoly_trim(mut p: Vec<BigInt>) -> Vec<BigInt> {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn content(p: &[BigInt]) -> BigInt {
    p.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c))
}

/// `lc(b)^{deg a − deg b + 1}·a mod b` over `Z`.
fn pseudo_rem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let db = b.len() - 1;
    let lc = b[db].clone();
    let mut rem = a.to_vec();
    let mut e = a.len() - b.len() + 1;
    while rem.len() > db && !rem.is_empty() {
        let top = rem.len() - 1;
        let c = rem[top].clone();
        for x in rem.iter_mut() {
            *x *= &lc;
        }
        let shift = top - db;
        for (k, d) in b.iter().enumerate() {
            rem[shift + k] -= &c * d;
        }
        rem.pop();
        e -= 1;
        rem = ipoly_trim(rem);
    }
    let scale = num_traits::pow(lc, e);
    rem.into_iter().map(|x| x * &scale).collect()
}

fn resultant_int(a: &[BigInt], b: &[BigInt]) -> BigInt {
    let (mut a, mut b) = (ipoly_trim(a.to_vec()), ipoly_trim(b.to_vec()));
    if a.is_empty() || b.is_empty() {
        return BigInt::zero();
    }
    let mut sign = BigInt::one();
    if a.len() < b.len() {
        if (a.len() - 1) % 2 == 1 && (b.len() - 1) % 2 == 1 {
            sign = -sign;
        }
        std::mem::swap(&mut a, &mut b);
    }
    let (ca, cb) = (content(&a), content(&b));
    let t = num_traits::pow(ca.clone(), b.len() - 1) * num_traits::pow(cb.clone(), a.len() - 1);
    let mut a: Vec<BigInt> = a.iter().map(|x| x / &ca).collect();
    let mut b: Vec<BigInt> = b.iter().map(|x| x / &cb).collect();
    let (mut g, mut h) = (BigInt::one(), BigInt::one());
    loop {
        let (da, db) = (a.len() - 1, b.len() - 1);
        if db == 0 {
            // h ← h^{1−deg A}·lc(B)^{deg A}
            let num = num_traits::pow(b[0].clone(), da);
            let h_final = if da == 0 {
                h.clone() * num
            } else {
                num / num_traits::pow(h.clone(), da - 1)
            };
            return sign * t * h_final;
        }
        let delta = da - db;
        if da % 2 == 1 && db % 2 == 1 {
            sign = -sign;
        }
        let r = pseudo_rem(&a, &b);
        if r.is_empty() {
            return BigInt::zero();
        }
        let div = &g * num_traits::pow(h.clone(), delta);
        a = std::mem::replace(&mut b, r.into_iter().map(|x| x / &div).collect());
        g = a[a.len() - 1].clone();
        h = if delta == 0 {
            h
        } else {
            num_traits::pow(g.clone(), delta) / num_traits::pow(h.clone(), delta - 1)
        };
    }
}

/// `Res(f, g)` by the subresultant remainder sequence on integer multiples.
pub fn resultant(f: &QPoly, g: &QPoly) -> BigRational {
    let (Some(df), Some(dg)) = (f.degree(), g.degree()) else {
        return BigRational::zero();
    };
    let (cf, fi) = f.clear_denominators();
    let (cg, gi) = g.clear_denominators();
    let r = resultant_int(&fi, &gi);
    BigRational::new(r, num_traits::pow(cf, dg) * num_traits::pow(cg, df))
}

/// `Res(f, g) = (−1)^{mn}·lc(g)^{m − deg r}·Res(g, f mod g)` over `Q`.
pub fn resultant_euclid(f: &QPoly, g: &QPoly) -> BigRational {
    let (Some(m), Some(n)) = (f.degree(), g.degree()) else {
        return BigRational::zero();
    };
    if n == 0 {
        return num_traits::pow(g.lc(), m);
    }
    let r = f.rem(g);
    let Some(dr) = r.degree() else {
        return BigRational::zero();
    };
    let sign = if (m * n) % 2 == 1 { -BigRational::one() } else { BigRational::one() };
    sign * num_traits::pow(g.lc(), m - dr) * resultant_euclid(g, &r)
}

/// Determinant of the Sylvester matrix by fraction-exact elimination.
pub fn resultant_sylvester(f: &QPoly, g: &QPoly) -> BigRational {
    let (Some(m), Some(n)) = (f.degree(), g.degree()) else {
        return BigRational::zero();
    };
    let size = m + n;
    if size == 0 {
        return BigRational::one();
    }
    let mut rows = vec![vec![BigRational::zero(); size]; size];
    for r in 0..n {
        for k in 0..=m {
            rows[r][r + k] = f.coeff(m - k);
        }
    }
    for r in 0..m {
        for k in 0..=n {
            rows[n + r][r + k] = g.coeff(n - k);
        }
    }
    let mut det = BigRational::one();
    for col in 0..size {
        let Some(piv) = (col..size).find(|&r| !rows[r][col].is_zero()) else {
            return BigRational::zero();
        };
        if piv != col {
            rows.swap(piv, col);
            det = -det;
        }
        let pv = rows[col][col].clone();
        det *= &pv;
        for r in col + 1..size {
            if rows[r][col].is_zero() {
                continue;
            }
            let factor = &rows[r][col] / &pv;
            for c in col..size {
                let delta = &factor * &rows[col][c];
                rows[r][c] -= delta;
            }
        }
    }
    det
}

/// `v_p(x)`, infinite for zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PValuation {
    Finite(i64),
    Infinite,
}

impl std::fmt::Display for PValuation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PValuation::Finite(v) => write!(f, "{v}"),
            PValuation::Infinite => write!(f, "+Infinity"),
        }
    }
}

fn int_valuation(n: &BigInt, p: &BigInt) -> i64 {
    let mut n = n.abs();
    let mut v = 0;
    while (&n % p).is_zero() {
        n /= p;
        v += 1;
    }
    v
}

pub fn p_valuation(x: &BigRational, p: u32) -> PValuation {
    if x.is_zero() {
        return PValuation::Infinite;
    }
    let p = BigInt::from(p);
    PValuation::Finite(int_valuation(x.numer(), &p) - int_valuation(x.denom(), &p))
}
