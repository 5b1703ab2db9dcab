//! Absolute number fields `Q[t]/(f)` in the power basis.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::qpoly::{p_valuation, resultant, PValuation, QPoly};
use super::UnitError;

/// How irreducibility of the defining polynomial is known.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Irreducibility {
    /// Accepted without proof.
    Trusted,
    /// Irreducible modulo this prime, hence over `Q`.
    CertifiedModulo(u64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NumberField {
    minpoly: QPoly,
    irreducibility: Irreducibility,
}

/// Coordinates in the power basis `1, t, …, t^{d−1}`; the stored polynomial is always reduced.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NfElement(QPoly);

impl NfElement {
    pub fn poly(&self) -> &QPoly {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

/// First shift `i` with `v_p(N(x − i)) ≠ 0`, or the last shift tried.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftedNorm {
    pub shift: u32,
    pub norm: BigRational,
    /// No shift in `0..p` gave a nonzero valuation.
    pub fell_through: bool,
}

impl NumberField {
    /// `minpoly` in ascending coefficients; must be monic of degree ≥ 1.
    pub fn new(minpoly: QPoly) -> Result<Self, UnitError> {
        match minpoly.degree() {
            None | Some(0) => return Err(UnitError::InvalidField("minimal polynomial must have degree ≥ 1".into())),
            Some(_) if !minpoly.lc().is_one() => {
                return Err(UnitError::InvalidField("minimal polynomial must be monic".into()))
            }
            Some(_) => {}
        }
        Ok(NumberField {
            minpoly,
            irreducibility: Irreducibility::Trusted,
        })
    }

    /// `Q` itself, presented as `Q[t]/(t)`.
    pub fn rationals() -> Self {
        NumberField {
            minpoly: QPoly::from_ints(&[0, 1]),
            irreducibility: Irreducibility::CertifiedModulo(2),
        }
    }

    /// Upgrade trust to proof by checking irreducibility modulo `ell`.
    pub fn certify(mut self, ell: u64) -> Result<Self, UnitError> {
        let reduced = reduce_mod(&self.minpoly, ell)
            .ok_or_else(|| UnitError::InvalidField(format!("{ell} divides a denominator of the minimal polynomial")))?;
        if !is_small_prime(ell) || !irreducible_mod(&reduced, ell) {
            return Err(UnitError::InvalidField(format!(
                "the minimal polynomial is not irreducible modulo {ell}"
            )));
        }
        self.irreducibility = Irreducibility::CertifiedModulo(ell);
        Ok(self)
    }

    pub fn degree(&self) -> usize {
        self.minpoly.degree().expect("validated on construction")
    }

    pub fn minpoly(&self) -> &QPoly {
        &self.minpoly
    }

    pub fn irreducibility(&self) -> &Irreducibility {
        &self.irreducibility
    }

    pub fn element(&self, coeffs: Vec<BigRational>) -> Result<NfElement, UnitError> {
        if coeffs.len() > self.degree() {
            return Err(UnitError::InvalidElement(format!(
                "{} coordinates given for a degree-{} field",
                coeffs.len(),
                self.degree()
            )));
        }
        Ok(NfElement(QPoly::new(coeffs)))
    }

    pub fn from_poly(&self, poly: &QPoly) -> NfElement {
        NfElement(poly.rem(&self.minpoly))
    }

    pub fn from_rational(&self, c: BigRational) -> NfElement {
        NfElement(QPoly::constant(c))
    }

    pub fn from_int(&self, c: i64) -> NfElement {
        self.from_rational(BigRational::from_integer(c.into()))
    }

    /// The class of `t`.
    pub fn generator(&self) -> NfElement {
        self.from_poly(&QPoly::from_ints(&[0, 1]))
    }

    /// Power-basis coordinates, padded to length `d`.
    pub fn coords(&self, x: &NfElement) -> Vec<BigRational> {
        (0..self.degree()).map(|i| x.0.coeff(i)).collect()
    }

    pub fn add(&self, x: &NfElement, y: &NfElement) -> NfElement {
        NfElement(x.0.add(&y.0))
    }

    pub fn sub(&self, x: &NfElement, y: &NfElement) -> NfElement {
        NfElement(x.0.sub(&y.0))
    }

    pub fn mul(&self, x: &NfElement, y: &NfElement) -> NfElement {
        self.from_poly(&x.0.mul(&y.0))
    }

    pub fn pow(&self, x: &NfElement, mut e: u64) -> NfElement {
        let mut base = x.clone();
        let mut acc = self.from_int(1);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Inverse through `s·x + t·f = 1`.
    pub fn inv(&self, x: &NfElement) -> Option<NfElement> {
        if x.is_zero() {
            return None;
        }
        let (g, s, _) = x.0.xgcd(&self.minpoly);
        (g.degree() == Some(0)).then(|| self.from_poly(&s))
    }

    pub fn div(&self, x: &NfElement, y: &NfElement) -> Option<NfElement> {
        self.inv(y).map(|yi| self.mul(x, &yi))
    }

    /// `N(x) = Res(f, x(t))`, which equals `∏ x(θ_i)` for monic `f`.
    pub fn norm(&self, x: &NfElement) -> BigRational {
        match x.0.degree() {
            None => BigRational::zero(),
            Some(0) => num_traits::pow(x.0.coeff(0), self.degree()),
            Some(_) => resultant(&self.minpoly, &x.0),
        }
    }

    pub fn shifted_norm(&self, x: &NfElement, p: u32) -> ShiftedNorm {
        let mut last = None;
        for i in 0..p {
            let norm = self.norm(&self.sub(x, &self.from_int(i as i64)));
            if p_valuation(&norm, p) != PValuation::Finite(0) {
                return ShiftedNorm {
                    shift: i,
                    norm,
                    fell_through: false,
                };
            }
            last = Some((i, norm));
        }
        let (shift, norm) = last.expect("p ≥ 2");
        ShiftedNorm {
            shift,
            norm,
            fell_through: true,
        }
    }

    /// `v_p` of the shifted norm, possibly infinite.
    pub fn a_val(&self, x: &NfElement, p: u32) -> PValuation {
        p_valuation(&self.shifted_norm(x, p).norm, p)
    }

    /// As [`Self::a_val`], but a zero shifted norm is an error.
    pub fn a_val_finite(&self, x: &NfElement, p: u32) -> Result<i64, UnitError> {
        match self.a_val(x, p) {
            PValuation::Finite(v) => Ok(v),
            PValuation::Infinite => Err(UnitError::UndefinedValuation),
        }
    }
}

fn is_small_prime(n: u64) -> bool {
    (2..(1 << 31)).contains(&n) && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// Coefficients mod `ell` (ascending), or `None` if a denominator vanishes.
fn reduce_mod(f: &QPoly, ell: u64) -> Option<Vec<u64>> {
    let m = BigInt::from(ell);
    f.coeffs()
        .iter()
        .map(|c| {
            let den = c.denom().mod_floor(&m);
            if den.is_zero() {
                return None;
            }
            let num = c.numer().mod_floor(&m).to_u64()?;
            let inv = mod_pow(den.to_u64()?, ell - 2, ell);
            Some(num * inv % ell)
        })
        .collect()
}

fn mod_pow(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

type Fp = Vec<u64>;

fn fp_trim(mut a: Fp) -> Fp {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn fp_rem(a: &[u64], b: &[u64], ell: u64) -> Fp {
    let mut r = fp_trim(a.to_vec());
    let db = b.len() - 1;
    let inv = mod_pow(b[db], ell - 2, ell);
    while r.len() > db {
        let top = r.len() - 1;
        let c = r[top] * inv % ell;
        for (k, &bk) in b.iter().enumerate() {
            let idx = top - db + k;
            r[idx] = (r[idx] + ell - c * bk % ell) % ell;
        }
        r = fp_trim(r);
    }
    r
}

fn fp_mulmod(a: &[u64], b: &[u64], f: &[u64], ell: u64) -> Fp {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % ell;
        }
    }
    fp_rem(&out, f, ell)
}

fn fp_gcd(a: &[u64], b: &[u64], ell: u64) -> Fp {
    let (mut a, mut b) = (fp_trim(a.to_vec()), fp_trim(b.to_vec()));
    while !b.is_empty() {
        let r = fp_rem(&a, &b, ell);
        a = std::mem::replace(&mut b, r);
    }
    a
}

/// Ben-Or: `f` of degree `d` is irreducible iff `gcd(x^{ℓ^i} − x, f) = 1` for `i ≤ d/2`.
fn irreducible_mod(f: &[u64], ell: u64) -> bool {
    let f = fp_trim(f.to_vec());
    let d = f.len().saturating_sub(1);
    if d == 0 {
        return false;
    }
    let x: Fp = fp_rem(&[0, 1], &f, ell);
    let mut power = x.clone();
    for _ in 0..d / 2 {
        let mut next = vec![1u64];
        let mut base = power.clone();
        let mut e = ell;
        while e > 0 {
            if e & 1 == 1 {
                next = fp_mulmod(&next, &base, &f, ell);
            }
            base = fp_mulmod(&base, &base, &f, ell);
            e >>= 1;
        }
        power = next;
        let n = power.len().max(x.len());
        let diff: Fp = (0..n)
            .map(|i| (power.get(i).copied().unwrap_or(0) + ell - x.get(i).copied().unwrap_or(0)) % ell)
            .collect();
        if fp_gcd(&diff, &f, ell).len() != 1 {
            return false;
        }
    }
    true
}

/// Nearest `f64`, for numerical cross-checks.
pub fn approx(x: &BigRational) -> f64 {
    x.numer().to_f64().unwrap_or(f64::NAN) / x.denom().to_f64().unwrap_or(f64::NAN)
}
