//! Finite fields `F_{p^m}` presented by an explicit irreducible modulus.
//!
//! An element is encoded by the integer `c_0 + c_1 p + ... + c_{m-1} p^{m-1}`
//! built from its power-basis coordinates. Multiplication goes through
//! exp/log tables for a primitive element and addition through Zech
//! logarithms, so every operation is a couple of table lookups.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest field order for which tables are built.
pub const MAX_FIELD_ORDER: u64 = 1 << 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("characteristic {0} is not an odd prime")]
    BadCharacteristic(u32),
    #[error("modulus has degree {found}, expected {expected}")]
    BadDegree { expected: usize, found: usize },
    #[error("modulus {modulus:?} is reducible over F_{p}")]
    Reducible { p: u32, modulus: Vec<u32> },
    #[error("field order {0} exceeds the supported table size")]
    TooLarge(u64),
    #[error("F_{from} does not embed in F_{into}")]
    NoEmbedding { from: u32, into: u32 },
    #[error("coordinate vector of length {len} does not fit a degree-{m} field")]
    BadCoordinates { len: usize, m: usize },
}

/// The data defining `F_{p^m} = F_p[x]/(modulus)`; coefficients little-endian.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u32,
    pub m: usize,
    pub modulus: Vec<u32>,
}

impl FieldSpec {
    /// The prime field, presented by the modulus `x`.
    pub fn prime(p: u32) -> Self {
        FieldSpec {
            p,
            m: 1,
            modulus: vec![0, 1],
        }
    }

    /// The monic irreducible polynomial of degree `m` whose lower coefficients,
    /// read as a base-`p` integer, are smallest.
    pub fn first_irreducible(p: u32, m: usize) -> Result<Self, FieldError> {
        check_prime(p)?;
        if m == 0 {
            return Err(FieldError::BadDegree { expected: 1, found: 0 });
        }
        let order = (p as u64).checked_pow(m as u32).filter(|&q| q <= MAX_FIELD_ORDER);
        let order = order.ok_or(FieldError::TooLarge(u64::MAX))?;
        for n in 0..order {
            let mut modulus = digits(n, p, m);
            modulus.push(1);
            if is_irreducible(&modulus, p) {
                return Ok(FieldSpec { p, m, modulus });
            }
        }
        unreachable!("irreducible polynomials exist in every degree")
    }
}

fn check_prime(p: u32) -> Result<(), FieldError> {
    let prime = p >= 3 && (2..).take_while(|d: &u32| d * d <= p).all(|d| !p.is_multiple_of(d));
    if prime {
        Ok(())
    } else {
        Err(FieldError::BadCharacteristic(p))
    }
}

fn digits(mut n: u64, p: u32, len: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push((n % p as u64) as u32);
        n /= p as u64;
    }
    out
}

// Dense polynomial helpers over F_p, little-endian, trimmed.

fn trim(a: &mut Vec<u32>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn inv_mod(a: u32, p: u32) -> u32 {
    let mut r = 1u64;
    let mut b = a as u64;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p as u64;
        }
        b = b * b % p as u64;
        e >>= 1;
    }
    r as u32
}

fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let lead_inv = inv_mod(b[db], p) as u64;
    while r.len() > db {
        let top = r.len() - 1;
        let c = r[top] as u64 * lead_inv % p as u64;
        let shift = top - db;
        for (i, &bi) in b.iter().enumerate() {
            let sub = c * bi as u64 % p as u64;
            r[shift + i] = ((r[shift + i] as u64 + p as u64 - sub) % p as u64) as u32;
        }
        trim(&mut r);
    }
    r
}

fn poly_mul_mod(a: &[u32], b: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        for (j, &bj) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + ai as u64 * bj as u64) % p as u64;
        }
    }
    let prod: Vec<u32> = prod.into_iter().map(|c| c as u32).collect();
    poly_rem(&prod, modulus, p)
}

fn poly_gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = poly_rem(&x, &y, p);
        x = y;
        y = r;
    }
    x
}

/// Rabin-style test: `f` of degree `m` is irreducible iff
/// `gcd(x^{p^k} - x, f) = 1` for every `k <= m/2`.
pub(crate) fn is_irreducible(f: &[u32], p: u32) -> bool {
    let mut f = f.to_vec();
    trim(&mut f);
    if f.len() < 2 {
        return false;
    }
    let m = f.len() - 1;
    let mut xp = vec![0, 1];
    for _ in 0..m / 2 {
        // xp <- xp^p mod f
        let mut acc = vec![1u32];
        for _ in 0..p {
            acc = poly_mul_mod(&acc, &xp, &f, p);
        }
        xp = acc;
        let mut diff = xp.clone();
        diff.resize(diff.len().max(2), 0);
        diff[1] = (diff[1] + p - 1) % p;
        trim(&mut diff);
        if diff.is_empty() || poly_gcd(&diff, &f, p).len() > 1 {
            return false;
        }
    }
    true
}

/// An element of a [`GaloisField`], identified by its coordinate encoding.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fq(u32);

impl Fq {
    pub const ZERO: Fq = Fq(0);
    pub const ONE: Fq = Fq(1);

    pub fn encoding(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

const NO_LOG: u32 = u32::MAX;

struct Tables {
    spec: FieldSpec,
    q: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
    zech: Vec<u32>,
    /// `p^k mod (q-1)` for `k < m`.
    frob_exp: Vec<u64>,
}

/// Handle to `F_{p^m}`; cheap to clone, all arithmetic goes through it.
#[derive(Clone)]
pub struct GaloisField(Arc<Tables>);

impl fmt::Debug for GaloisField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{} mod {:?}", self.p(), self.m(), self.0.spec.modulus)
    }
}

impl PartialEq for GaloisField {
    fn eq(&self, other: &Self) -> bool {
        self.0.spec == other.0.spec
    }
}

impl Eq for GaloisField {}

impl GaloisField {
    pub fn new(spec: FieldSpec) -> Result<Self, FieldError> {
        let FieldSpec { p, m, modulus } = spec;
        check_prime(p)?;
        let mut modulus: Vec<u32> = modulus.into_iter().map(|c| c % p).collect();
        trim(&mut modulus);
        if modulus.len() != m + 1 || m == 0 {
            return Err(FieldError::BadDegree {
                expected: m,
                found: modulus.len().saturating_sub(1),
            });
        }
        let lead_inv = inv_mod(modulus[m], p) as u64;
        for c in modulus.iter_mut() {
            *c = (*c as u64 * lead_inv % p as u64) as u32;
        }
        if !is_irreducible(&modulus, p) {
            return Err(FieldError::Reducible { p, modulus });
        }
        let q64 = (p as u64)
            .checked_pow(m as u32)
            .filter(|&q| q <= MAX_FIELD_ORDER)
            .ok_or(FieldError::TooLarge((p as f64).powi(m as i32) as u64))?;
        let q = q64 as u32;
        let spec = FieldSpec { p, m, modulus };
        let exp = primitive_powers(&spec, q);
        let mut log = vec![NO_LOG; q as usize];
        for (k, &e) in exp.iter().enumerate() {
            log[e as usize] = k as u32;
        }
        let zech = (0..q - 1)
            .map(|n| {
                let one_plus = add_encoded(1, exp[n as usize], p, m);
                if one_plus == 0 {
                    NO_LOG
                } else {
                    log[one_plus as usize]
                }
            })
            .collect();
        let mut frob_exp = Vec::with_capacity(m);
        let mut pk = 1u64;
        for _ in 0..m {
            frob_exp.push(pk % (q64 - 1));
            pk = pk * p as u64 % (q64 - 1).max(1);
        }
        Ok(GaloisField(Arc::new(Tables {
            spec,
            q,
            exp,
            log,
            zech,
            frob_exp,
        })))
    }

    pub fn prime(p: u32) -> Result<Self, FieldError> {
        GaloisField::new(FieldSpec::prime(p))
    }

    /// `F_{p^m}` with the modulus chosen by [`FieldSpec::first_irreducible`].
    pub fn with_degree(p: u32, m: usize) -> Result<Self, FieldError> {
        GaloisField::new(FieldSpec::first_irreducible(p, m)?)
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.0.spec
    }

    pub fn p(&self) -> u32 {
        self.0.spec.p
    }

    pub fn m(&self) -> usize {
        self.0.spec.m
    }

    pub fn q(&self) -> u32 {
        self.0.q
    }

    pub fn zero(&self) -> Fq {
        Fq::ZERO
    }

    pub fn one(&self) -> Fq {
        Fq::ONE
    }

    /// Image of an integer in the prime field.
    pub fn from_int(&self, n: i64) -> Fq {
        Fq(n.rem_euclid(self.p() as i64) as u32)
    }

    /// Image of an integer in the prime field, if the element lies there.
    pub fn to_prime(&self, a: Fq) -> Option<u32> {
        (a.0 < self.p()).then_some(a.0)
    }

    pub fn from_coords(&self, coords: &[u32]) -> Result<Fq, FieldError> {
        if coords.len() > self.m() {
            return Err(FieldError::BadCoordinates {
                len: coords.len(),
                m: self.m(),
            });
        }
        let p = self.p();
        let enc = coords
            .iter()
            .rev()
            .fold(0u64, |acc, &c| acc * p as u64 + (c % p) as u64);
        Ok(Fq(enc as u32))
    }

    /// Power-basis coordinates, length `m`.
    pub fn coords(&self, a: Fq) -> Vec<u32> {
        digits(a.0 as u64, self.p(), self.m())
    }

    /// Element with the given index in `0..q`; indices enumerate the field.
    pub fn element(&self, index: u32) -> Fq {
        debug_assert!(index < self.q());
        Fq(index)
    }

    pub fn elements(&self) -> impl Iterator<Item = Fq> {
        (0..self.q()).map(Fq)
    }

    pub fn add(&self, a: Fq, b: Fq) -> Fq {
        if a.0 == 0 {
            return b;
        }
        if b.0 == 0 {
            return a;
        }
        let t = &self.0;
        let n = t.q - 1;
        let la = t.log[a.0 as usize];
        let lb = t.log[b.0 as usize];
        let z = t.zech[((lb + n - la) % n) as usize];
        if z == NO_LOG {
            Fq::ZERO
        } else {
            Fq(t.exp[((la as u64 + z as u64) % n as u64) as usize])
        }
    }

    pub fn neg(&self, a: Fq) -> Fq {
        if a.0 == 0 {
            return a;
        }
        let t = &self.0;
        let n = t.q - 1;
        Fq(t.exp[((t.log[a.0 as usize] + n / 2) % n) as usize])
    }

    pub fn sub(&self, a: Fq, b: Fq) -> Fq {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Fq, b: Fq) -> Fq {
        if a.0 == 0 || b.0 == 0 {
            return Fq::ZERO;
        }
        let t = &self.0;
        let n = (t.q - 1) as u64;
        let s = t.log[a.0 as usize] as u64 + t.log[b.0 as usize] as u64;
        Fq(t.exp[(s % n) as usize])
    }

    pub fn inv(&self, a: Fq) -> Option<Fq> {
        if a.0 == 0 {
            return None;
        }
        let t = &self.0;
        let n = t.q - 1;
        Some(Fq(t.exp[((n - t.log[a.0 as usize]) % n) as usize]))
    }

    pub fn div(&self, a: Fq, b: Fq) -> Option<Fq> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    pub fn pow(&self, a: Fq, e: u64) -> Fq {
        if e == 0 {
            return Fq::ONE;
        }
        if a.0 == 0 {
            return Fq::ZERO;
        }
        let t = &self.0;
        let n = (t.q - 1) as u64;
        let l = t.log[a.0 as usize] as u64;
        Fq(t.exp[((l * (e % n)) % n) as usize])
    }

    /// `σ^k(a) = a^{p^k}`; `k` may be negative.
    pub fn frob(&self, a: Fq, k: i64) -> Fq {
        if a.0 == 0 {
            return a;
        }
        let t = &self.0;
        let kk = k.rem_euclid(self.m() as i64) as usize;
        let n = (t.q - 1) as u64;
        let l = t.log[a.0 as usize] as u64;
        Fq(t.exp[((l * t.frob_exp[kk]) % n) as usize])
    }

    /// Whether `a` lies in the subfield `F_{p^d}`.
    pub fn in_subfield(&self, a: Fq, d: usize) -> bool {
        self.pow(a, (self.p() as u64).pow(d as u32)) == a
    }

    pub fn sum<I: IntoIterator<Item = Fq>>(&self, it: I) -> Fq {
        it.into_iter().fold(Fq::ZERO, |acc, x| self.add(acc, x))
    }

    /// Coordinates as prime-field elements, for `F_p`-linearization.
    pub fn fp_coords(&self, a: Fq) -> Vec<Fq> {
        self.coords(a).into_iter().map(Fq).collect()
    }

    /// Inverse of [`GaloisField::fp_coords`].
    pub fn from_fp_coords(&self, c: &[Fq]) -> Fq {
        let p = self.p() as u64;
        Fq(c.iter().rev().fold(0u64, |acc, x| acc * p + (x.0 as u64 % p)) as u32)
    }

    /// Scalar multiple by an integer.
    pub fn scale_int(&self, a: Fq, n: i64) -> Fq {
        self.mul(self.from_int(n), a)
    }
}

/// A field homomorphism `F_{p^m} → F_{p^n}` for `m | n`, fixed by sending the
/// generator to the least-encoded root of its modulus.
#[derive(Clone, Debug)]
pub struct FieldEmbedding {
    source: GaloisField,
    target: GaloisField,
    powers: Vec<Fq>,
}

impl FieldEmbedding {
    pub fn new(source: &GaloisField, target: &GaloisField) -> Result<Self, FieldError> {
        let none = || FieldError::NoEmbedding {
            from: source.q(),
            into: target.q(),
        };
        if source.p() != target.p() || !target.m().is_multiple_of(source.m()) {
            return Err(none());
        }
        let modulus = &source.spec().modulus;
        let eval = |x: Fq| {
            modulus
                .iter()
                .rev()
                .fold(Fq::ZERO, |acc, &c| target.add(target.mul(acc, x), target.from_int(c as i64)))
        };
        let root = target.elements().find(|&x| eval(x).is_zero()).ok_or_else(none)?;
        let powers = (0..source.m()).map(|k| target.pow(root, k as u64)).collect();
        Ok(FieldEmbedding {
            source: source.clone(),
            target: target.clone(),
            powers,
        })
    }

    pub fn source(&self) -> &GaloisField {
        &self.source
    }

    pub fn target(&self) -> &GaloisField {
        &self.target
    }

    pub fn apply(&self, a: Fq) -> Fq {
        let t = &self.target;
        t.sum(
            self.source
                .coords(a)
                .into_iter()
                .zip(&self.powers)
                .map(|(c, &x)| t.scale_int(x, c as i64)),
        )
    }
}

fn add_encoded(a: u32, b: u32, p: u32, m: usize) -> u32 {
    let da = digits(a as u64, p, m);
    let db = digits(b as u64, p, m);
    da.iter()
        .zip(&db)
        .rev()
        .fold(0u64, |acc, (&x, &y)| acc * p as u64 + ((x + y) % p) as u64) as u32
}

fn primitive_powers(spec: &FieldSpec, q: u32) -> Vec<u32> {
    let p = spec.p;
    let m = spec.m;
    let encode = |c: &[u32]| c.iter().rev().fold(0u64, |acc, &x| acc * p as u64 + x as u64) as u32;
    for cand in 1..q {
        let g = {
            let mut d = digits(cand as u64, p, m);
            trim(&mut d);
            d
        };
        let mut powers = Vec::with_capacity(q as usize - 1);
        let mut x = vec![1u32];
        loop {
            let mut padded = x.clone();
            padded.resize(m, 0);
            powers.push(encode(&padded));
            x = poly_mul_mod(&x, &g, &spec.modulus, p);
            if x == [1] || powers.len() >= q as usize - 1 {
                break;
            }
        }
        if powers.len() == q as usize - 1 && x == [1] {
            return powers;
        }
    }
    unreachable!("the multiplicative group of a finite field is cyclic")
}
