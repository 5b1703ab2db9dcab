//! Truncated power series `F_q[[u]] / u^PREC` with the Frobenius lift
//! `σ(u) = u^p` and the derivation `N(u) = −u`.

use super::field::{Fq, GaloisField};

/// Coefficients of `u^0, …, u^{PREC−1}`; the length always equals the ring's precision.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TruncSeries(Vec<Fq>);

impl TruncSeries {
    pub fn coeffs(&self) -> &[Fq] {
        &self.0
    }

    pub fn coeff(&self, i: usize) -> Fq {
        self.0.get(i).copied().unwrap_or(Fq::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }

    /// Smallest exponent with a nonzero coefficient, or the precision for zero.
    pub fn val(&self) -> usize {
        self.0.iter().position(|c| !c.is_zero()).unwrap_or(self.0.len())
    }

    pub fn prec(&self) -> usize {
        self.0.len()
    }
}

/// The ring `F_q[u] / u^prec`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesRing {
    field: GaloisField,
    prec: usize,
}

impl SeriesRing {
    pub fn new(field: GaloisField, prec: usize) -> Self {
        assert!(prec > 0, "precision must be positive");
        SeriesRing { field, prec }
    }

    /// Precision `3p`.
    pub fn with_default_prec(field: GaloisField) -> Self {
        let prec = 3 * field.p() as usize;
        SeriesRing::new(field, prec)
    }

    pub fn field(&self) -> &GaloisField {
        &self.field
    }

    pub fn prec(&self) -> usize {
        self.prec
    }

    pub fn p(&self) -> u32 {
        self.field.p()
    }

    pub fn with_prec(&self, prec: usize) -> SeriesRing {
        SeriesRing::new(self.field.clone(), prec)
    }

    pub fn zero(&self) -> TruncSeries {
        TruncSeries(vec![Fq::ZERO; self.prec])
    }

    pub fn one(&self) -> TruncSeries {
        self.constant(Fq::ONE)
    }

    pub fn constant(&self, c: Fq) -> TruncSeries {
        self.monomial(c, 0)
    }

    /// `c·u^k`, zero when `k ≥ PREC`.
    pub fn monomial(&self, c: Fq, k: usize) -> TruncSeries {
        let mut s = self.zero();
        if k < self.prec {
            s.0[k] = c;
        }
        s
    }

    /// `u^k`.
    pub fn u_pow(&self, k: usize) -> TruncSeries {
        self.monomial(Fq::ONE, k)
    }

    /// Series with the given leading coefficients; the rest are zero, extra ones dropped.
    pub fn from_coeffs(&self, coeffs: &[Fq]) -> TruncSeries {
        let mut s = self.zero();
        for (slot, &c) in s.0.iter_mut().zip(coeffs) {
            *slot = c;
        }
        s
    }

    /// Reinterpret a series of another precision in this ring.
    pub fn coerce(&self, f: &TruncSeries) -> TruncSeries {
        self.from_coeffs(f.coeffs())
    }

    pub fn add(&self, a: &TruncSeries, b: &TruncSeries) -> TruncSeries {
        TruncSeries(a.0.iter().zip(&b.0).map(|(&x, &y)| self.field.add(x, y)).collect())
    }

    pub fn sub(&self, a: &TruncSeries, b: &TruncSeries) -> TruncSeries {
        TruncSeries(a.0.iter().zip(&b.0).map(|(&x, &y)| self.field.sub(x, y)).collect())
    }

    pub fn neg(&self, a: &TruncSeries) -> TruncSeries {
        TruncSeries(a.0.iter().map(|&x| self.field.neg(x)).collect())
    }

    pub fn scale(&self, c: Fq, a: &TruncSeries) -> TruncSeries {
        TruncSeries(a.0.iter().map(|&x| self.field.mul(c, x)).collect())
    }

    pub fn mul(&self, a: &TruncSeries, b: &TruncSeries) -> TruncSeries {
        let f = &self.field;
        let mut out = self.zero();
        let va = a.val();
        let vb = b.val();
        for i in va..self.prec {
            let ai = a.0[i];
            if ai.is_zero() {
                continue;
            }
            for j in vb..self.prec - i {
                let bj = b.0[j];
                if !bj.is_zero() {
                    out.0[i + j] = f.add(out.0[i + j], f.mul(ai, bj));
                }
            }
        }
        out
    }

    /// Multiply by `u^k`.
    pub fn shift_up(&self, a: &TruncSeries, k: usize) -> TruncSeries {
        let mut out = self.zero();
        for i in 0..self.prec.saturating_sub(k) {
            out.0[i + k] = a.0[i];
        }
        out
    }

    /// Divide by `u^k`, dropping the low coefficients; the top `k` become zero.
    pub fn shift_down(&self, a: &TruncSeries, k: usize) -> TruncSeries {
        let mut out = self.zero();
        for i in k..self.prec {
            out.0[i - k] = a.0[i];
        }
        out
    }

    /// Zero all coefficients of `u^i` with `i ≥ k`.
    pub fn truncate(&self, a: &TruncSeries, k: usize) -> TruncSeries {
        let mut out = a.clone();
        for c in out.0.iter_mut().skip(k) {
            *c = Fq::ZERO;
        }
        out
    }

    /// `σ(Σ c_i u^i) = Σ σ(c_i) u^{p·i}`.
    pub fn frobenius(&self, a: &TruncSeries) -> TruncSeries {
        self.frobenius_pow(a, 1)
    }

    /// `σ^k` for `k ≥ 0`.
    pub fn frobenius_pow(&self, a: &TruncSeries, k: u32) -> TruncSeries {
        let f = &self.field;
        let step = (self.p() as usize).saturating_pow(k);
        let mut out = self.zero();
        for (i, &c) in a.0.iter().enumerate() {
            match i.checked_mul(step) {
                Some(e) if e < self.prec => out.0[e] = f.frob(c, k as i64),
                _ => break,
            }
        }
        out
    }

    /// `σ^k` on the coefficients only, leaving `u` fixed.
    pub fn coeff_frob(&self, a: &TruncSeries, k: i64) -> TruncSeries {
        TruncSeries(a.0.iter().map(|&c| self.field.frob(c, k)).collect())
    }

    /// `N(Σ c_i u^i) = Σ (−i mod p)·c_i u^i`.
    pub fn derivation_n(&self, a: &TruncSeries) -> TruncSeries {
        let f = &self.field;
        TruncSeries(
            a.0.iter()
                .enumerate()
                .map(|(i, &c)| f.scale_int(c, -(i as i64)))
                .collect(),
        )
    }

    /// Inverse of a unit (nonzero constant term).
    pub fn inverse(&self, a: &TruncSeries) -> Option<TruncSeries> {
        let f = &self.field;
        let c0inv = f.inv(a.0[0])?;
        let mut out = self.zero();
        out.0[0] = c0inv;
        for k in 1..self.prec {
            let s = f.sum((1..=k).map(|i| f.mul(a.0[i], out.0[k - i])));
            out.0[k] = f.neg(f.mul(c0inv, s));
        }
        Some(out)
    }

    /// Split `a = Σ_{t<p} u^t σ(d_t)` and return `d_0`, the coefficientwise
    /// `σ^{-1}` of the part supported on exponents divisible by `p`.
    pub fn sigma_root_part(&self, a: &TruncSeries) -> TruncSeries {
        let p = self.p() as usize;
        let mut out = self.zero();
        for k in 0..self.prec.div_ceil(p) {
            out.0[k] = self.field.frob(a.0[k * p], -1);
        }
        out
    }

    /// Keep only the coefficients of `u^i` with `p | i`.
    pub fn p_divisible_part(&self, a: &TruncSeries) -> TruncSeries {
        let p = self.p() as usize;
        TruncSeries(
            a.0.iter()
                .enumerate()
                .map(|(i, &c)| if i % p == 0 { c } else { Fq::ZERO })
                .collect(),
        )
    }

    /// Whether every exponent with a nonzero coefficient is divisible by `p`.
    pub fn in_sigma_image(&self, a: &TruncSeries) -> bool {
        let p = self.p() as usize;
        a.0.iter().enumerate().all(|(i, c)| i % p == 0 || c.is_zero())
    }
}
