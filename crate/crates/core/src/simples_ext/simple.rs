//! The simple objects `L(r)` and their Galois characters.

use num_bigint::BigInt;
use serde::Serialize;

use super::ExtError;
use crate::base_arith::{SeriesMatrix, SeriesRing};
use crate::digits::DigitRational;
use crate::objects::{ObjectError, PhiNModule};

/// Filtration matrix of `⊕ W₁l_i` with `φ(u^{e_i}l_i) = l_{i+1}`: column `k` is `u^{e_{k−1}}·e_{k−1}`.
pub fn cyclic_filtration(ring: &SeriesRing, exps: &[usize]) -> SeriesMatrix {
    let s = exps.len();
    let mut m = SeriesMatrix::zeros(ring, s, s);
    for k in 0..s {
        let prev = (k + s - 1) % s;
        m[(prev, k)] = ring.u_pow(exps[prev]);
    }
    m
}

pub fn build_simple(ring: &SeriesRing, r: &DigitRational) -> Result<PhiNModule, ExtError> {
    if r.p() != ring.p() {
        return Err(ObjectError::Shape(format!("r is written in base {} over characteristic {}", r.p(), ring.p())).into());
    }
    let exps: Vec<usize> = (0..r.minimal_period() as i64).map(|i| r.co_digit(i) as usize).collect();
    Ok(PhiNModule::crystalline(ring.clone(), cyclic_filtration(ring, &exps))?)
}

/// Tame character `r = m/(p^s − 1)` of the Galois module attached to `L(r)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SimpleCharacter {
    pub field_degree: usize,
    #[serde(serialize_with = "crate::json::ser_bigint")]
    pub exponent: BigInt,
    /// `r = 0`: the trivial character on the co-filtered side.
    pub etale: bool,
}

pub fn character_of_simple(r: &DigitRational) -> SimpleCharacter {
    SimpleCharacter {
        field_degree: r.minimal_period(),
        exponent: r.numerator(),
        etale: r.is_zero(),
    }
}
