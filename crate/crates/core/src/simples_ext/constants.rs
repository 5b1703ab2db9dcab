//! Ramification bounds for the Galois modules attached to objects of `L*`.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

/// Upper ramification numbers vanish above `2 − 1/p`; the different exponent
/// is below `3 − 1/p`; the root discriminant is below `p^{3 − 1/p}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RamificationBounds {
    pub p: u32,
    #[serde(serialize_with = "crate::json::ser_rational")]
    pub upper_v: BigRational,
    #[serde(serialize_with = "crate::json::ser_rational")]
    pub different_bound: BigRational,
    pub disc_bound: f64,
}

impl RamificationBounds {
    /// `p^{3−1/p}` to five decimal places.
    pub fn disc_decimal(&self) -> String {
        format!("{:.5}", self.disc_bound)
    }
}

pub fn ramification_bounds(p: u32) -> RamificationBounds {
    let pb = BigInt::from(p);
    let upper_v = BigRational::new(2 * &pb - 1, pb.clone());
    let different_bound = BigRational::new(3 * &pb - 1, pb);
    let exponent = 3.0 - 1.0 / p as f64;
    RamificationBounds {
        p,
        upper_v,
        different_bound,
        disc_bound: (p as f64).powf(exponent),
    }
}
