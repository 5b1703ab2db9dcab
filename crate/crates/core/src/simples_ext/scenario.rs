//! The weight-one scenario at `p = 3`: extensions of `L(1/2)` by itself.

use std::collections::BTreeSet;

use super::context::ExtContext;
use super::extension::{build_e_st, decompose_object, ExtDecomposition};
use super::ExtError;
use crate::base_arith::{ArithError, GaloisField, SeriesMatrix, SeriesRing};
use crate::digits::DigitRational;
use crate::objects::PhiNModule;

/// `L = W₁l ⊕ W₁l₁` with `F(L)` spanned by `ul₁` and `ul + l₁`,
/// `φ(ul₁) = l₁`, `φ(ul + l₁) = l`, `N(l₁) ≡ 0` and `N(l) ≡ l₁` mod `u³`.
///
/// Coordinates are `(l₁, l)`.
pub fn l11_presentation(ring: &SeriesRing) -> Result<PhiNModule, ExtError> {
    if ring.p() != 3 {
        return Err(ExtError::ScopeError("L(1,1) is defined for p = 3".into()));
    }
    let one = ring.one();
    let u = ring.u_pow(1);
    let zero = ring.zero();
    let filt = SeriesMatrix::from_cols(ring, 2, &[vec![u.clone(), zero.clone()], vec![one.clone(), u]]);
    let t1 = SeriesMatrix::from_cols(ring, 2, &[vec![zero.clone(), zero.clone()], vec![one, zero]]);
    Ok(PhiNModule::lift_n(ring.clone(), filt, &t1)?)
}

/// The weight-one context `p = 3`, `r₁ = r₂ = 1/2`, `s = 1`.
pub fn weight_one_context() -> ExtContext {
    let half = DigitRational::new(3, vec![1]).expect("1/2 has the single digit 1 in base 3");
    ExtContext::new(half.clone(), half, Some(1)).expect("periods agree")
}

/// Number of classes of extensions of `L(1/2)` by itself whose Galois
/// points are rational over the fixed field: the `E_st(0,0,γ)` with `γ ∈ F₃`.
pub fn q_rational_ext_count(p: u32, r1: &DigitRational, r2: &DigitRational) -> Result<usize, ExtError> {
    let ctx = weight_one_context();
    if p != 3 || r1 != ctx.r1() || r2 != ctx.r2() {
        return Err(ExtError::ScopeError(format!(
            "only p = 3, r₁ = r₂ = 1/2 is supported, got p = {p}, r₁ = {r1}, r₂ = {r2}"
        )));
    }
    let field = GaloisField::prime(3).map_err(ArithError::from)?;
    let ring = SeriesRing::with_default_prec(field.clone());
    let mut classes = BTreeSet::new();
    for gamma in field.elements() {
        let object = build_e_st(&ctx, &ring, 0, 0, gamma)?;
        let dec: ExtDecomposition = decompose_object(&ctx, &object)?;
        classes.insert(dec.st_terms.iter().map(|t| (t.i, t.j, t.gamma.encoding())).collect::<Vec<_>>());
    }
    Ok(classes.len())
}
