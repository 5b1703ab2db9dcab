//! Special bases of crystalline objects.

use super::{ObjectError, PhiNModule};
use crate::base_arith::smith::smith;
use crate::base_arith::SeriesMatrix;

/// A `σ(W₁)`-basis `l'_i` of `φ(F(L))` with `u^{c_i}·l'_i` a `W₁`-basis of `F(L)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecialBasis {
    /// Columns `l'_i` in the `l`-basis; entries are series in `u^p`.
    pub basis: SeriesMatrix,
    /// `0 ≤ c_i < p`.
    pub exponents: Vec<usize>,
}

/// Start from a Smith basis `n_i` of `L` with `u^{c_i}n_i` spanning `F(L)`,
/// write `n_i = Σ_{j<p} u^j·n_{ij}` with `n_{ij} ∈ φ(F(L))` and keep `n_{i0}`.
pub fn special_basis(object: &PhiNModule) -> Result<SpecialBasis, ObjectError> {
    if !object.is_crystalline() {
        return Err(ObjectError::NotCrystalline);
    }
    let ring = object.ring();
    let sf = smith(ring, object.filt());
    let basis = sf.u_inv.map(|x| ring.p_divisible_part(x));
    let exponents = sf.exponents.clone();
    let scaled = basis.mul(ring, &SeriesMatrix::diag_u_pows(ring, &exponents));
    let spans_filtration = object.filt_coords_matrix(&scaled).is_some()
        && smith(ring, &scaled).solve(ring, object.filt()).is_some();
    if !spans_filtration {
        return Err(ObjectError::Invalid(
            "special basis does not reproduce F(L); the N-table is not crystalline".into(),
        ));
    }
    Ok(SpecialBasis { basis, exponents })
}
