//! Exact number-field arithmetic and the greedy filtration of a list of
//! units by `p`-adic valuations of shifted norms.

pub mod filtrate;
pub mod nf;
pub mod qpoly;

use thiserror::Error;

pub use filtrate::{filtrate, replay, FilterEvent, FiltrationResult, Move};
pub use nf::{Irreducibility, NfElement, NumberField, ShiftedNorm};
pub use qpoly::{p_valuation, resultant, resultant_euclid, resultant_sylvester, PValuation, QPoly};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum UnitError {
    #[error("invalid number field: {0}")]
    InvalidField(String),
    #[error("invalid element: {0}")]
    InvalidElement(String),
    #[error("the shifted norm is zero, so its valuation is infinite")]
    UndefinedValuation,
    #[error("empty unit list")]
    Empty,
    #[error(
        "no multiplier raised the valuation {valuation} of candidate {candidate} using basis element {basis_index} at k = {k}"
    )]
    NoProgress {
        candidate: usize,
        basis_index: usize,
        k: usize,
        valuation: PValuation,
    },
    #[error("invalid transcript: {0}")]
    InvalidTranscript(String),
}

/// `Q(∛3)` with its unit `ε = ∛9 − 2`.
pub fn cube_root_three() -> (NumberField, NfElement) {
    let field = NumberField::new(QPoly::from_ints(&[-3, 0, 0, 1]))
        .and_then(|f| f.certify(7))
        .expect("t³ − 3 is irreducible mod 7");
    let alpha = field.generator();
    let unit = field.sub(&field.mul(&alpha, &alpha), &field.from_int(2));
    (field, unit)
}

/// `[ε², ε⁵, −1]` in `Q(∛3)`: a small input whose run uses every `k < 3`.
pub fn cube_root_three_instance() -> (NumberField, Vec<NfElement>) {
    let (field, eps) = cube_root_three();
    let units = vec![field.pow(&eps, 2), field.pow(&eps, 5), field.from_int(-1)];
    (field, units)
}
