//! Simple objects `L(r)`, admissible index pairs, normalisation of factor
//! systems and the decomposition of extensions into standard ones.

pub mod constants;
pub mod context;
pub mod extension;
pub mod factor;
pub mod scenario;
pub mod simple;

use thiserror::Error;

use crate::base_arith::ArithError;
use crate::digits::DigitError;
use crate::objects::ObjectError;

pub use constants::{ramification_bounds, RamificationBounds};
pub use context::{AdmissiblePairs, ExtContext, PairConstants, PairKind};
pub use extension::{
    build_e_cr, build_e_sp, build_e_st, build_extension, decompose_cr, decompose_full, decompose_object,
    extract_factor_system, validate_st, ExtDecomposition, PairTerm, ResidueTable, SpTerm, StCondition, StReport,
    StViolation,
};
pub use factor::{normalize_c1, reduce_c2, FactorSystem, Move, Normalized};
pub use scenario::{l11_presentation, q_rational_ext_count};
pub use simple::{build_simple, character_of_simple, SimpleCharacter};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExtError {
    #[error(transparent)]
    Digit(#[from] DigitError),
    #[error(transparent)]
    Object(#[from] ObjectError),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error("admissibility mismatch: {0}")]
    AdmissibilityMismatch(String),
    #[error("v_{j} has the term u^{t}·l_{i} outside F(L₁)")]
    NotCrystallineSystem { i: usize, j: usize, t: usize },
    #[error("iteration cap reached: {0}")]
    IterationCap(String),
    #[error("N-residues are not a sum of special extensions: {0}")]
    InconsistentResidues(String),
    #[error("invalid factor system: {0}")]
    InvalidSystem(String),
    #[error("outside the supported scenario: {0}")]
    ScopeError(String),
}

