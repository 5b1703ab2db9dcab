//! Objects and morphisms of `L*`, limits, the crystalline theory and the
//! canonical splittings.

pub mod crystalline;
pub mod fl;
pub mod limits;
pub mod module;
pub mod morphism;
pub mod splits;

use thiserror::Error;

use crate::base_arith::ArithError;

pub use crystalline::{special_basis, SpecialBasis};
pub use fl::{fl_is_isomorphic, fl_is_morphism, fl_module_of, fl_normalize, fl_to_module, FlModule, FlNormalization};
pub use limits::{cokernel, is_strict_epi, is_strict_mono, kernel, sub_object, Cokernel, Kernel};
pub use module::{Axiom, PhiNModule, ValidationFailure, ValidationReport};
pub use morphism::{find_isomorphism, hom_basis, Morphism};
pub use splits::{
    etale_split, is_connected, is_etale, is_multiplicative, is_unipotent, splitting_section, unipotent_split, SectionData,
    Split,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ObjectError {
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error("invalid object: {0}")]
    Invalid(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("lift hypothesis fails{}: {detail}", column.map(|c| format!(" at column {c}")).unwrap_or_default())]
    HypothesisFailed { column: Option<usize>, detail: String },
    #[error("not a morphism: {0}")]
    InvalidMorphism(String),
    #[error("object is not crystalline")]
    NotCrystalline,
    #[error("iteration did not converge: {0}")]
    NonConvergence(String),
    #[error("invalid Fontaine-Laffaille data: {0}")]
    InvalidFl(String),
}
