//! Stable machine-readable codes for every library error.
//!
//! Wrapping variants report the code of the error they wrap, so a code
//! names the underlying failure regardless of which layer surfaced it.

use crate::base_arith::{ArithError, FieldError};
use crate::digits::DigitError;
use crate::json::DecodeError;
use crate::objects::ObjectError;
use crate::simples_ext::ExtError;
use crate::unitfilter::UnitError;

pub trait ErrorCode {
    fn code(&self) -> &'static str;
}

impl ErrorCode for FieldError {
    fn code(&self) -> &'static str {
        match self {
            FieldError::BadCharacteristic(_) => "bad_characteristic",
            FieldError::BadDegree { .. } => "bad_degree",
            FieldError::Reducible { .. } => "reducible_modulus",
            FieldError::TooLarge(_) => "field_too_large",
            FieldError::NoEmbedding { .. } => "no_embedding",
            FieldError::BadCoordinates { .. } => "bad_coordinates",
        }
    }
}

impl ErrorCode for ArithError {
    fn code(&self) -> &'static str {
        match self {
            ArithError::FieldTooSmall { .. } => "field_too_small",
            ArithError::PrecisionLoss { .. } => "precision_loss",
            ArithError::Singular => "singular",
            ArithError::Field(e) => e.code(),
        }
    }
}

impl ErrorCode for DigitError {
    fn code(&self) -> &'static str {
        match self {
            DigitError::BadPrime(_) => "bad_prime",
            DigitError::Empty => "empty_digits",
            DigitError::BadDigit { .. } => "bad_digit",
            DigitError::BadRange { .. } => "bad_range",
            DigitError::NotPeriodic(_) => "not_periodic",
            DigitError::TooLong(_) => "period_too_long",
        }
    }
}

impl ErrorCode for ObjectError {
    fn code(&self) -> &'static str {
        match self {
            ObjectError::Arith(e) => e.code(),
            ObjectError::Invalid(_) => "invalid_object",
            ObjectError::Shape(_) => "shape_mismatch",
            ObjectError::HypothesisFailed { .. } => "hypothesis_failed",
            ObjectError::InvalidMorphism(_) => "invalid_morphism",
            ObjectError::NotCrystalline => "not_crystalline",
            ObjectError::NonConvergence(_) => "non_convergence",
            ObjectError::InvalidFl(_) => "invalid_fl",
        }
    }
}

impl ErrorCode for ExtError {
    fn code(&self) -> &'static str {
        match self {
            ExtError::Digit(e) => e.code(),
            ExtError::Object(e) => e.code(),
            ExtError::Arith(e) => e.code(),
            ExtError::AdmissibilityMismatch(_) => "admissibility_mismatch",
            ExtError::NotCrystallineSystem { .. } => "not_crystalline_system",
            ExtError::IterationCap(_) => "iteration_cap",
            ExtError::InconsistentResidues(_) => "inconsistent_residues",
            ExtError::InvalidSystem(_) => "invalid_system",
            ExtError::ScopeError(_) => "out_of_scope",
        }
    }
}

impl ErrorCode for UnitError {
    fn code(&self) -> &'static str {
        match self {
            UnitError::InvalidField(_) => "invalid_number_field",
            UnitError::InvalidElement(_) => "invalid_element",
            UnitError::UndefinedValuation => "undefined_valuation",
            UnitError::Empty => "empty_units",
            UnitError::NoProgress { .. } => "no_progress",
            UnitError::InvalidTranscript(_) => "invalid_transcript",
        }
    }
}

impl ErrorCode for DecodeError {
    fn code(&self) -> &'static str {
        "malformed_input"
    }
}
