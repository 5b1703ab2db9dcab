//! Finite fields, truncated power series over them, matrices of series with
//! their Smith form, and the semilinear solvers.

pub mod field;
pub mod linalg;
pub mod semilinear;
pub mod series;
pub mod smatrix;
pub mod smith;

use thiserror::Error;

pub use field::{FieldEmbedding, FieldError, FieldSpec, Fq, GaloisField};
pub use linalg::FqMatrix;
pub use semilinear::{fitting_split, solve_id_minus_a, solve_sigma_block, FittingSplit, SemilinearOp};
pub use series::{SeriesRing, TruncSeries};
pub use smatrix::SeriesMatrix;
pub use smith::{u_smith_form, SmithForm};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArithError {
    #[error("no solution over F_{q}; enlarge the field: {equation}")]
    FieldTooSmall { q: u32, equation: String },
    #[error("elementary divisor {index} has exponent {exponent}, reaching the precision {prec}")]
    PrecisionLoss { index: usize, exponent: usize, prec: usize },
    #[error("matrix is singular")]
    Singular,
    #[error(transparent)]
    Field(#[from] FieldError),
}
