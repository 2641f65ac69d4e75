//! Exact scalars and dense matrices over ℚ and 𝔽_p.

mod field;
mod matrix;
mod scalar;

pub use field::{Field, MAX_PRIME};
pub use matrix::{Matrix, Quotient};
pub use scalar::{sign, Scalar};
