pub mod axioms;
pub mod chain;
pub mod cube;
pub mod equivariant;
pub mod error;
pub mod filtration;
pub mod fixture;
pub mod guard;
pub mod linalg;
pub mod report;
pub mod standard;
pub mod sym;

pub use error::{Error, Result};
pub use linalg::{Field, Matrix, Scalar};
