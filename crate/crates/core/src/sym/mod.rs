//! Symmetric powers, free commutative monoids and relative tensor products.

mod free;
mod monoid;
mod relative;

pub use free::{sym_free, sym_free_truncated, sym_map, sym_power, sym_power_map, sym_universal, SymPower, TruncatedSym};
pub use monoid::{square_zero, unit_monoid, CommutativeMonoidObject, Sparse};
pub use relative::{relative_tensor, relative_tensor_truncated, RelativeTensor};
