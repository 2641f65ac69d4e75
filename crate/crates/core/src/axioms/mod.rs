//! Verdicts on the pushout-product, monoid and commutative monoid axioms for chain
//! complexes over a field, checked on generating cofibrations.

mod closure;
mod generators;
mod probes;
mod random;
mod verdicts;

pub use closure::{closure_suite, ClosureConfig};
pub use generators::{pushout_product, Generator, GeneratorKind, GeneratingSets};
pub use probes::{monoid_axiom_probe, rectification_probe, standard_fixtures, weak_cmon_probe, MAX_TRIALS};
pub use random::{random_complex, random_point};
pub use verdicts::{
    acyclicity_witness, check_bracketing, check_lurie_axiom_sigma2, check_pushout_product_axiom, check_strong_cmon_axiom,
    check_sym_trivial, classify_generator, lurie_sigma2_cell, strong_cmon_cells,
};
