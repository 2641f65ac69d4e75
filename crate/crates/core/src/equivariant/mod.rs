//! Symmetric group actions on complexes, coinvariants, induction and homotopy orbits.

mod action;
pub mod perm;
mod resolution;

pub use action::{
    coinvariants, induce, is_free_sigma2, tensor_power_action, tensor_power_action_on, EquivariantComplex,
    EquivariantMap, Induced, SymmetricGroupAction,
};
pub use perm::Perm;
pub use resolution::{bar_resolution, homotopy_orbits, homotopy_orbits_with, HomotopyOrbits, Resolution, MAX_ARITY, MAX_LENGTH};
