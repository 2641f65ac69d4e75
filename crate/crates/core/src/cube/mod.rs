//! Punctured cubes of tensor words, their colimits and the closure checks built on them.

mod mixed;
mod power;
mod present;
mod word;

pub use mixed::{
    composition_ladder_check, decomposition_check, mixed_q_e, q_bracket_tower, MixedCube, QBracketTower,
};
pub use power::{
    box_power, box_power_morphism, box_power_quotient, bracketed_power, bracketing_check, partial_cube,
    pushout_closure_check, retract_check, shell_pushout_verify, shell_square, shell_words, BoxPower,
    BoxPowerQuotient, PartialCubeColimit, PresentedArrow, Retract, ShellSquare,
};
pub(crate) use power::mono_witness;
pub use present::{Presented, Term};
pub use word::{all_words, below, colex_sort, CubeColimit, Letters, WordCube};
