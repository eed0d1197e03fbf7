//! Arithmetic group machinery: PSL2(Z) elements, presets for the free
//! congruence subgroups Γ(2) and Γ0(11), their cusps, word decomposition
//! and coset enumeration for Poincaré sums.

mod cosets;
mod element;
mod preset;
pub mod schreier;

pub use cosets::{coset_reps, coset_reps_in_box, extend_bottom_row};
pub use element::{check_upper, free_reduce, GroupElement};
pub use preset::{Cusp, GroupPreset, PresetName, DEFAULT_WORD_CAP};
pub use schreier::{evaluate_word, Congruence, SchreierSystem};
