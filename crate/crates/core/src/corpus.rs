//! Bundled state sets.

use crate::format::parse_state_set;
use crate::state::StateSet;

pub const S1_JSON: &str = include_str!("../corpus/s1.json");
pub const S2_JSON: &str = include_str!("../corpus/s2.json");
pub const TILES_K1_JSON: &str = include_str!("../corpus/tiles_k1.json");
pub const TILES_K2_JSON: &str = include_str!("../corpus/tiles_k2.json");

/// Complete product basis of `C^3 ⊗ C^3` built from `|i⟩` and `|i⟩ ± |j⟩`.
pub fn s1() -> StateSet {
    parse_state_set(S1_JSON).expect("bundled s1.json is valid")
}

/// Five orthogonal product states in `C^3 ⊗ C^6`, Bob factored as `2 × 3`.
pub fn s2() -> StateSet {
    parse_state_set(S2_JSON).expect("bundled s2.json is valid")
}

/// The five-state Tiles UPB of `C^3 ⊗ C^3` obtained from `s2` when Bob's
/// projection onto `span{|0⟩,|1⟩,|2⟩}` clicks.
pub fn tiles_k1() -> StateSet {
    parse_state_set(TILES_K1_JSON).expect("bundled tiles_k1.json is valid")
}

/// Same, for Bob's projection onto `span{|3⟩,|4⟩,|5⟩}`.
pub fn tiles_k2() -> StateSet {
    parse_state_set(TILES_K2_JSON).expect("bundled tiles_k2.json is valid")
}

pub fn by_name(name: &str) -> Option<StateSet> {
    match name {
        "s1" => Some(s1()),
        "s2" => Some(s2()),
        "tiles_k1" => Some(tiles_k1()),
        "tiles_k2" => Some(tiles_k2()),
        _ => None,
    }
}

pub const NAMES: [&str; 4] = ["s1", "s2", "tiles_k1", "tiles_k2"];
