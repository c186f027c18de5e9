//! Small graphs of groups used by tests, the acceptance suite and the docs.

use crate::graph::{GraphOfGroups, GraphSpec};

/// The acceptance fixtures: C2∗C2, C2∗C3, C4∗_{C2}C4, HNN(C2, id) ≅ C2×Z
/// and HNN(1) ≅ Z.
pub const NAMES: [&str; 5] = ["c2_c2", "c2_c3", "c4_c2_c4", "c2_hnn", "z"];

pub fn source(name: &str) -> Option<&'static str> {
    Some(match name {
        "c2_c2" => include_str!("../fixtures/c2_c2.json"),
        "c2_c3" => include_str!("../fixtures/c2_c3.json"),
        "c4_c2_c4" => include_str!("../fixtures/c4_c2_c4.json"),
        "c2_hnn" => include_str!("../fixtures/c2_hnn.json"),
        "z" => include_str!("../fixtures/z.json"),
        "triangle" => include_str!("../fixtures/triangle.json"),
        "v4_hnn" => include_str!("../fixtures/v4_hnn.json"),
        _ => return None,
    })
}

/// Load a bundled fixture. Panics on an unknown name.
pub fn load(name: &str) -> GraphOfGroups {
    let text = source(name).unwrap_or_else(|| panic!("no fixture named {name}"));
    GraphOfGroups::load(&GraphSpec::from_json(text).expect("fixture parses")).expect("fixture loads")
}
