//! Reference graphs shipped with the crate, in the graph file format.

use crate::dual::RotationSystem;
use crate::graph::FeynmanGraph;
use crate::io::load_graph;

pub const G4: &str = include_str!("../../../fixtures/g4.graph");
pub const H4: &str = include_str!("../../../fixtures/h4.graph");
pub const G7: &str = include_str!("../../../fixtures/g7.graph");
pub const H7: &str = include_str!("../../../fixtures/h7.graph");
pub const BUBBLE: &str = include_str!("../../../fixtures/bubble.graph");
pub const G4_NEGATIVE: &str = include_str!("../../../fixtures/g4_negative.graph");

pub const ALL: [&str; 6] = [G4, H4, G7, H7, BUBBLE, G4_NEGATIVE];

fn load(text: &str) -> (FeynmanGraph, Option<RotationSystem>) {
    load_graph(text).expect("bundled fixture parses")
}

/// The star with one internal vertex joined to 0, 1 and z (d = 4, unit weights).
pub fn g4() -> FeynmanGraph {
    load(G4).0
}

/// `g4` plus the edge {0,1}.
pub fn h4() -> FeynmanGraph {
    load(H4).0
}

/// Seven vertices, nine unit edges; value `20 zeta(5)` times that of `g4`.
pub fn g7() -> FeynmanGraph {
    load(G7).0
}

/// `g7` plus the edge {0,1}.
pub fn h7() -> FeynmanGraph {
    load(H7).0
}

/// 0 - a - 1 with `lambda nu = 5/4` on both edges and an isolated z.
pub fn bubble() -> FeynmanGraph {
    load(BUBBLE).0
}

/// `g4` with weights (-1/2, 3/2, 3/2).
pub fn g4_negative() -> FeynmanGraph {
    load(G4_NEGATIVE).0
}

/// A fixture together with its embedding.
pub fn embedded(text: &str) -> (FeynmanGraph, RotationSystem) {
    let (g, rot) = load(text);
    (g, rot.expect("fixture has rotation lines"))
}
