//! Embedded 0- and 1-complexes with Chow and Hilbert decorations, purity and
//! retraction, tropical maps and balancing.

mod complex;
mod decoration;
mod geometry;
mod io;
mod map;

pub use complex::{one_complex, CellRef, Edge, OneComplex, Ray, Vertex};
pub use decoration::{
    check_balancing_decorated, retract_decorated, specialize, specialize_hilbert, weighted_direction_sum,
    ChowDecoration, HilbertDecoration, Specialization,
};
pub use io::{MapDocument, OneComplexDocument};
pub use map::{chow_of_tropical_map, MapEdge, MapLeg, MapVertex, TropicalMap};

/// Free/linear-2-valent-free test.
pub fn is_pure(g: &OneComplex) -> bool {
    g.is_pure(None)
}

pub fn retract_to_pure(g: &OneComplex) -> OneComplex {
    g.retract_to_pure(None)
}

/// Unbalanced interior vertices of a tropical map.
pub fn check_balancing(t: &TropicalMap) -> Vec<usize> {
    t.check_balancing(None)
}
