//! Rational polyhedral cones with integral structure, cone complexes, morphisms,
//! stars, height slices, and combinatorial flatness.

mod complex;
mod cone;
mod morphism;
mod slice;
mod star;

pub use complex::{isomorphic_by_ids, ConeComplex, FaceMap, FanFile, FanFileCone};
pub use cone::{cone_from_halfspaces, extreme_rays, generated_cone_contains, Cone, Halfspaces};
pub use morphism::{ray_complex, ConeMorphism};
pub use slice::{slice, PolyFace, PolyhedralComplex};
pub use star::{star, star_projection};

/// Violation reports for a complex; empty iff all invariants hold.
pub fn validate_complex(c: &ConeComplex) -> Vec<String> {
    c.validate()
}
