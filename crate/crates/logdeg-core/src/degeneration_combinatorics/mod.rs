//! Vertical 1-complexes in a degeneration: rigid enumeration through points,
//! cutting into the stars of the special fiber's vertices, evaluation into edge
//! stars with the diagonal condition, and gluing back.

mod cut;
mod degeneration;
pub mod fixtures;
mod rigid;
mod split;

pub use cut::{cut, glue, same_type, CutResult, EdgeEvaluation, Part, VerticalComplex};
pub use degeneration::{DegenerationComplex, DegenerationFile, RigidComplexRecord, RigidityCertificate};
pub use rigid::{
    corner_locus, enumerate_rigid, lattice_points, mikhalkin_multiplicity, newton_polygon, total_multiplicity,
    PlaneCurve,
};
pub use split::{split_decorations, DecorationSplit, SecondTotal, SplitTotals};
