//! Parameter cones of combinatorial types, rigidity, tropical evaluation into
//! 0-complexes of stars, and flattening by relative barycentric subdivision.

mod evaluation;
mod flatten;
mod types;

pub use evaluation::{evaluate_along_ray, ZeroComplex, ZeroComplexModuli, ZeroPoint};
pub use flatten::{
    check_relative_subdivision, flatten_evaluation, relative_barycentric_subdivide, Flattening, FlatteningReport,
};
pub use types::{
    is_rigid, parameter_cone, parameter_constraints, realize, realized_dimension, type_of, CombinatorialType, Incidence, ParameterCone, TypeCell, TypeEdge,
    TypeRay,
};
