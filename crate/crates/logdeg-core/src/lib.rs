//! Combinatorial and generating-function machinery for logarithmic GW/DT
//! degeneration formulas: cone complexes and stars, embedded decorated
//! 1-complexes, tropical evaluation and flattening, the cutting/gluing
//! bijection for degenerations, the Nakajima partition coefficient algebra,
//! and an exact-series assembler for the numerical degeneration formulas.
//!
//! Everything is exact: integers and rationals are arbitrary precision and
//! series coefficients live in Q or Q(i).

pub mod arith;
pub mod error;
pub mod linalg;
pub mod lp;

pub mod assembler;
pub mod cone_geometry;
pub mod degeneration_combinatorics;
pub mod one_complexes;
pub mod partition_algebra;
pub mod series_engine;
pub mod tropical_moduli;

pub use arith::{GaussianQ, Scalar, Q, Z};
pub use error::{Error, Result};
