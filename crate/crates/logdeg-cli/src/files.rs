//! Payload types that have no file form in the core library.

use serde::{Deserialize, Serialize};

use logdeg_core::arith::{serde_qvecs, serde_zvecs};
use logdeg_core::cone_geometry::{ConeComplex, ConeMorphism, FanFile};
use logdeg_core::series_engine::{RationalRepr, SeriesRepr};
use logdeg_core::{Q, Z};

/// Point conditions in the plane chart of a slice.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointsFile {
    #[serde(with = "serde_qvecs")]
    pub points: Vec<Vec<Q>>,
}

/// A linear map of lattices between two cone complexes; `linear` has one row
/// per target coordinate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismFile {
    pub source: FanFile,
    pub target: FanFile,
    #[serde(with = "serde_zvecs")]
    pub linear: Vec<Vec<Z>>,
}

impl MorphismFile {
    pub fn from_morphism(m: &ConeMorphism) -> Self {
        MorphismFile {
            source: m.source.to_file(),
            target: m.target.to_file(),
            linear: m.linear.clone(),
        }
    }

    pub fn to_morphism(&self) -> logdeg_core::Result<ConeMorphism> {
        let source = ConeComplex::from_file(&self.source)?;
        let target = ConeComplex::from_file(&self.target)?;
        ConeMorphism::new(source, target, self.linear.clone())
    }
}

/// Input of the GW/DT comparison: a PT rational function in q, a GW series
/// in u, the degree term d_β, the excess, and the u-order to compare through.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComparisonFile {
    pub pt: RationalRepr,
    pub gw: SeriesRepr,
    #[serde(default)]
    pub d_beta: i64,
    #[serde(default)]
    pub excess: i64,
    pub u_order: i64,
}
