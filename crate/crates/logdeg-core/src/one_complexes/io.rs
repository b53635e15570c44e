//! JSON documents: a 1-complex or tropical map with optional ambient fan and
//! decoration blocks.

use serde::{Deserialize, Serialize};

use super::complex::OneComplex;
use super::decoration::{ChowDecoration, HilbertDecoration};
use super::map::TropicalMap;
use crate::cone_geometry::{ConeComplex, FanFile};
use crate::error::Result;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OneComplexDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ambient: Option<FanFile>,
    #[serde(flatten)]
    pub complex: OneComplex,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chow: Option<ChowDecoration>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hilbert: Option<HilbertDecoration>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ambient: Option<FanFile>,
    #[serde(flatten)]
    pub map: TropicalMap,
}

fn ambient_of(f: &Option<FanFile>) -> Result<Option<ConeComplex>> {
    f.as_ref().map(ConeComplex::from_file).transpose()
}

impl OneComplexDocument {
    pub fn new(complex: OneComplex) -> Self {
        OneComplexDocument {
            ambient: None,
            complex,
            chow: None,
            hilbert: None,
        }
    }

    pub fn ambient_complex(&self) -> Result<Option<ConeComplex>> {
        ambient_of(&self.ambient)
    }

    /// All violations: ambient, complex, and decorations.
    pub fn validate(&self) -> Result<Vec<String>> {
        let amb = self.ambient_complex()?;
        let mut out: Vec<String> = amb.as_ref().map(|a| a.validate()).unwrap_or_default();
        out.extend(self.complex.validate(amb.as_ref()));
        if let Some(c) = &self.chow {
            out.extend(c.validate(&self.complex));
        }
        if let Some(h) = &self.hilbert {
            out.extend(h.validate(&self.complex));
        }
        Ok(out)
    }
}

impl MapDocument {
    pub fn ambient_complex(&self) -> Result<Option<ConeComplex>> {
        ambient_of(&self.ambient)
    }
}
