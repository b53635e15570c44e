//! Height slices π⁻¹(t) of a cone complex over R_{≥0}.

use num_traits::{Signed, Zero};
use serde::Serialize;

use super::complex::ConeComplex;
use super::morphism::ConeMorphism;
use crate::arith::{dot_z, scale_q, to_q_vec, Q, Z};
use crate::error::{Error, Result};

/// A cell of a slice: the part of a non-contracted cone at the slicing height.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PolyFace {
    /// The cone of the complex this face comes from.
    pub cone_id: String,
    /// Indices into the slice's vertex list.
    pub vertices: Vec<usize>,
    /// Primitive recession directions (rays contracted by π).
    #[serde(with = "crate::arith::serde_zvecs")]
    pub recession: Vec<Vec<Z>>,
    pub dimension: usize,
}

/// The polyhedral complex π⁻¹(height), positions in the ambient coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PolyhedralComplex {
    #[serde(with = "crate::arith::serde_q")]
    pub height: Q,
    #[serde(with = "crate::arith::serde_qvecs")]
    pub vertices: Vec<Vec<Q>>,
    /// Cone id of the ray giving each vertex.
    pub vertex_cones: Vec<String>,
    pub faces: Vec<PolyFace>,
    /// (face, larger face) pairs of the face poset.
    pub face_poset: Vec<(usize, usize)>,
}

/// π⁻¹(height) for a morphism π to the one-ray complex.
pub fn slice(c: &ConeComplex, pi: &ConeMorphism, height: &Q) -> Result<PolyhedralComplex> {
    if !pi.targets_ray() {
        return Err(Error::Invalid("slice requires a morphism to R_{≥0}".into()));
    }
    if !height.is_positive() {
        return Err(Error::Invalid("slice height must be positive".into()));
    }
    let ell = &pi.linear[0];
    let value = |r: &[Z]| dot_z(r, ell);
    let mut vertices = Vec::new();
    let mut vertex_cones = Vec::new();
    let mut vertex_rays: Vec<Vec<Z>> = Vec::new();
    for i in c.ray_cones() {
        let r = &c.cones[i].rays[0];
        let v = value(r);
        if v.is_positive() {
            vertices.push(scale_q(&to_q_vec(r), &(height / Q::from_integer(v))));
            vertex_cones.push(c.cones[i].id.clone());
            vertex_rays.push(r.clone());
        }
    }
    let mut faces = Vec::new();
    let mut face_cone = Vec::new();
    for (i, cone) in c.cones.iter().enumerate() {
        if cone.rays.iter().all(|r| value(r).is_zero()) {
            continue;
        }
        let verts: Vec<usize> = cone
            .rays
            .iter()
            .filter_map(|r| vertex_rays.iter().position(|s| s == r))
            .collect();
        let recession: Vec<Vec<Z>> = cone
            .rays
            .iter()
            .filter(|r| value(r).is_zero())
            .cloned()
            .collect();
        faces.push(PolyFace {
            cone_id: cone.id.clone(),
            vertices: verts,
            recession,
            dimension: cone.dimension() - 1,
        });
        face_cone.push(i);
    }
    let mut face_poset = Vec::new();
    for m in &c.face_maps {
        if let (Some(a), Some(b)) = (
            face_cone.iter().position(|&x| x == m.child),
            face_cone.iter().position(|&x| x == m.parent),
        ) {
            face_poset.push((a, b));
        }
    }
    face_poset.sort();
    Ok(PolyhedralComplex {
        height: height.clone(),
        vertices,
        vertex_cones,
        faces,
        face_poset,
    })
}

impl PolyhedralComplex {
    /// Same face structure with vertex positions multiplied by k.
    pub fn dilate(&self, k: &Q) -> PolyhedralComplex {
        let mut out = self.clone();
        out.height = &self.height * k;
        out.vertices = self.vertices.iter().map(|v| scale_q(v, k)).collect();
        out
    }

    pub fn bounded_edges(&self) -> usize {
        self.faces
            .iter()
            .filter(|f| f.dimension == 1 && f.recession.is_empty())
            .count()
    }

    pub fn unbounded_edges(&self) -> usize {
        self.faces
            .iter()
            .filter(|f| f.dimension == 1 && !f.recession.is_empty())
            .count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{q, qvec, zvec};

    fn quadrant() -> ConeComplex {
        ConeComplex::from_maximal(2, &[vec![zvec(&[1, 0]), zvec(&[0, 1])]]).unwrap()
    }

    #[test]
    fn sum_slice_is_segment() {
        let c = quadrant();
        let pi = ConeMorphism::to_ray(&c, &zvec(&[1, 1])).unwrap();
        let s = slice(&c, &pi, &q(1)).unwrap();
        assert_eq!(s.vertices.len(), 2);
        assert_eq!(s.bounded_edges(), 1);
        assert_eq!(s.unbounded_edges(), 0);
        assert!(s.vertices.contains(&qvec(&[1, 0])));
    }

    #[test]
    fn first_coordinate_slice() {
        let c = quadrant();
        let pi = ConeMorphism::to_ray(&c, &zvec(&[1, 0])).unwrap();
        let s = slice(&c, &pi, &q(1)).unwrap();
        assert_eq!(s.vertices, vec![qvec(&[1, 0])]);
        assert_eq!(s.unbounded_edges(), 1);
        assert_eq!(s.faces.iter().find(|f| f.dimension == 1).unwrap().recession, vec![zvec(&[0, 1])]);
    }

    #[test]
    fn dilation() {
        let c = quadrant();
        let pi = ConeMorphism::to_ray(&c, &zvec(&[1, 1])).unwrap();
        let s1 = slice(&c, &pi, &q(1)).unwrap();
        let s2 = slice(&c, &pi, &q(2)).unwrap();
        assert_eq!(s1.dilate(&q(2)), s2);
    }

    #[test]
    fn rejects_non_ray_target() {
        let c = quadrant();
        let id = ConeMorphism::identity(&c);
        assert!(slice(&c, &id, &q(1)).is_err());
    }
}
