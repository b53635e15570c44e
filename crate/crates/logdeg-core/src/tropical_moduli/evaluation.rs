//! 0-complexes in stars and the tropical evaluation of a 1-complex along an
//! ambient ray.

use serde::{Deserialize, Serialize};

use crate::arith::{scale_q, Q};
use crate::cone_geometry::{star, star_projection, ConeComplex};
use crate::error::{Error, Result};
use crate::linalg::mat_z_vec_q;
use crate::one_complexes::OneComplex;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ZeroPoint {
    #[serde(with = "crate::arith::serde_qvec")]
    pub position: Vec<Q>,
    pub multiplicity: u32,
}

/// A finite multiset of points, kept sorted with coinciding points merged.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ZeroComplex {
    pub points: Vec<ZeroPoint>,
}

impl ZeroComplex {
    pub fn empty() -> Self {
        ZeroComplex::default()
    }

    pub fn from_points(points: impl IntoIterator<Item = (Vec<Q>, u32)>) -> Self {
        let mut v: Vec<ZeroPoint> = points
            .into_iter()
            .map(|(position, multiplicity)| ZeroPoint { position, multiplicity })
            .collect();
        v.sort();
        let mut merged: Vec<ZeroPoint> = Vec::with_capacity(v.len());
        for p in v {
            match merged.last_mut() {
                Some(last) if last.position == p.position => last.multiplicity += p.multiplicity,
                _ => merged.push(p),
            }
        }
        ZeroComplex { points: merged }
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.points.iter().map(|p| p.multiplicity).sum()
    }

    pub fn dilate(&self, k: &Q) -> Self {
        ZeroComplex::from_points(self.points.iter().map(|p| (scale_q(&p.position, k), p.multiplicity)))
    }

    pub fn positions(&self) -> Vec<Vec<Q>> {
        self.points.iter().map(|p| p.position.clone()).collect()
    }
}

impl std::fmt::Display for ZeroComplex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self
            .points
            .iter()
            .map(|p| {
                let coords: Vec<String> = p.position.iter().map(crate::arith::fmt_q).collect();
                let m = if p.multiplicity == 1 { String::new() } else { format!("×{}", p.multiplicity) };
                format!("({}){m}", coords.join(","))
            })
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// A 0-complex together with the star complex it lives in and the faces of its points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZeroComplexModuli {
    pub ambient: ConeComplex,
    pub complex: ZeroComplex,
    /// Face id of each point of `complex`, in order.
    pub faces: Vec<String>,
}

/// Images, in the star of the ray δ, of the rays of g parallel to δ, with
/// multiplicities from the optional ray labels.
pub fn evaluate_along_ray(
    g: &OneComplex,
    ray_labels: Option<&[u32]>,
    ambient: &ConeComplex,
    delta: &str,
) -> Result<ZeroComplexModuli> {
    let d = ambient.index_of(delta)?;
    if ambient.cones[d].rays.len() != 1 {
        return Err(Error::Invalid(format!("'{delta}' is not a ray of the ambient complex")));
    }
    let ambient_rays: Vec<_> = ambient.ray_cones().iter().map(|&i| ambient.cones[i].rays[0].clone()).collect();
    for (i, r) in g.rays.iter().enumerate() {
        if !ambient_rays.contains(&r.direction) {
            return Err(Error::Invalid(format!("ray {i} of the 1-complex is not parallel to an ambient ray")));
        }
    }
    let dir = &ambient.cones[d].rays[0];
    let proj = star_projection(ambient, d);
    let st = star(ambient, delta)?;
    let complex = ZeroComplex::from_points(g.rays.iter().enumerate().filter(|(_, r)| &r.direction == dir).map(
        |(i, r)| {
            let m = ray_labels.map_or(1, |l| l[i]);
            (mat_z_vec_q(&proj, &g.vertices[r.vertex].position), m)
        },
    ));
    let faces = complex
        .points
        .iter()
        .map(|p| st.locate(&p.position).map(|i| st.cones[i].id.clone()).unwrap_or_default())
        .collect();
    Ok(ZeroComplexModuli {
        ambient: st,
        complex,
        faces,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{q, qvec, zvec};
    use crate::one_complexes::one_complex;

    fn quadrant() -> ConeComplex {
        ConeComplex::from_maximal(2, &[vec![zvec(&[1, 0]), zvec(&[0, 1])]]).unwrap()
    }

    fn e1() -> String {
        let q = quadrant();
        q.cones[q.ray_index(&zvec(&[1, 0])).unwrap()].id.clone()
    }

    #[test]
    fn two_parallel_rays() {
        let g = one_complex(2, &[qvec(&[0, 1]), qvec(&[0, 3])], &[(0, 1)], &[(0, zvec(&[1, 0])), (1, zvec(&[1, 0]))]).unwrap();
        let e = evaluate_along_ray(&g, None, &quadrant(), &e1()).unwrap();
        let got: Vec<Q> = e.complex.positions().into_iter().map(|p| p[0].clone()).collect();
        // the quotient lattice is Z·e2 up to sign
        let mut abs: Vec<Q> = got.iter().map(|x| if x < &q(0) { -x.clone() } else { x.clone() }).collect();
        abs.sort();
        assert_eq!(abs, vec![q(1), q(3)]);
        assert_eq!(e.ambient.lattice_rank, 1);
        assert!(e.faces.iter().all(|f| f.contains('+')));
    }

    #[test]
    fn no_parallel_ray_gives_empty() {
        let g = one_complex(2, &[qvec(&[1, 1])], &[], &[(0, zvec(&[0, 1]))]).unwrap();
        assert!(evaluate_along_ray(&g, None, &quadrant(), &e1()).unwrap().complex.is_empty());
    }

    #[test]
    fn label_becomes_multiplicity() {
        let g = one_complex(2, &[qvec(&[0, 2])], &[], &[(0, zvec(&[1, 0]))]).unwrap();
        let e = evaluate_along_ray(&g, Some(&[2]), &quadrant(), &e1()).unwrap();
        assert_eq!(e.complex.degree(), 2);
    }

    #[test]
    fn non_parallel_ray_rejected() {
        let g = one_complex(2, &[qvec(&[1, 1])], &[], &[(0, zvec(&[1, 1]))]).unwrap();
        assert!(evaluate_along_ray(&g, None, &quadrant(), &e1()).is_err());
    }

    #[test]
    fn commutes_with_dilation() {
        let g = one_complex(2, &[qvec(&[0, 1]), qvec(&[0, 3])], &[(0, 1)], &[(0, zvec(&[1, 0])), (1, zvec(&[1, 0]))]).unwrap();
        let k = q(3);
        let a = evaluate_along_ray(&g.dilate(&k), None, &quadrant(), &e1()).unwrap().complex;
        let b = evaluate_along_ray(&g, None, &quadrant(), &e1()).unwrap().complex.dilate(&k);
        assert_eq!(a, b);
    }
}
