//! The star of a cone: cones containing σ, quotiented by the span of σ.

use super::complex::ConeComplex;
use super::cone::Cone;
use crate::error::Result;
use crate::linalg::{identity_z, mat_vec_z, quotient_projection, ZMat};

/// The canonical surjection Zⁿ → Zⁿ / (span σ ∩ Zⁿ) used for the star of σ.
pub fn star_projection(c: &ConeComplex, sigma: usize) -> ZMat {
    quotient_projection(&c.cones[sigma].rays, c.lattice_rank)
}

/// The star complex Σ(σ): one cone per τ ⊇ σ, the image of τ in the quotient
/// lattice by the saturated span of σ. Cones keep the ids of the τ they come from.
pub fn star(c: &ConeComplex, sigma_id: &str) -> Result<ConeComplex> {
    let s = c.index_of(sigma_id)?;
    let proj = star_projection(c, s);
    let k = proj.len();
    let sigma_rays = &c.cones[s].rays;
    let over: Vec<usize> = c.cofaces(s);
    let mut cones = Vec::with_capacity(over.len());
    for &t in &over {
        let tc = &c.cones[t];
        let gens: Vec<_> = tc
            .rays
            .iter()
            .filter(|r| !sigma_rays.contains(r))
            .map(|r| mat_vec_z(&proj, r))
            .collect();
        cones.push(Cone::from_generators(tc.id.clone(), k, &gens)?);
    }
    let mut face_maps = Vec::new();
    for m in &c.face_maps {
        if let (Some(a), Some(b)) = (
            over.iter().position(|&x| x == m.child),
            over.iter().position(|&x| x == m.parent),
        ) {
            face_maps.push(super::complex::FaceMap {
                child: a,
                parent: b,
                embedding: identity_z(k),
            });
        }
    }
    Ok(ConeComplex {
        lattice_rank: k,
        cones,
        face_maps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::zvec;
    use crate::cone_geometry::complex::isomorphic_by_ids;

    fn p2() -> ConeComplex {
        let (a, b, c) = (zvec(&[1, 0]), zvec(&[0, 1]), zvec(&[-1, -1]));
        ConeComplex::from_maximal(2, &[vec![a.clone(), b.clone()], vec![b, c.clone()], vec![c, a]])
            .unwrap()
    }

    #[test]
    fn star_of_ray_in_p2_is_p1() {
        let f = p2();
        let s = star(&f, "r1").unwrap();
        assert_eq!(s.lattice_rank, 1);
        assert_eq!(s.cones.len(), 3);
        let mut rays: Vec<_> = s.cones.iter().filter(|c| c.rays.len() == 1).map(|c| c.rays[0].clone()).collect();
        rays.sort();
        assert_eq!(rays, vec![zvec(&[-1]), zvec(&[1])]);
        assert!(s.validate().is_empty());
    }

    #[test]
    fn star_of_zero_cone() {
        let f = p2();
        let s = star(&f, "0").unwrap();
        assert!(isomorphic_by_ids(&s, &f));
    }

    #[test]
    fn iterated_star() {
        let f = ConeComplex::from_maximal(
            3,
            &[vec![zvec(&[1, 0, 0]), zvec(&[0, 1, 0]), zvec(&[0, 0, 1])], vec![zvec(&[1, 0, 0]), zvec(&[0, 1, 0]), zvec(&[-1, -1, -1])]],
        )
        .unwrap();
        let a = star(&star(&f, "r1").unwrap(), "r1+r2").unwrap();
        let b = star(&f, "r1+r2").unwrap();
        assert!(isomorphic_by_ids(&a, &b));
    }

    #[test]
    fn unknown_cone() {
        assert!(star(&p2(), "nope").is_err());
    }
}
