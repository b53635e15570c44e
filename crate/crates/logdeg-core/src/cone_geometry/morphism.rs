//! Morphisms of embedded cone complexes given by a global integer matrix.

use num_traits::{One, Signed, Zero};

use super::complex::ConeComplex;
use super::cone::Cone;
use crate::arith::{to_q_vec, Z};
use crate::error::{Error, Result};
use crate::linalg::{lattice_index, mat_mul_z, mat_vec_z, rank_z, ZMat};

/// A linear map of lattices sending every cone of the source into a cone of the
/// target; `assignment[i]` is the smallest target cone containing the image of
/// source cone i (the image of its relative interior meets that cone's interior).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeMorphism {
    pub source: ConeComplex,
    pub target: ConeComplex,
    /// target_rank × source_rank
    pub linear: ZMat,
    pub assignment: Vec<usize>,
}

/// The complex R_{≥0}: the zero cone and one ray in a rank-1 lattice.
pub fn ray_complex() -> ConeComplex {
    ConeComplex::from_cones(
        1,
        vec![Cone::new("0", 1, vec![]), Cone::new("ray", 1, vec![vec![Z::one()]])],
    )
}

impl ConeMorphism {
    pub fn new(source: ConeComplex, target: ConeComplex, linear: ZMat) -> Result<Self> {
        if linear.len() != target.lattice_rank
            || linear.iter().any(|r| r.len() != source.lattice_rank)
        {
            return Err(Error::Invalid(format!(
                "linear map must be {}×{}",
                target.lattice_rank, source.lattice_rank
            )));
        }
        let mut assignment = Vec::with_capacity(source.cones.len());
        for c in &source.cones {
            let img: Vec<Z> = {
                let mut p = vec![Z::zero(); source.lattice_rank];
                for r in &c.rays {
                    for (x, y) in p.iter_mut().zip(r) {
                        *x += y;
                    }
                }
                mat_vec_z(&linear, &p)
            };
            let t = target.locate(&to_q_vec(&img)).ok_or_else(|| {
                Error::Invalid(format!("image of cone {} leaves the target support", c.id))
            })?;
            let tc = &target.cones[t];
            for r in &c.rays {
                if !tc.contains(&to_q_vec(&mat_vec_z(&linear, r))) {
                    return Err(Error::Invalid(format!(
                        "cone {} is not mapped into a single target cone",
                        c.id
                    )));
                }
            }
            assignment.push(t);
        }
        Ok(ConeMorphism {
            source,
            target,
            linear,
            assignment,
        })
    }

    pub fn identity(c: &ConeComplex) -> Self {
        let n = c.lattice_rank;
        let id = (0..n)
            .map(|i| (0..n).map(|j| if i == j { Z::one() } else { Z::zero() }).collect())
            .collect();
        ConeMorphism::new(c.clone(), c.clone(), id).expect("identity is a morphism")
    }

    /// A nonnegative linear functional on the support, as a map to R_{≥0}.
    pub fn to_ray(source: &ConeComplex, functional: &[Z]) -> Result<Self> {
        for c in &source.cones {
            for r in &c.rays {
                let v: Z = r.iter().zip(functional).map(|(a, b)| a * b).sum();
                if v.is_negative() {
                    return Err(Error::Invalid(format!(
                        "functional is negative on a ray of cone {}",
                        c.id
                    )));
                }
            }
        }
        ConeMorphism::new(source.clone(), ray_complex(), vec![functional.to_vec()])
    }

    /// True when the target is the one-ray complex R_{≥0}.
    pub fn targets_ray(&self) -> bool {
        self.target.lattice_rank == 1
            && self.target.cones.len() == 2
            && self.target.cones.iter().any(|c| c.rays.is_empty())
            && self
                .target
                .cones
                .iter()
                .any(|c| c.rays == vec![vec![Z::one()]])
    }

    fn image_rays(&self, i: usize) -> Vec<Vec<Z>> {
        self.source.cones[i]
            .rays
            .iter()
            .map(|r| mat_vec_z(&self.linear, r))
            .collect()
    }

    /// F(σ_i) equals its assigned target cone.
    pub fn cone_surjects(&self, i: usize) -> bool {
        let img = self.image_rays(i);
        let t = &self.target.cones[self.assignment[i]];
        t.rays
            .iter()
            .all(|r| super::cone::generated_cone_contains(&img, &to_q_vec(r), self.target.lattice_rank))
    }

    /// Source cones that do not surject onto a target cone.
    pub fn non_flat_cones(&self) -> Vec<usize> {
        (0..self.source.cones.len())
            .filter(|&i| !self.cone_surjects(i))
            .collect()
    }

    pub fn is_combinatorially_flat(&self) -> bool {
        self.non_flat_cones().is_empty()
    }

    /// Index of F(N_σ) in N_τ for τ the assigned cone; None if F(N_σ) has lower rank.
    pub fn lattice_index(&self, i: usize) -> Option<Z> {
        let c = &self.source.cones[i];
        let t = &self.target.cones[self.assignment[i]];
        let basis = c.lattice_basis();
        let img: ZMat = basis.iter().map(|b| mat_vec_z(&self.linear, b)).collect();
        let nt = t.lattice_basis();
        if rank_z(&img, self.target.lattice_rank) != nt.len() {
            return None;
        }
        if nt.is_empty() {
            return Some(Z::one());
        }
        lattice_index(&img, &nt, self.target.lattice_rank)
    }

    /// The lattice of σ_i maps onto the lattice of its assigned target cone.
    pub fn cone_has_reduced_fiber(&self, i: usize) -> bool {
        self.lattice_index(i).is_some_and(|k| k.is_one())
    }

    /// Every source cone (faces included) has lattice image generating the lattice
    /// of its target cone.
    pub fn has_reduced_fibers(&self) -> bool {
        (0..self.source.cones.len()).all(|i| self.cone_has_reduced_fiber(i))
    }

    /// Source cones whose lattice image has index > 1 (or lower rank).
    pub fn non_reduced_cones(&self) -> Vec<usize> {
        (0..self.source.cones.len())
            .filter(|&i| !self.cone_has_reduced_fiber(i))
            .collect()
    }

    /// The composite `next ∘ self`.
    pub fn then(&self, next: &ConeMorphism) -> Result<ConeMorphism> {
        if self.target.lattice_rank != next.source.lattice_rank {
            return Err(Error::Invalid("morphisms are not composable".into()));
        }
        let lin = mat_mul_z(&next.linear, &self.linear, self.source.lattice_rank);
        ConeMorphism::new(self.source.clone(), next.target.clone(), lin)
    }

    /// Violations of the morphism invariants (compatibility with face maps).
    pub fn validate(&self) -> Vec<String> {
        let mut out = Vec::new();
        for m in &self.source.face_maps {
            let (a, b) = (self.assignment[m.child], self.assignment[m.parent]);
            if !self.target.is_face_of(a, b) {
                out.push(format!(
                    "face {} -> {} is not sent to a face relation",
                    self.source.cones[m.child].id, self.source.cones[m.parent].id
                ));
            }
        }
        out
    }
}
