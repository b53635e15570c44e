//! Cone complexes embedded in a common lattice, with explicit face maps.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::cone::{fmt_vec, Cone};
use crate::arith::{serde_zvecs, to_q_vec, Q, Z};
use crate::error::{Error, Result};
use crate::linalg::{identity_z, lattice_index, mat_vec_z, rank_q, saturation, solve_q, transpose, ZMat};
use crate::lp::Constraints;

/// Inclusion of the cone `child` as a face of `parent`; `embedding` maps the child
/// lattice into the parent lattice (the identity for embedded complexes).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceMap {
    pub child: usize,
    pub parent: usize,
    pub embedding: ZMat,
}

/// A finite collection of cones glued along faces. Identity face maps are implicit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeComplex {
    pub lattice_rank: usize,
    pub cones: Vec<Cone>,
    pub face_maps: Vec<FaceMap>,
}

/// JSON form of a complex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FanFile {
    pub lattice_rank: usize,
    pub cones: Vec<FanFileCone>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FanFileCone {
    pub id: String,
    #[serde(with = "serde_zvecs")]
    pub rays: Vec<Vec<Z>>,
    #[serde(default)]
    pub faces: Vec<String>,
}

fn ray_set_id(set: &[usize]) -> String {
    if set.is_empty() {
        "0".to_string()
    } else {
        set.iter().map(|i| format!("r{}", i + 1)).join("+")
    }
}

impl ConeComplex {
    /// Builds a complex from cones sharing the ambient lattice and derives every
    /// face map from ray-set containment.
    pub fn from_cones(lattice_rank: usize, cones: Vec<Cone>) -> Self {
        let mut face_maps = Vec::new();
        for (i, a) in cones.iter().enumerate() {
            for (j, b) in cones.iter().enumerate() {
                if i == j || a.rays.len() >= b.rays.len() {
                    continue;
                }
                let idx: Option<Vec<usize>> = a
                    .rays
                    .iter()
                    .map(|r| b.rays.iter().position(|s| s == r))
                    .collect();
                if let Some(idx) = idx {
                    if b.is_simplicial() || b.is_face_subset(&idx) {
                        face_maps.push(FaceMap {
                            child: i,
                            parent: j,
                            embedding: identity_z(lattice_rank),
                        });
                    }
                }
            }
        }
        ConeComplex {
            lattice_rank,
            cones,
            face_maps,
        }
    }

    /// The complex of all faces of the given maximal cones (given by generators).
    /// Rays are named r1, r2, … in order of first appearance and each cone is named
    /// by its rays joined with '+'; the zero cone is "0".
    pub fn from_maximal(lattice_rank: usize, maximal: &[Vec<Vec<Z>>]) -> Result<Self> {
        let mut rays: Vec<Vec<Z>> = Vec::new();
        let mut sets: BTreeSet<Vec<usize>> = BTreeSet::new();
        for gens in maximal {
            let c = Cone::from_generators("", lattice_rank, gens)?;
            let idx: Vec<usize> = c
                .rays
                .iter()
                .map(|r| match rays.iter().position(|s| s == r) {
                    Some(k) => k,
                    None => {
                        rays.push(r.clone());
                        rays.len() - 1
                    }
                })
                .collect();
            for face in c.face_ray_sets() {
                let mut s: Vec<usize> = face.iter().map(|&k| idx[k]).collect();
                s.sort();
                sets.insert(s);
            }
        }
        let mut sets: Vec<Vec<usize>> = sets.into_iter().collect();
        sets.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
        let cones = sets
            .iter()
            .map(|s| {
                Cone::new(
                    ray_set_id(s),
                    lattice_rank,
                    s.iter().map(|&k| rays[k].clone()).collect(),
                )
            })
            .collect();
        Ok(Self::from_cones(lattice_rank, cones))
    }

    pub fn from_file(f: &FanFile) -> Result<Self> {
        let cones: Vec<Cone> = f
            .cones
            .iter()
            .map(|c| Cone::new(c.id.clone(), f.lattice_rank, c.rays.clone()))
            .collect();
        let mut face_maps = Vec::new();
        for (j, c) in f.cones.iter().enumerate() {
            for fid in &c.faces {
                let i = f
                    .cones
                    .iter()
                    .position(|d| &d.id == fid)
                    .ok_or_else(|| Error::UnknownId(format!("face '{fid}' of cone '{}'", c.id)))?;
                face_maps.push(FaceMap {
                    child: i,
                    parent: j,
                    embedding: identity_z(f.lattice_rank),
                });
            }
        }
        face_maps.sort_by_key(|m| (m.child, m.parent));
        Ok(ConeComplex {
            lattice_rank: f.lattice_rank,
            cones,
            face_maps,
        })
    }

    pub fn to_file(&self) -> FanFile {
        FanFile {
            lattice_rank: self.lattice_rank,
            cones: self
                .cones
                .iter()
                .enumerate()
                .map(|(j, c)| FanFileCone {
                    id: c.id.clone(),
                    rays: c.rays.clone(),
                    faces: self
                        .face_maps
                        .iter()
                        .filter(|m| m.parent == j)
                        .map(|m| self.cones[m.child].id.clone())
                        .collect(),
                })
                .collect(),
        }
    }

    pub fn index_of(&self, id: &str) -> Result<usize> {
        self.cones
            .iter()
            .position(|c| c.id == id)
            .ok_or_else(|| Error::UnknownId(format!("cone '{id}'")))
    }

    pub fn cone(&self, id: &str) -> Result<&Cone> {
        Ok(&self.cones[self.index_of(id)?])
    }

    /// a is a face of b (a == b allowed).
    pub fn is_face_of(&self, a: usize, b: usize) -> bool {
        a == b || self.face_maps.iter().any(|m| m.child == a && m.parent == b)
    }

    /// Cones having `a` as a face (including `a`).
    pub fn cofaces(&self, a: usize) -> Vec<usize> {
        (0..self.cones.len()).filter(|&b| self.is_face_of(a, b)).collect()
    }

    /// Faces of `b` (including `b`).
    pub fn faces(&self, b: usize) -> Vec<usize> {
        (0..self.cones.len()).filter(|&a| self.is_face_of(a, b)).collect()
    }

    pub fn maximal_cones(&self) -> Vec<usize> {
        (0..self.cones.len())
            .filter(|&a| !self.face_maps.iter().any(|m| m.child == a))
            .collect()
    }

    pub fn dimension(&self) -> usize {
        self.cones.iter().map(|c| c.dimension()).max().unwrap_or(0)
    }

    /// Indices of the 1-dimensional cones.
    pub fn ray_cones(&self) -> Vec<usize> {
        (0..self.cones.len())
            .filter(|&i| self.cones[i].rays.len() == 1)
            .collect()
    }

    /// The ray cone generated by the primitive vector `dir`.
    pub fn ray_index(&self, dir: &[Z]) -> Option<usize> {
        self.cones.iter().position(|c| c.rays.len() == 1 && c.rays[0] == dir)
    }

    /// The cone whose relative interior contains p.
    pub fn locate(&self, p: &[Q]) -> Option<usize> {
        let mut order: Vec<usize> = (0..self.cones.len()).collect();
        order.sort_by_key(|&i| self.cones[i].rays.len());
        order.into_iter().find(|&i| self.cones[i].relint_contains(p))
    }

    pub fn support_contains(&self, p: &[Q]) -> bool {
        self.maximal_cones().iter().any(|&i| self.cones[i].contains(p))
    }

    /// Violation reports for all cone and complex invariants; empty iff valid.
    pub fn validate(&self) -> Vec<String> {
        let mut out = Vec::new();
        let n = self.lattice_rank;
        let mut ids = BTreeMap::new();
        for c in &self.cones {
            if c.ambient_rank != n {
                out.push(format!(
                    "cone {}: ambient rank {} differs from lattice rank {n}",
                    c.id, c.ambient_rank
                ));
            }
            if ids.insert(c.id.clone(), ()).is_some() {
                out.push(format!("duplicate cone id {}", c.id));
            }
            out.extend(c.violations());
        }
        if !out.is_empty() {
            return out;
        }
        let key = |c: &Cone| -> Vec<Vec<Z>> {
            let mut r = c.rays.clone();
            r.sort();
            r
        };
        let keys: Vec<Vec<Vec<Z>>> = self.cones.iter().map(key).collect();
        for (i, j) in (0..self.cones.len()).tuple_combinations() {
            if keys[i] == keys[j] {
                out.push(format!(
                    "cones {} and {} coincide (self-gluing is not supported)",
                    self.cones[i].id, self.cones[j].id
                ));
            }
        }
        let mut seen = BTreeSet::new();
        for m in &self.face_maps {
            let (c, p) = (&self.cones[m.child], &self.cones[m.parent]);
            if !seen.insert((m.child, m.parent)) {
                out.push(format!("duplicate face morphism {} -> {}", c.id, p.id));
                continue;
            }
            if m.child == m.parent {
                out.push(format!("explicit identity face morphism on {}", c.id));
                continue;
            }
            if m.embedding.len() != n || m.embedding.iter().any(|r| r.len() != n) {
                out.push(format!("face morphism {} -> {}: embedding has wrong shape", c.id, p.id));
                continue;
            }
            let images: Vec<Vec<Z>> = c.rays.iter().map(|r| mat_vec_z(&m.embedding, r)).collect();
            let idx: Option<Vec<usize>> = images
                .iter()
                .map(|r| p.rays.iter().position(|s| s == r))
                .collect();
            match idx {
                Some(idx) if p.is_face_subset(&idx) => {}
                _ => out.push(format!(
                    "face morphism {} -> {} does not carry rays onto a face",
                    c.id, p.id
                )),
            }
        }
        // every face of every cone is present with a face map
        for (j, p) in self.cones.iter().enumerate() {
            for face in p.face_ray_sets() {
                if face.len() == p.rays.len() {
                    continue;
                }
                let mut k: Vec<Vec<Z>> = face.iter().map(|&t| p.rays[t].clone()).collect();
                k.sort();
                match keys.iter().position(|x| *x == k) {
                    None => out.push(format!(
                        "cone {}: face spanned by {} is missing",
                        p.id,
                        if k.is_empty() {
                            "no rays".to_string()
                        } else {
                            k.iter().map(|r| fmt_vec(r)).join(" ")
                        }
                    )),
                    Some(i) => {
                        if !self.face_maps.iter().any(|m| m.child == i && m.parent == j) {
                            out.push(format!(
                                "missing face morphism {} -> {}",
                                self.cones[i].id, p.id
                            ));
                        }
                    }
                }
            }
        }
        // closure under composition
        for a in &self.face_maps {
            for b in &self.face_maps {
                if a.parent == b.child
                    && a.child != b.parent
                    && !self.face_maps.iter().any(|m| m.child == a.child && m.parent == b.parent)
                {
                    out.push(format!(
                        "face morphisms {} -> {} -> {} have no composite",
                        self.cones[a.child].id, self.cones[a.parent].id, self.cones[b.parent].id
                    ));
                }
            }
        }
        // maximal cones meet along common faces
        let maximal = self.maximal_cones();
        for (&i, &j) in maximal.iter().tuple_combinations() {
            if let Some(msg) = self.intersection_violation(i, j) {
                out.push(msg);
            }
        }
        out.sort();
        out.dedup();
        out
    }

    fn intersection_violation(&self, i: usize, j: usize) -> Option<String> {
        let (a, b) = (&self.cones[i], &self.cones[j]);
        let common: Vec<&Vec<Z>> = a.rays.iter().filter(|r| b.rays.contains(r)).collect();
        let mut c = Constraints::new(self.lattice_rank);
        for r in &a.rays {
            if common.contains(&r) {
                c.eq.push((to_q_vec(r), Q::zero()));
            } else {
                c.gt.push((to_q_vec(r), Q::zero()));
            }
        }
        for r in &b.rays {
            if !common.contains(&r) {
                c.gt.push((to_q_vec(r).into_iter().map(|x| -x).collect(), Q::zero()));
            }
        }
        if c.is_strictly_feasible() {
            None
        } else {
            Some(format!(
                "cones {} and {} do not meet along a common face",
                a.id, b.id
            ))
        }
    }

    /// Stellar subdivision at the primitive vector v (which must lie in the support).
    pub fn stellar_subdivide(&self, v: &[Z]) -> Result<Self> {
        let vq = to_q_vec(v);
        let tau = self
            .locate(&vq)
            .ok_or_else(|| Error::Invalid(format!("{} is not in the support", fmt_vec(v))))?;
        if self.cones[tau].rays.len() == 1 && self.cones[tau].rays[0] == v {
            return Ok(self.clone());
        }
        let tau_rays = &self.cones[tau].rays;
        let mut maximal: Vec<Vec<Vec<Z>>> = Vec::new();
        for m in self.maximal_cones() {
            let c = &self.cones[m];
            if !self.is_face_of(tau, m) {
                maximal.push(c.rays.clone());
                continue;
            }
            let d = c.dimension();
            for face in c.face_ray_sets() {
                let rays: Vec<Vec<Z>> = face.iter().map(|&k| c.rays[k].clone()).collect();
                if rank_q(&rays.iter().map(|r| to_q_vec(r)).collect::<Vec<_>>(), self.lattice_rank) + 1 != d {
                    continue;
                }
                if tau_rays.iter().all(|r| rays.contains(r)) {
                    continue;
                }
                let mut g = rays;
                g.push(v.to_vec());
                maximal.push(g);
            }
        }
        Self::from_maximal(self.lattice_rank, &maximal)
    }
}

/// Structural isomorphism for complexes whose cones carry matching ids: the
/// 1-dimensional cones correspond by id, their rays are related by a linear map
/// that identifies the lattices of the supports, and cones and face maps agree.
pub fn isomorphic_by_ids(a: &ConeComplex, b: &ConeComplex) -> bool {
    if a.cones.len() != b.cones.len() {
        return false;
    }
    let mut perm = Vec::new();
    for c in &a.cones {
        match b.index_of(&c.id) {
            Ok(j) if b.cones[j].rays.len() == c.rays.len() => perm.push(j),
            _ => return false,
        }
    }
    let fa: BTreeSet<(usize, usize)> = a.face_maps.iter().map(|m| (perm[m.child], perm[m.parent])).collect();
    let fb: BTreeSet<(usize, usize)> = b.face_maps.iter().map(|m| (m.child, m.parent)).collect();
    if fa != fb {
        return false;
    }
    // ray correspondence through the 1-dimensional cones
    let mut pairs: Vec<(Vec<Z>, Vec<Z>)> = Vec::new();
    for i in a.ray_cones() {
        pairs.push((a.cones[i].rays[0].clone(), b.cones[perm[i]].rays[0].clone()));
    }
    // every cone's rays must be the rays of its 1-dimensional faces, on both sides
    for (i, c) in a.cones.iter().enumerate() {
        let mapped: Option<Vec<Vec<Z>>> = c
            .rays
            .iter()
            .map(|r| pairs.iter().find(|(x, _)| x == r).map(|(_, y)| y.clone()))
            .collect();
        let Some(mut mapped) = mapped else {
            return false;
        };
        let mut target = b.cones[perm[i]].rays.clone();
        mapped.sort();
        target.sort();
        if mapped != target {
            return false;
        }
    }
    if pairs.is_empty() {
        return true;
    }
    let (na, nb) = (a.lattice_rank, b.lattice_rank);
    let src: Vec<Vec<Z>> = pairs.iter().map(|p| p.0.clone()).collect();
    let dst: Vec<Vec<Z>> = pairs.iter().map(|p| p.1.clone()).collect();
    let sat_a = saturation(&src, na);
    let sat_b = saturation(&dst, nb);
    if sat_a.len() != sat_b.len() {
        return false;
    }
    // coordinates of every vector of span(src) in the basis sat_a
    let basis_t = transpose(&sat_a.iter().map(|r| to_q_vec(r)).collect::<Vec<_>>(), na);
    let coords = |v: &[Z]| solve_q(&basis_t, &to_q_vec(v), sat_a.len());
    // M(sat_a[k]) determined by solving the ray equations for the images of the basis
    let k = sat_a.len();
    let mut rows = Vec::new();
    let mut rhs: Vec<Vec<Q>> = Vec::new();
    for (s, d) in src.iter().zip(&dst) {
        let Some(c) = coords(s) else {
            return false;
        };
        rows.push(c);
        rhs.push(to_q_vec(d));
    }
    // solve rows · X = rhs for X (k × nb)
    let mut images: Vec<Vec<Q>> = vec![vec![Q::zero(); nb]; k];
    for col in 0..nb {
        let b_col: Vec<Q> = rhs.iter().map(|r| r[col].clone()).collect();
        let Some(x) = solve_q(&rows, &b_col, k) else {
            return false;
        };
        for (kk, val) in x.into_iter().enumerate() {
            images[kk][col] = val;
        }
    }
    // consistency: rows · X must reproduce rhs
    for (r, d) in rows.iter().zip(&rhs) {
        for col in 0..nb {
            let s: Q = r.iter().zip(&images).map(|(x, im)| x * &im[col]).sum();
            if s != d[col] {
                return false;
            }
        }
    }
    if images.iter().any(|v| v.iter().any(|x| !x.is_integer())) {
        return false;
    }
    let img_z: Vec<Vec<Z>> = images
        .iter()
        .map(|v| v.iter().map(|x| x.to_integer()).collect())
        .collect();
    lattice_index(&img_z, &sat_b, nb).is_some_and(|i| i.is_one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::zvec;

    pub(crate) fn p2() -> ConeComplex {
        let (a, b, c) = (zvec(&[1, 0]), zvec(&[0, 1]), zvec(&[-1, -1]));
        ConeComplex::from_maximal(2, &[vec![a.clone(), b.clone()], vec![b, c.clone()], vec![c, a]]).unwrap()
    }

    #[test]
    fn p2_fan_is_valid() {
        let f = p2();
        assert_eq!(f.cones.len(), 7);
        assert_eq!(f.validate(), Vec::<String>::new());
        assert_eq!(f.maximal_cones().len(), 3);
    }

    #[test]
    fn duplicate_face_map_reported() {
        let mut f = p2();
        let m = f.face_maps[0].clone();
        f.face_maps.push(m);
        let v = f.validate();
        assert_eq!(v.len(), 1);
        assert!(v[0].contains("duplicate face morphism"));
    }

    #[test]
    fn non_primitive_reported() {
        let mut f = p2();
        let i = f.cones.iter().position(|c| c.rays.len() == 2).unwrap();
        f.cones[i].rays[0] = zvec(&[2, 0]);
        let v = f.validate();
        assert!(v.iter().any(|s| s.contains("non-primitive")), "{v:?}");
    }

    #[test]
    fn overlapping_cones_reported() {
        let f = ConeComplex::from_maximal(
            2,
            &[vec![zvec(&[1, 0]), zvec(&[0, 1])], vec![zvec(&[1, 1]), zvec(&[-1, 1])]],
        )
        .unwrap();
        assert!(f.validate().iter().any(|s| s.contains("common face")));
    }

    #[test]
    fn stellar_subdivision_of_quadrant() {
        let f = ConeComplex::from_maximal(2, &[vec![zvec(&[1, 0]), zvec(&[0, 1])]]).unwrap();
        let g = f.stellar_subdivide(&zvec(&[1, 1])).unwrap();
        assert_eq!(g.maximal_cones().len(), 2);
        assert!(g.validate().is_empty());
    }

    #[test]
    fn file_round_trip() {
        let f = p2();
        let g = ConeComplex::from_file(&f.to_file()).unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn self_isomorphic() {
        assert!(isomorphic_by_ids(&p2(), &p2()));
    }
}
