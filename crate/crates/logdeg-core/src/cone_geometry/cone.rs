//! Rational polyhedral cones given by primitive ray generators.

use itertools::Itertools;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{content, dot_q, is_primitive, primitive_of_rational, serde_zvecs, to_q_vec, Q, Z};
use crate::error::{Error, Result};
use crate::linalg::{lattice_index, nullspace_q, rank_q, rank_z, saturation, to_qmat, ZMat};
use crate::lp::Constraints;

/// A rational polyhedral cone in Z^{ambient_rank} ⊗ R, stored by its rays.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Cone {
    pub id: String,
    pub ambient_rank: usize,
    #[serde(with = "serde_zvecs")]
    pub rays: Vec<Vec<Z>>,
}

/// Inequality description {x : E x = 0, A x ≥ 0}; rows are integer covectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Halfspaces {
    pub equations: ZMat,
    pub inequalities: ZMat,
}

fn primitive_z(v: &[Z]) -> Vec<Z> {
    let g = content(v);
    if g.is_zero() {
        return v.to_vec();
    }
    v.iter().map(|x| x / &g).collect()
}

fn parallel_same_direction(a: &[Z], b: &[Z]) -> bool {
    primitive_z(a) == primitive_z(b)
}

impl Cone {
    pub fn new(id: impl Into<String>, ambient_rank: usize, rays: Vec<Vec<Z>>) -> Self {
        Cone {
            id: id.into(),
            ambient_rank,
            rays,
        }
    }

    /// Cone generated by arbitrary nonzero integer vectors: generators are made
    /// primitive and reduced to the extreme rays.
    pub fn from_generators(id: impl Into<String>, n: usize, gens: &[Vec<Z>]) -> Result<Self> {
        let rays = extreme_rays(gens, n)?;
        Ok(Cone::new(id, n, rays))
    }

    pub fn dimension(&self) -> usize {
        rank_z(&self.rays, self.ambient_rank)
    }

    pub fn rays_q(&self) -> Vec<Vec<Q>> {
        self.rays.iter().map(|r| to_q_vec(r)).collect()
    }

    /// Invariant violations (primitivity, parallel rays, strong convexity, ranks).
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        for r in &self.rays {
            if r.len() != self.ambient_rank {
                out.push(format!(
                    "cone {}: ray of length {} in rank {} lattice",
                    self.id,
                    r.len(),
                    self.ambient_rank
                ));
                return out;
            }
            if r.iter().all(|x| x.is_zero()) {
                out.push(format!("cone {}: zero ray generator", self.id));
                return out;
            }
            if !is_primitive(r) {
                out.push(format!(
                    "cone {}: non-primitive generator {}",
                    self.id,
                    fmt_vec(r)
                ));
            }
        }
        for (i, j) in (0..self.rays.len()).tuple_combinations() {
            if parallel_same_direction(&self.rays[i], &self.rays[j]) {
                out.push(format!(
                    "cone {}: parallel generators {} and {}",
                    self.id,
                    fmt_vec(&self.rays[i]),
                    fmt_vec(&self.rays[j])
                ));
            }
        }
        if !self.is_strongly_convex() {
            out.push(format!("cone {}: contains a line", self.id));
        } else {
            for (i, r) in self.rays.iter().enumerate() {
                let others: Vec<Vec<Z>> = self
                    .rays
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| *j != i)
                    .map(|(_, v)| v.clone())
                    .collect();
                if generated_cone_contains(&others, &to_q_vec(r), self.ambient_rank) {
                    out.push(format!(
                        "cone {}: generator {} is not extreme",
                        self.id,
                        fmt_vec(r)
                    ));
                }
            }
        }
        out
    }

    /// True iff the ray subset `s` (indices) is exactly the ray set of a face.
    pub fn is_face_subset(&self, s: &[usize]) -> bool {
        let mut c = Constraints::new(self.ambient_rank);
        for (i, r) in self.rays.iter().enumerate() {
            if s.contains(&i) {
                c.eq.push((to_q_vec(r), Q::zero()));
            } else {
                c.gt.push((to_q_vec(r), Q::zero()));
            }
        }
        c.is_strictly_feasible()
    }

    pub fn is_strongly_convex(&self) -> bool {
        self.is_face_subset(&[])
    }

    /// Ray-index sets of all faces, smallest first (the zero face is `[]`).
    pub fn face_ray_sets(&self) -> Vec<Vec<usize>> {
        let m = self.rays.len();
        if self.is_simplicial() {
            return (0..=m)
                .flat_map(|k| (0..m).combinations(k))
                .collect();
        }
        (0..=m)
            .flat_map(|k| (0..m).combinations(k))
            .filter(|s| self.is_face_subset(s))
            .collect()
    }

    pub fn is_simplicial(&self) -> bool {
        self.dimension() == self.rays.len()
    }

    /// Simplicial with rays forming part of a lattice basis.
    pub fn is_smooth(&self) -> bool {
        if !self.is_simplicial() {
            return false;
        }
        if self.rays.is_empty() {
            return true;
        }
        let sat = saturation(&self.rays, self.ambient_rank);
        lattice_index(&self.rays, &sat, self.ambient_rank).is_some_and(|i| i == Z::from(1))
    }

    /// Basis of the lattice N_σ = span(σ) ∩ Zⁿ.
    pub fn lattice_basis(&self) -> ZMat {
        saturation(&self.rays, self.ambient_rank)
    }

    /// p ∈ σ
    pub fn contains(&self, p: &[Q]) -> bool {
        generated_cone_contains(&self.rays, p, self.ambient_rank)
    }

    /// p in the relative interior of σ.
    pub fn relint_contains(&self, p: &[Q]) -> bool {
        if self.rays.is_empty() {
            return p.iter().all(|x| x.is_zero());
        }
        let m = self.rays.len();
        let mut c = Constraints::new(m);
        for k in 0..self.ambient_rank {
            let row: Vec<Q> = self.rays.iter().map(|r| Q::from_integer(r[k].clone())).collect();
            c.eq.push((row, p[k].clone()));
        }
        for i in 0..m {
            let mut row = vec![Q::zero(); m];
            row[i] = Q::from(Z::from(1));
            c.gt.push((row, Q::zero()));
        }
        c.is_strictly_feasible()
    }

    /// A point in the relative interior: the sum of the rays.
    pub fn interior_point(&self) -> Vec<Q> {
        let mut p = vec![Q::zero(); self.ambient_rank];
        for r in &self.rays {
            for (x, y) in p.iter_mut().zip(r) {
                *x += Q::from_integer(y.clone());
            }
        }
        p
    }

    /// Facet inequalities (inner normals inside the span) and equations of the span.
    pub fn halfspaces(&self) -> Halfspaces {
        let n = self.ambient_rank;
        let rq = self.rays_q();
        let equations: ZMat = nullspace_q(&rq, n)
            .iter()
            .filter_map(|v| primitive_of_rational(v))
            .collect();
        let d = self.dimension();
        let mut inequalities: ZMat = Vec::new();
        if d == 0 {
            return Halfspaces {
                equations,
                inequalities,
            };
        }
        // span basis
        let mut span = rq.clone();
        let piv = crate::linalg::rref(&mut span, n);
        let basis: Vec<Vec<Q>> = span.into_iter().take(piv.len()).collect();
        for subset in (0..self.rays.len()).combinations(d - 1) {
            let sub: Vec<Vec<Q>> = subset.iter().map(|&i| rq[i].clone()).collect();
            if rank_q(&sub, n) != d - 1 {
                continue;
            }
            // w = Σ a_i basis_i with w·s = 0 for s in the subset
            let m: Vec<Vec<Q>> = sub
                .iter()
                .map(|s| basis.iter().map(|b| dot_q(b, s)).collect())
                .collect();
            let ns = nullspace_q(&m, basis.len());
            if ns.len() != 1 {
                continue;
            }
            let mut w = vec![Q::zero(); n];
            for (a, b) in ns[0].iter().zip(&basis) {
                for k in 0..n {
                    w[k] += a * &b[k];
                }
            }
            let vals: Vec<Q> = rq.iter().map(|r| dot_q(&w, r)).collect();
            let sign = if vals.iter().all(|v| !v.is_negative()) {
                1
            } else if vals.iter().all(|v| !v.is_positive()) {
                -1
            } else {
                continue;
            };
            let w: Vec<Q> = w.into_iter().map(|x| if sign < 0 { -x } else { x }).collect();
            if let Some(p) = primitive_of_rational(&w) {
                if !inequalities.contains(&p) {
                    inequalities.push(p);
                }
            }
        }
        inequalities.sort();
        Halfspaces {
            equations,
            inequalities,
        }
    }
}

pub(crate) fn fmt_vec(v: &[Z]) -> String {
    format!("({})", v.iter().map(|x| x.to_string()).join(","))
}

/// p ∈ cone(gens)
pub fn generated_cone_contains(gens: &[Vec<Z>], p: &[Q], n: usize) -> bool {
    if gens.is_empty() {
        return p.iter().all(|x| x.is_zero());
    }
    let m = gens.len();
    let mut c = Constraints::new(m);
    for k in 0..n {
        let row: Vec<Q> = gens.iter().map(|r| Q::from_integer(r[k].clone())).collect();
        c.eq.push((row, p[k].clone()));
    }
    for i in 0..m {
        let mut row = vec![Q::zero(); m];
        row[i] = Q::from_integer(Z::from(1));
        c.ge.push((row, Q::zero()));
    }
    c.is_strictly_feasible()
}

/// Extreme rays of cone(gens) as primitive vectors (sorted); error if the cone
/// contains a line.
pub fn extreme_rays(gens: &[Vec<Z>], n: usize) -> Result<Vec<Vec<Z>>> {
    let mut prim: Vec<Vec<Z>> = Vec::new();
    for g in gens {
        if g.iter().all(|x| x.is_zero()) {
            continue;
        }
        let p = primitive_z(g);
        if !prim.contains(&p) {
            prim.push(p);
        }
    }
    let probe = Cone::new("", n, prim.clone());
    if !probe.is_strongly_convex() {
        return Err(Error::Invalid("generated cone contains a line".into()));
    }
    let mut out = Vec::new();
    for (i, r) in prim.iter().enumerate() {
        let others: Vec<Vec<Z>> = prim
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, v)| v.clone())
            .collect();
        if !generated_cone_contains(&others, &to_q_vec(r), n) {
            out.push(r.clone());
        }
    }
    out.sort();
    Ok(out)
}

/// Extreme rays of the pointed cone {x : E x = 0, A x ≥ 0}.
pub fn cone_from_halfspaces(h: &Halfspaces, n: usize) -> Result<Vec<Vec<Z>>> {
    let eq = to_qmat(&h.equations);
    let ineq = to_qmat(&h.inequalities);
    let lin = nullspace_q(&eq, n);
    let d = lin.len();
    if d == 0 {
        return Ok(vec![]);
    }
    // lineality check: some nonzero x in the lin space with A x = 0
    let mut lrows = eq.clone();
    lrows.extend(ineq.iter().cloned());
    if rank_q(&lrows, n) < n {
        return Err(Error::Invalid("cone described by halfspaces contains a line".into()));
    }
    let mut rays: Vec<Vec<Z>> = Vec::new();
    for subset in (0..ineq.len()).combinations(d - 1) {
        let mut rows = eq.clone();
        rows.extend(subset.iter().map(|&i| ineq[i].clone()));
        let ns = nullspace_q(&rows, n);
        if ns.len() != 1 {
            continue;
        }
        for sign in [1i64, -1] {
            let x: Vec<Q> = ns[0].iter().map(|v| v * Q::from_integer(Z::from(sign))).collect();
            if ineq.iter().all(|a| !dot_q(a, &x).is_negative()) {
                if let Some(p) = primitive_of_rational(&x) {
                    if !rays.contains(&p) {
                        rays.push(p);
                    }
                }
            }
        }
    }
    rays.sort();
    Ok(rays)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{qvec, zvec};

    fn cone(rays: &[&[i64]]) -> Cone {
        Cone::new("c", rays[0].len(), rays.iter().map(|r| zvec(r)).collect())
    }

    #[test]
    fn positive_quadrant() {
        let c = cone(&[&[1, 0], &[0, 1]]);
        assert!(c.violations().is_empty());
        assert_eq!(c.dimension(), 2);
        assert!(c.is_smooth());
        assert_eq!(c.face_ray_sets().len(), 4);
        assert!(c.contains(&qvec(&[3, 0])));
        assert!(!c.relint_contains(&qvec(&[3, 0])));
        assert!(c.relint_contains(&qvec(&[3, 1])));
        assert!(!c.contains(&qvec(&[-1, 1])));
    }

    #[test]
    fn non_primitive_and_line() {
        let c = cone(&[&[2, 2], &[0, 1]]);
        assert_eq!(c.violations().len(), 1);
        let l = cone(&[&[1, 0], &[-1, 0]]);
        assert!(l.violations().iter().any(|v| v.contains("line")));
    }

    #[test]
    fn square_cone_faces() {
        let c = cone(&[&[1, 0, 1], &[0, 1, 1], &[-1, 0, 1], &[0, -1, 1]]);
        assert!(c.violations().is_empty());
        // 0, 4 rays, 4 edges, 1 top
        assert_eq!(c.face_ray_sets().len(), 10);
        assert!(!c.is_simplicial());
        let h = c.halfspaces();
        assert_eq!(h.inequalities.len(), 4);
        let back = cone_from_halfspaces(&h, 3).unwrap();
        let mut rays = c.rays.clone();
        rays.sort();
        assert_eq!(back, rays);
    }

    #[test]
    fn extreme_rays_prunes() {
        let r = extreme_rays(&[zvec(&[1, 0]), zvec(&[1, 1]), zvec(&[0, 2])], 2).unwrap();
        assert_eq!(r, vec![zvec(&[0, 1]), zvec(&[1, 0])]);
        assert!(extreme_rays(&[zvec(&[1, 0]), zvec(&[-1, 0])], 2).is_err());
    }

    #[test]
    fn lower_dimensional_halfspaces() {
        let c = cone(&[&[1, 0, 0], &[0, 1, 0]]);
        let h = c.halfspaces();
        assert_eq!(h.equations.len(), 1);
        assert_eq!(h.inequalities.len(), 2);
        let back = cone_from_halfspaces(&h, 3).unwrap();
        assert_eq!(back.len(), 2);
    }

    #[test]
    fn smoothness() {
        assert!(!cone(&[&[1, 0], &[1, 2]]).is_smooth());
        assert!(cone(&[&[1, 0], &[1, 1]]).is_smooth());
    }
}
