//! Combinatorial types of embedded 1-complexes with point conditions and their
//! parameter cones.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{is_primitive, to_q_vec, Q, Z};
use crate::cone_geometry::{ConeComplex, Halfspaces};
use crate::error::{Error, Result};
use crate::lp::Constraints;
use crate::one_complexes::{Edge, OneComplex, Ray, Vertex};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TypeEdge {
    pub ends: [usize; 2],
    #[serde(with = "crate::arith::serde_zvec")]
    pub direction: Vec<Z>,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TypeRay {
    pub vertex: usize,
    #[serde(with = "crate::arith::serde_zvec")]
    pub direction: Vec<Z>,
}

/// The cell a point condition is incident to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TypeCell {
    Vertex(usize),
    Edge(usize),
    Ray(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Incidence {
    pub point: usize,
    pub cell: TypeCell,
}

/// Graph, containing faces, directions, and the incidences with declared points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CombinatorialType {
    pub dimension: usize,
    /// Ambient cone id per vertex (empty strings when the ambient is Qⁿ).
    pub vertex_faces: Vec<String>,
    #[serde(default)]
    pub edges: Vec<TypeEdge>,
    #[serde(default)]
    pub rays: Vec<TypeRay>,
    #[serde(default, with = "crate::arith::serde_qvecs")]
    pub points: Vec<Vec<Q>>,
    #[serde(default)]
    pub incidences: Vec<Incidence>,
}

/// The polyhedron of realizations: variables are vertex coordinates, then edge
/// lengths, then one position parameter per edge/ray incidence.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ParameterCone {
    pub variables: Vec<String>,
    #[serde(skip)]
    pub constraints: Constraints,
    /// Dimension of the relatively open solution set; −1 when empty.
    pub dimension: i64,
    #[serde(with = "opt_qvec")]
    pub witness: Option<Vec<Q>>,
}

mod opt_qvec {
    use super::Q;
    use serde::Serializer;
    pub fn serialize<S: Serializer>(v: &Option<Vec<Q>>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(v) => crate::arith::serde_qvec::serialize(v, s),
            None => s.serialize_none(),
        }
    }
}

impl CombinatorialType {
    pub fn validate(&self, ambient: Option<&ConeComplex>) -> Vec<String> {
        let mut out = Vec::new();
        let nv = self.vertex_faces.len();
        let n = self.dimension;
        for (i, e) in self.edges.iter().enumerate() {
            if e.ends.iter().any(|&v| v >= nv) || e.ends[0] == e.ends[1] {
                out.push(format!("edge {i}: bad endpoints"));
            }
            if e.direction.len() != n || !is_primitive(&e.direction) {
                out.push(format!("edge {i}: direction is not primitive"));
            }
        }
        for (i, r) in self.rays.iter().enumerate() {
            if r.vertex >= nv {
                out.push(format!("ray {i}: vertex out of range"));
            }
            if r.direction.len() != n || !is_primitive(&r.direction) {
                out.push(format!("ray {i}: direction is not primitive"));
            }
        }
        for p in &self.points {
            if p.len() != n {
                out.push("point of wrong length".into());
            }
        }
        for (k, inc) in self.incidences.iter().enumerate() {
            let ok = inc.point < self.points.len()
                && match inc.cell {
                    TypeCell::Vertex(i) => i < nv,
                    TypeCell::Edge(i) => i < self.edges.len(),
                    TypeCell::Ray(i) => i < self.rays.len(),
                };
            if !ok {
                out.push(format!("incidence {k} references an undeclared point or cell"));
            }
        }
        if let Some(a) = ambient {
            let mut known = true;
            for (v, f) in self.vertex_faces.iter().enumerate() {
                if a.index_of(f).is_err() {
                    out.push(format!("vertex {v}: unknown face '{f}'"));
                    known = false;
                }
            }
            if known {
                for (i, e) in self.edges.iter().filter(|e| e.ends.iter().all(|&v| v < nv)).enumerate() {
                    let fa = a.index_of(&self.vertex_faces[e.ends[0]]).expect("checked");
                    let fb = a.index_of(&self.vertex_faces[e.ends[1]]).expect("checked");
                    if !a.cofaces(fa).iter().any(|c| a.cofaces(fb).contains(c)) {
                        out.push(format!("edge {i}: endpoint faces have no common coface"));
                    }
                }
                for (i, r) in self.rays.iter().filter(|r| r.vertex < nv).enumerate() {
                    let f = a.index_of(&self.vertex_faces[r.vertex]).expect("checked");
                    let d = to_q_vec(&r.direction);
                    if !a.cofaces(f).iter().any(|&c| a.cones[c].contains(&d)) {
                        out.push(format!("ray {i}: direction leaves every cone containing its vertex"));
                    }
                }
            }
        }
        out
    }

    fn var_count(&self) -> usize {
        self.vertex_faces.len() * self.dimension
            + self.edges.len()
            + self
                .incidences
                .iter()
                .filter(|i| !matches!(i.cell, TypeCell::Vertex(_)))
                .count()
    }
}

/// The constraint system whose relatively open solution set parametrizes the
/// realizations of the type (embeddedness aside, which is an open condition
/// checked on realizations).
pub fn parameter_cone(t: &CombinatorialType, ambient: Option<&ConeComplex>) -> Result<ParameterCone> {
    let (variables, c) = parameter_constraints(t, ambient)?;
    let f = c.analyse();
    Ok(ParameterCone {
        variables,
        constraints: c,
        dimension: f.dimension,
        witness: f.witness,
    })
}

/// Dimension of the parameter cone of a type that is known to be realized:
/// when every strict inequality holds at some point, the cone is relatively
/// open in the solution space of its equations, so the dimension is a rank
/// count and no linear program is needed. Returns the number of variables and
/// the rank of the equations alongside the dimension.
pub fn realized_dimension(t: &CombinatorialType, ambient: Option<&ConeComplex>) -> Result<(usize, usize, i64)> {
    let (variables, c) = parameter_constraints(t, ambient)?;
    let m = variables.len();
    let rows: Vec<Vec<Q>> = c.eq.iter().map(|(r, _)| r.clone()).collect();
    let rank = crate::linalg::rank_q(&rows, m);
    Ok((m, rank, m as i64 - rank as i64))
}

/// Variables and constraints of the parameter cone.
pub fn parameter_constraints(t: &CombinatorialType, ambient: Option<&ConeComplex>) -> Result<(Vec<String>, Constraints)> {
    let errs = t.validate(ambient);
    if !errs.is_empty() {
        return Err(Error::Invalid(errs.join("; ")));
    }
    let n = t.dimension;
    let nv = t.vertex_faces.len();
    let ne = t.edges.len();
    let m = t.var_count();
    let x = |v: usize, k: usize| v * n + k;
    let len = |e: usize| nv * n + e;
    let mut variables = Vec::with_capacity(m);
    for v in 0..nv {
        for k in 0..n {
            variables.push(format!("x{v}_{k}"));
        }
    }
    for e in 0..ne {
        variables.push(format!("len{e}"));
    }
    let mut c = Constraints::new(m);
    let unit = |i: usize| {
        let mut r = vec![Q::zero(); m];
        r[i] = Q::one();
        r
    };
    // vertex in the relative interior of its face
    if let Some(a) = ambient {
        let mut cache: BTreeMap<&str, Halfspaces> = BTreeMap::new();
        for (v, f) in t.vertex_faces.iter().enumerate() {
            let h = cache
                .entry(f.as_str())
                .or_insert_with(|| a.cones[a.index_of(f).expect("validated")].halfspaces());
            for eq in &h.equations {
                let mut r = vec![Q::zero(); m];
                for k in 0..n {
                    r[x(v, k)] = Q::from_integer(eq[k].clone());
                }
                c.eq.push((r, Q::zero()));
            }
            for ineq in &h.inequalities {
                let mut r = vec![Q::zero(); m];
                for k in 0..n {
                    r[x(v, k)] = Q::from_integer(ineq[k].clone());
                }
                c.gt.push((r, Q::zero()));
            }
        }
    }
    // edges: x_b − x_a − len·d = 0, len > 0
    for (e, te) in t.edges.iter().enumerate() {
        for k in 0..n {
            let mut r = vec![Q::zero(); m];
            r[x(te.ends[1], k)] = Q::one();
            r[x(te.ends[0], k)] = -Q::one();
            r[len(e)] = -Q::from_integer(te.direction[k].clone());
            c.eq.push((r, Q::zero()));
        }
        c.gt.push((unit(len(e)), Q::zero()));
    }
    // incidences
    let mut next = nv * n + ne;
    for inc in &t.incidences {
        let p = &t.points[inc.point];
        match inc.cell {
            TypeCell::Vertex(v) => {
                for k in 0..n {
                    c.eq.push((unit(x(v, k)), p[k].clone()));
                }
            }
            TypeCell::Edge(e) => {
                let s = next;
                next += 1;
                variables.push(format!("s{}", inc.point));
                let te = &t.edges[e];
                for k in 0..n {
                    let mut r = unit(x(te.ends[0], k));
                    r[s] = Q::from_integer(te.direction[k].clone());
                    c.eq.push((r, p[k].clone()));
                }
                c.gt.push((unit(s), Q::zero()));
                let mut r = unit(len(e));
                r[s] = -Q::one();
                c.gt.push((r, Q::zero()));
            }
            TypeCell::Ray(i) => {
                let s = next;
                next += 1;
                variables.push(format!("s{}", inc.point));
                let tr = &t.rays[i];
                for k in 0..n {
                    let mut r = unit(x(tr.vertex, k));
                    r[s] = Q::from_integer(tr.direction[k].clone());
                    c.eq.push((r, p[k].clone()));
                }
                c.gt.push((unit(s), Q::zero()));
            }
        }
    }
    Ok((variables, c))
}

/// Dimension zero parameter cone.
pub fn is_rigid(t: &CombinatorialType, ambient: Option<&ConeComplex>) -> Result<bool> {
    Ok(parameter_cone(t, ambient)?.dimension == 0)
}

/// The 1-complex at a parameter point.
pub fn realize(t: &CombinatorialType, params: &[Q]) -> OneComplex {
    let n = t.dimension;
    let nv = t.vertex_faces.len();
    let mut g = OneComplex::new(n);
    for (v, f) in t.vertex_faces.iter().enumerate() {
        g.vertices.push(Vertex {
            position: params[v * n..(v + 1) * n].to_vec(),
            face: f.clone(),
        });
    }
    for (e, te) in t.edges.iter().enumerate() {
        g.edges.push(Edge {
            ends: te.ends,
            direction: te.direction.clone(),
            length: params[nv * n + e].clone(),
        });
    }
    for tr in &t.rays {
        g.rays.push(Ray {
            vertex: tr.vertex,
            direction: tr.direction.clone(),
        });
    }
    g
}

/// The combinatorial type of a realized complex with respect to the points,
/// each of which must lie on g. Faces are located in the ambient if given.
pub fn type_of(g: &OneComplex, ambient: Option<&ConeComplex>, points: &[Vec<Q>]) -> Result<CombinatorialType> {
    let vertex_faces: Vec<String> = g
        .vertices
        .iter()
        .map(|v| match ambient {
            Some(a) => a.locate(&v.position).map(|i| a.cones[i].id.clone()).unwrap_or_default(),
            None => String::new(),
        })
        .collect();
    let mut incidences = Vec::new();
    for (k, p) in points.iter().enumerate() {
        let cell = if let Some(v) = g.vertices.iter().position(|v| &v.position == p) {
            TypeCell::Vertex(v)
        } else if let Some(c) = g.cells().into_iter().find(|&c| g.cell(c).interior_contains(p)) {
            match c {
                crate::one_complexes::CellRef::Edge(i) => TypeCell::Edge(i),
                crate::one_complexes::CellRef::Ray(i) => TypeCell::Ray(i),
            }
        } else {
            return Err(Error::Invalid(format!("point {k} is not on the complex")));
        };
        incidences.push(Incidence { point: k, cell });
    }
    Ok(CombinatorialType {
        dimension: g.dimension,
        vertex_faces,
        edges: g
            .edges
            .iter()
            .map(|e| TypeEdge {
                ends: e.ends,
                direction: e.direction.clone(),
            })
            .collect(),
        rays: g
            .rays
            .iter()
            .map(|r| TypeRay {
                vertex: r.vertex,
                direction: r.direction.clone(),
            })
            .collect(),
        points: points.to_vec(),
        incidences,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{qf, qvec, zvec};

    fn line_type(points: Vec<Vec<Q>>, incidences: Vec<Incidence>) -> CombinatorialType {
        CombinatorialType {
            dimension: 2,
            vertex_faces: vec![String::new()],
            edges: vec![],
            rays: vec![
                TypeRay { vertex: 0, direction: zvec(&[-1, 0]) },
                TypeRay { vertex: 0, direction: zvec(&[0, -1]) },
                TypeRay { vertex: 0, direction: zvec(&[1, 1]) },
            ],
            points,
            incidences,
        }
    }

    #[test]
    fn free_line_has_dimension_two() {
        let pc = parameter_cone(&line_type(vec![], vec![]), None).unwrap();
        assert_eq!(pc.dimension, 2);
        assert!(!is_rigid(&line_type(vec![], vec![]), None).unwrap());
    }

    #[test]
    fn line_through_two_points_is_rigid() {
        // points on the horizontal and vertical legs of a line with vertex (2,3)
        let pts = vec![qvec(&[0, 3]), qvec(&[2, 1])];
        let inc = vec![
            Incidence { point: 0, cell: TypeCell::Ray(0) },
            Incidence { point: 1, cell: TypeCell::Ray(1) },
        ];
        let t = line_type(pts.clone(), inc);
        let pc = parameter_cone(&t, None).unwrap();
        assert_eq!(pc.dimension, 0);
        let w = pc.witness.unwrap();
        assert_eq!(&w[..2], &qvec(&[2, 3])[..]);
        let g = realize(&t, &w);
        assert_eq!(type_of(&g, None, &pts).unwrap(), t);
    }

    #[test]
    fn three_generic_points_are_infeasible() {
        let pts = vec![qvec(&[0, 3]), qvec(&[2, 1]), qvec(&[5, 7])];
        let inc = vec![
            Incidence { point: 0, cell: TypeCell::Ray(0) },
            Incidence { point: 1, cell: TypeCell::Ray(1) },
            Incidence { point: 2, cell: TypeCell::Ray(2) },
        ];
        assert_eq!(parameter_cone(&line_type(pts, inc), None).unwrap().dimension, -1);
    }

    #[test]
    fn face_constraints_in_ambient() {
        let amb = ConeComplex::from_maximal(2, &[vec![zvec(&[1, 0]), zvec(&[0, 1])]]).unwrap();
        // a vertex on the ray e1 with a ray going up
        let t = CombinatorialType {
            dimension: 2,
            vertex_faces: vec!["r1".into()],
            edges: vec![],
            rays: vec![TypeRay { vertex: 0, direction: zvec(&[0, 1]) }],
            points: vec![],
            incidences: vec![],
        };
        assert_eq!(parameter_cone(&t, Some(&amb)).unwrap().dimension, 1);
        let mut bad = t.clone();
        bad.rays[0].direction = zvec(&[0, -1]);
        assert!(parameter_cone(&bad, Some(&amb)).is_err());
    }

    #[test]
    fn edge_incidence() {
        let t = CombinatorialType {
            dimension: 1,
            vertex_faces: vec![String::new(), String::new()],
            edges: vec![TypeEdge { ends: [0, 1], direction: zvec(&[1]) }],
            rays: vec![],
            points: vec![vec![qf(1, 2)]],
            incidences: vec![Incidence { point: 0, cell: TypeCell::Edge(0) }],
        };
        // x0 < 1/2 < x1: two free parameters
        assert_eq!(parameter_cone(&t, None).unwrap().dimension, 2);
    }
}
