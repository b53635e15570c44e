//! Chow and Hilbert decorations, decorated retraction, specialization merges,
//! and balancing of decorated complexes.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::complex::{retract, CellRef, Edge, Labels, OneComplex, Ray, Vertex};
use crate::arith::{primitive_split, sub_q, Q, Z};
use crate::cone_geometry::ConeComplex;
use crate::error::{Error, Result};

/// Positive integer labels on edges and rays, effective classes on vertices.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChowDecoration {
    pub edge_labels: Vec<u32>,
    pub ray_labels: Vec<u32>,
    pub vertex_classes: Vec<Vec<i64>>,
}

/// A Chow decoration together with Euler characteristics on vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertDecoration {
    #[serde(flatten)]
    pub chow: ChowDecoration,
    pub vertex_euler: Vec<i64>,
    /// Declared global Euler characteristic.
    pub euler: i64,
}

impl ChowDecoration {
    /// Unit labels and zero classes of the given rank.
    pub fn trivial(g: &OneComplex, class_rank: usize) -> Self {
        ChowDecoration {
            edge_labels: vec![1; g.edges.len()],
            ray_labels: vec![1; g.rays.len()],
            vertex_classes: vec![vec![0; class_rank]; g.vertices.len()],
        }
    }

    pub fn label(&self, c: CellRef) -> u32 {
        match c {
            CellRef::Edge(i) => self.edge_labels[i],
            CellRef::Ray(i) => self.ray_labels[i],
        }
    }

    pub fn validate(&self, g: &OneComplex) -> Vec<String> {
        let mut out = Vec::new();
        if self.edge_labels.len() != g.edges.len() {
            out.push(format!("{} edge labels for {} edges", self.edge_labels.len(), g.edges.len()));
        }
        if self.ray_labels.len() != g.rays.len() {
            out.push(format!("{} ray labels for {} rays", self.ray_labels.len(), g.rays.len()));
        }
        if self.vertex_classes.len() != g.vertices.len() {
            out.push(format!(
                "{} vertex classes for {} vertices",
                self.vertex_classes.len(),
                g.vertices.len()
            ));
        }
        if self.edge_labels.iter().chain(&self.ray_labels).any(|&n| n == 0) {
            out.push("labels must be positive".into());
        }
        let rank = self.vertex_classes.first().map_or(0, |c| c.len());
        if self.vertex_classes.iter().any(|c| c.len() != rank) {
            out.push("vertex classes have different ranks".into());
        }
        if self.vertex_classes.iter().flatten().any(|&x| x < 0) {
            out.push("vertex classes must be effective".into());
        }
        out
    }

    /// Sum of the vertex classes.
    pub fn total_class(&self) -> Vec<i64> {
        let rank = self.vertex_classes.first().map_or(0, |c| c.len());
        let mut t = vec![0; rank];
        for c in &self.vertex_classes {
            for (a, b) in t.iter_mut().zip(c) {
                *a += b;
            }
        }
        t
    }

    fn labels(&self) -> Labels {
        Labels {
            edges: self.edge_labels.clone(),
            rays: self.ray_labels.clone(),
            classes: self.vertex_classes.clone(),
        }
    }
}

impl HilbertDecoration {
    pub fn validate(&self, g: &OneComplex) -> Vec<String> {
        let mut out = self.chow.validate(g);
        if self.vertex_euler.len() != g.vertices.len() {
            out.push(format!("{} Euler characteristics for {} vertices", self.vertex_euler.len(), g.vertices.len()));
        } else if self.vertex_euler.iter().sum::<i64>() != self.euler {
            out.push(format!(
                "vertex Euler characteristics sum to {}, expected {}",
                self.vertex_euler.iter().sum::<i64>(),
                self.euler
            ));
        }
        out
    }
}

/// Retraction of a decorated complex. Vertices carrying a nonzero class, and
/// 2-valent vertices between cells with different labels, are kept so that the
/// total class is unchanged.
pub fn retract_decorated(
    g: &OneComplex,
    deco: &ChowDecoration,
    ambient: Option<&ConeComplex>,
) -> (OneComplex, ChowDecoration) {
    let (h, lab) = retract(g, ambient, Some(&deco.labels()));
    let lab = lab.expect("labels carried");
    (
        h,
        ChowDecoration {
            edge_labels: lab.edges,
            ray_labels: lab.rays,
            vertex_classes: lab.classes,
        },
    )
}

/// Result of merging vertex groups.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Specialization {
    pub complex: OneComplex,
    pub decoration: ChowDecoration,
    /// Old vertex index → new vertex index.
    pub vertex_map: Vec<usize>,
}

/// Merges each group of vertices into one vertex placed at the position of the
/// group's first member. Edges inside a group disappear; other cells are
/// re-attached and cells that come to coincide add their labels; vertex
/// classes add.
pub fn specialize(g: &OneComplex, deco: &ChowDecoration, groups: &[Vec<usize>]) -> Result<Specialization> {
    let nv = g.vertices.len();
    let mut rep: Vec<usize> = (0..nv).collect();
    for grp in groups {
        let Some(&first) = grp.first() else { continue };
        for &v in grp {
            if v >= nv {
                return Err(Error::Invalid(format!("vertex {v} out of range")));
            }
            if rep[v] != v {
                return Err(Error::Invalid(format!("vertex {v} appears in two groups")));
            }
            rep[v] = first;
        }
    }
    let reps: Vec<usize> = (0..nv).filter(|&v| rep[v] == v).collect();
    let new_index: BTreeMap<usize, usize> = reps.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let vertex_map: Vec<usize> = (0..nv).map(|v| new_index[&rep[v]]).collect();
    let mut out = OneComplex::new(g.dimension);
    let rank = deco.vertex_classes.first().map_or(0, |c| c.len());
    let mut classes = vec![vec![0i64; rank]; reps.len()];
    for &v in &reps {
        out.vertices.push(Vertex {
            position: g.vertices[v].position.clone(),
            face: g.vertices[v].face.clone(),
        });
    }
    for v in 0..nv {
        for (a, b) in classes[vertex_map[v]].iter_mut().zip(&deco.vertex_classes[v]) {
            *a += b;
        }
    }
    let mut edges: BTreeMap<(usize, usize, Vec<Z>), (Q, u32)> = BTreeMap::new();
    for (i, e) in g.edges.iter().enumerate() {
        let (a, b) = (vertex_map[e.ends[0]], vertex_map[e.ends[1]]);
        if a == b {
            continue;
        }
        let diff = sub_q(&out.vertices[b].position, &out.vertices[a].position);
        let (dir, len) = primitive_split(&diff)
            .ok_or_else(|| Error::Invalid(format!("edge {i} collapses between distinct groups")))?;
        if dir != e.direction {
            return Err(Error::Invalid(format!("edge {i} changes direction under the merge")));
        }
        let key = if a < b { (a, b, dir) } else { (b, a, dir.iter().map(|x| -x).collect()) };
        edges
            .entry(key)
            .and_modify(|(_, n)| *n += deco.edge_labels[i])
            .or_insert((len, deco.edge_labels[i]));
    }
    let mut rays: BTreeMap<(usize, Vec<Z>), u32> = BTreeMap::new();
    for (i, r) in g.rays.iter().enumerate() {
        *rays.entry((vertex_map[r.vertex], r.direction.clone())).or_insert(0) += deco.ray_labels[i];
    }
    let mut edge_labels = Vec::new();
    for ((a, b, direction), (length, n)) in edges {
        out.edges.push(Edge {
            ends: [a, b],
            direction,
            length,
        });
        edge_labels.push(n);
    }
    let mut ray_labels = Vec::new();
    for ((vertex, direction), n) in rays {
        out.rays.push(Ray { vertex, direction });
        ray_labels.push(n);
    }
    Ok(Specialization {
        complex: out,
        decoration: ChowDecoration {
            edge_labels,
            ray_labels,
            vertex_classes: classes,
        },
        vertex_map,
    })
}

/// Specialization of a Hilbert-decorated complex: Euler characteristics add.
pub fn specialize_hilbert(
    g: &OneComplex,
    deco: &HilbertDecoration,
    groups: &[Vec<usize>],
) -> Result<(OneComplex, HilbertDecoration)> {
    let s = specialize(g, &deco.chow, groups)?;
    let mut euler = vec![0; s.complex.vertices.len()];
    for (v, &x) in deco.vertex_euler.iter().enumerate() {
        euler[s.vertex_map[v]] += x;
    }
    Ok((
        s.complex,
        HilbertDecoration {
            chow: s.decoration,
            vertex_euler: euler,
            euler: deco.euler,
        },
    ))
}

/// Weighted direction sum at v.
pub fn weighted_direction_sum(g: &OneComplex, deco: &ChowDecoration, v: usize) -> Vec<Z> {
    let mut s = vec![Z::zero(); g.dimension];
    for (c, d) in g.flags(v) {
        let w = Z::from(deco.label(c));
        for (a, b) in s.iter_mut().zip(&d) {
            *a += &w * b;
        }
    }
    s
}

/// Vertices in the interior of a maximal ambient cell (all vertices when there
/// is no ambient) whose weighted direction sum is nonzero.
pub fn check_balancing_decorated(
    g: &OneComplex,
    deco: &ChowDecoration,
    ambient: Option<&ConeComplex>,
) -> Vec<usize> {
    (0..g.vertices.len())
        .filter(|&v| super::map::in_maximal_interior(&g.vertices[v].position, ambient))
        .filter(|&v| weighted_direction_sum(g, deco, v).iter().any(|x| !x.is_zero()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{qvec, zvec};
    use crate::one_complexes::complex::one_complex;

    #[test]
    fn merge_adds_labels_and_classes() {
        // two vertices joined by an edge, each with a ray in direction e2
        let g = one_complex(2, &[qvec(&[0, 0]), qvec(&[1, 0])], &[(0, 1)], &[(0, zvec(&[0, 1])), (1, zvec(&[0, 1]))]).unwrap();
        let d = ChowDecoration {
            edge_labels: vec![1],
            ray_labels: vec![1, 2],
            vertex_classes: vec![vec![1], vec![2]],
        };
        let s = specialize(&g, &d, &[vec![0, 1]]).unwrap();
        assert_eq!(s.complex.vertices.len(), 1);
        assert!(s.complex.edges.is_empty());
        assert_eq!(s.decoration.ray_labels, vec![3]);
        assert_eq!(s.decoration.total_class(), d.total_class());
    }

    #[test]
    fn hilbert_euler_adds() {
        let g = one_complex(1, &[qvec(&[0]), qvec(&[1])], &[(0, 1)], &[]).unwrap();
        let h = HilbertDecoration {
            chow: ChowDecoration::trivial(&g, 1),
            vertex_euler: vec![1, 1],
            euler: 2,
        };
        assert!(h.validate(&g).is_empty());
        let (c, h2) = specialize_hilbert(&g, &h, &[vec![0, 1]]).unwrap();
        assert_eq!(c.vertices.len(), 1);
        assert_eq!(h2.vertex_euler, vec![2]);
        assert!(h2.validate(&c).is_empty());
    }

    #[test]
    fn decorated_retraction_keeps_classes() {
        let g = one_complex(1, &[qvec(&[0]), qvec(&[1]), qvec(&[2])], &[(0, 1), (1, 2)], &[]).unwrap();
        let mut d = ChowDecoration::trivial(&g, 1);
        d.vertex_classes[1] = vec![1];
        let (h, e) = retract_decorated(&g, &d, None);
        assert_eq!(h.vertices.len(), 3);
        d.vertex_classes[1] = vec![0];
        d.vertex_classes[0] = vec![2];
        let (h, e2) = retract_decorated(&g, &d, None);
        assert_eq!(h.vertices.len(), 2);
        assert_eq!(e2.total_class(), vec![2]);
        assert_eq!(e.total_class(), vec![1]);
    }

    #[test]
    fn balancing_of_weighted_vertex() {
        let g = one_complex(1, &[qvec(&[0])], &[], &[(0, zvec(&[1])), (0, zvec(&[-1]))]).unwrap();
        let mut d = ChowDecoration::trivial(&g, 0);
        assert!(check_balancing_decorated(&g, &d, None).is_empty());
        d.ray_labels[0] = 2;
        assert_eq!(check_balancing_decorated(&g, &d, None), vec![0]);
    }
}
