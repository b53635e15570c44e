//! Tropical stable maps to a cone complex, their balancing, and the Chow
//! 1-complex of a map.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::complex::{Edge, OneComplex, Ray, Vertex};
use super::decoration::ChowDecoration;
use super::geometry::{crossing, Cell};
use crate::arith::{is_primitive, primitive_split, sub_q, Q, Z};
use crate::cone_geometry::ConeComplex;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapVertex {
    #[serde(with = "crate::arith::serde_qvec")]
    pub position: Vec<Q>,
    #[serde(default)]
    pub genus: u32,
    #[serde(default)]
    pub class: Vec<i64>,
}

/// A bounded edge; its image is a segment of slope `dilation × direction`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapEdge {
    pub ends: [usize; 2],
    #[serde(with = "crate::arith::serde_zvec")]
    pub direction: Vec<Z>,
    pub dilation: u32,
}

/// A leg; dilation 0 (with zero direction) means the leg is contracted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapLeg {
    pub vertex: usize,
    #[serde(default)]
    pub marking: Option<u32>,
    #[serde(with = "crate::arith::serde_zvec")]
    pub direction: Vec<Z>,
    pub dilation: u32,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TropicalMap {
    pub dimension: usize,
    pub vertices: Vec<MapVertex>,
    #[serde(default)]
    pub edges: Vec<MapEdge>,
    #[serde(default)]
    pub legs: Vec<MapLeg>,
}

/// Is p in the relative interior of a maximal cone (always, without ambient)?
pub(crate) fn in_maximal_interior(p: &[Q], ambient: Option<&ConeComplex>) -> bool {
    match ambient {
        None => true,
        Some(a) => a.locate(p).map_or(false, |i| a.maximal_cones().contains(&i)),
    }
}

impl TropicalMap {
    /// Violations of every invariant except balancing.
    pub fn validate(&self, ambient: Option<&ConeComplex>) -> Vec<String> {
        let mut out = Vec::new();
        let n = self.dimension;
        let nv = self.vertices.len();
        if self.vertices.iter().any(|v| v.position.len() != n) {
            out.push(format!("vertex positions must have length {n}"));
            return out;
        }
        for (i, e) in self.edges.iter().enumerate() {
            if e.ends.iter().any(|&v| v >= nv) {
                out.push(format!("edge {i}: endpoint out of range"));
                continue;
            }
            if e.dilation == 0 {
                out.push(format!("edge {i}: bounded edge is contracted"));
                continue;
            }
            if e.direction.len() != n || !is_primitive(&e.direction) {
                out.push(format!("edge {i}: direction is not primitive"));
                continue;
            }
            let diff = sub_q(&self.vertices[e.ends[1]].position, &self.vertices[e.ends[0]].position);
            match primitive_split(&diff) {
                Some((d, _)) if d == e.direction => {}
                _ => out.push(format!("edge {i}: endpoint images do not follow the direction")),
            }
        }
        let mut markings = Vec::new();
        for (i, l) in self.legs.iter().enumerate() {
            if l.vertex >= nv {
                out.push(format!("leg {i}: vertex out of range"));
                continue;
            }
            if let Some(m) = l.marking {
                markings.push(m);
            }
            let zero = l.direction.iter().all(|x| x.is_zero());
            if l.direction.len() != n || (l.dilation == 0) != zero || (!zero && !is_primitive(&l.direction)) {
                out.push(format!("leg {i}: direction must be primitive, or zero exactly when contracted"));
                continue;
            }
            if let (Some(a), false) = (ambient, zero) {
                let parallel = a
                    .ray_cones()
                    .iter()
                    .any(|&c| a.cones[c].rays[0] == l.direction);
                if !parallel {
                    out.push(format!("leg {i}: direction is not along a ray of the ambient complex"));
                }
            }
        }
        markings.sort_unstable();
        if markings.windows(2).any(|w| w[0] == w[1]) {
            out.push("markings must be distinct".into());
        }
        if !markings.is_empty() && (markings[0] != 1 || markings.last() != Some(&(markings.len() as u32))) {
            out.push("markings must be 1..n".into());
        }
        out
    }

    /// Weighted sum of outgoing directions at v.
    pub fn direction_sum(&self, v: usize) -> Vec<Z> {
        let mut s = vec![Z::zero(); self.dimension];
        let mut add = |d: &[Z], w: i64| {
            for (a, b) in s.iter_mut().zip(d) {
                *a += b * Z::from(w);
            }
        };
        for e in &self.edges {
            if e.ends[0] == v {
                add(&e.direction, e.dilation as i64);
            }
            if e.ends[1] == v {
                add(&e.direction, -(e.dilation as i64));
            }
        }
        for l in &self.legs {
            if l.vertex == v {
                add(&l.direction, l.dilation as i64);
            }
        }
        s
    }

    /// Vertices mapping into the interior of a maximal cell where balancing fails.
    pub fn check_balancing(&self, ambient: Option<&ConeComplex>) -> Vec<usize> {
        (0..self.vertices.len())
            .filter(|&v| in_maximal_interior(&self.vertices[v].position, ambient))
            .filter(|&v| self.direction_sum(v).iter().any(|x| !x.is_zero()))
            .collect()
    }

    /// First Betti number of the source graph plus vertex genera.
    pub fn genus(&self) -> i64 {
        let mut parent: Vec<usize> = (0..self.vertices.len()).collect();
        fn find(p: &mut Vec<usize>, x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        let mut comps = self.vertices.len() as i64;
        for e in &self.edges {
            let (a, b) = (find(&mut parent, e.ends[0]), find(&mut parent, e.ends[1]));
            if a != b {
                parent[a] = b;
                comps -= 1;
            }
        }
        let b1 = self.edges.len() as i64 - self.vertices.len() as i64 + comps;
        b1 + self.vertices.iter().map(|v| v.genus as i64).sum::<i64>()
    }
}

struct Piece {
    cell: Cell,
    weight: u32,
}

/// The image 1-complex of a tropical map, with edge labels summing dilations of
/// the cells covering each image cell and vertex classes summing the classes of
/// the vertices over each image vertex (zero for new crossing vertices).
pub fn chow_of_tropical_map(t: &TropicalMap, ambient: Option<&ConeComplex>) -> (OneComplex, ChowDecoration) {
    let pos = |v: usize| t.vertices[v].position.clone();
    let mut pieces: Vec<Piece> = Vec::new();
    for e in &t.edges {
        let diff = sub_q(&pos(e.ends[1]), &pos(e.ends[0]));
        let (dir, len) = primitive_split(&diff).expect("validated map");
        pieces.push(Piece {
            cell: Cell {
                start: pos(e.ends[0]),
                dir,
                len: Some(len),
            },
            weight: e.dilation,
        });
    }
    for l in t.legs.iter().filter(|l| l.dilation > 0) {
        pieces.push(Piece {
            cell: Cell {
                start: pos(l.vertex),
                dir: l.direction.clone(),
                len: None,
            },
            weight: l.dilation,
        });
    }
    // breakpoints: vertex images and crossings
    let mut points: Vec<Vec<Q>> = t.vertices.iter().map(|v| v.position.clone()).collect();
    for i in 0..pieces.len() {
        for j in i + 1..pieces.len() {
            if let Some(x) = crossing(&pieces[i].cell, &pieces[j].cell) {
                points.push(x);
            }
        }
    }
    points.sort();
    points.dedup();
    let index: BTreeMap<Vec<Q>, usize> = points.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
    let mut seg_weights: BTreeMap<(usize, usize), u32> = BTreeMap::new();
    let mut ray_weights: BTreeMap<(usize, Vec<Z>), u32> = BTreeMap::new();
    for p in &pieces {
        let mut params: Vec<Q> = points
            .iter()
            .filter_map(|x| p.cell.param_of(x))
            .filter(|s| !s.is_negative() && p.cell.len.as_ref().map_or(true, |l| s <= l))
            .collect();
        params.sort();
        params.dedup();
        for w in params.windows(2) {
            let a = index[&p.cell.point_at(&w[0])];
            let b = index[&p.cell.point_at(&w[1])];
            *seg_weights.entry((a.min(b), a.max(b))).or_insert(0) += p.weight;
        }
        if p.cell.len.is_none() {
            let last = index[&p.cell.point_at(params.last().expect("start is a breakpoint"))];
            *ray_weights.entry((last, p.cell.dir.clone())).or_insert(0) += p.weight;
        }
    }
    // only keep points that are vertex images or lie on a cell
    let mut used = vec![false; points.len()];
    for v in &t.vertices {
        used[index[&v.position]] = true;
    }
    for &(a, b) in seg_weights.keys() {
        used[a] = true;
        used[b] = true;
    }
    let mut g = OneComplex::new(t.dimension);
    let mut renum = vec![usize::MAX; points.len()];
    for (i, p) in points.iter().enumerate() {
        if used[i] {
            renum[i] = g.vertices.len();
            g.vertices.push(Vertex {
                position: p.clone(),
                face: String::new(),
            });
        }
    }
    let rank = t.vertices.iter().map(|v| v.class.len()).max().unwrap_or(0);
    let mut classes = vec![vec![0i64; rank]; g.vertices.len()];
    for v in &t.vertices {
        for (a, b) in classes[renum[index[&v.position]]].iter_mut().zip(&v.class) {
            *a += b;
        }
    }
    let mut edge_labels = Vec::new();
    for ((a, b), w) in seg_weights {
        let (a, b) = (renum[a], renum[b]);
        let diff = sub_q(&g.vertices[b].position, &g.vertices[a].position);
        let (direction, length) = primitive_split(&diff).expect("distinct breakpoints");
        g.edges.push(Edge {
            ends: [a, b],
            direction,
            length,
        });
        edge_labels.push(w);
    }
    let mut ray_labels = Vec::new();
    for ((v, direction), w) in ray_weights {
        g.rays.push(Ray {
            vertex: renum[v],
            direction,
        });
        ray_labels.push(w);
    }
    if let Some(a) = ambient {
        g.locate_faces(a);
    }
    (
        g,
        ChowDecoration {
            edge_labels,
            ray_labels,
            vertex_classes: classes,
        },
    )
}
