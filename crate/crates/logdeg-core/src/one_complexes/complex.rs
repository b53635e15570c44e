//! Embedded 1-complexes: vertices at rational points, bounded edges with a
//! primitive direction and lattice length, and unbounded rays.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::geometry::{interiors_meet, Cell};
use crate::arith::{is_primitive, primitive_split, scale_q, sub_q, to_q_vec, Q, Z};
use crate::cone_geometry::ConeComplex;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vertex {
    #[serde(with = "crate::arith::serde_qvec")]
    pub position: Vec<Q>,
    /// Id of the ambient cone whose relative interior contains the vertex
    /// (empty when the ambient is a plain vector space).
    #[serde(default)]
    pub face: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub ends: [usize; 2],
    /// Primitive direction from `ends[0]` to `ends[1]`.
    #[serde(with = "crate::arith::serde_zvec")]
    pub direction: Vec<Z>,
    #[serde(with = "crate::arith::serde_q")]
    pub length: Q,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ray {
    pub vertex: usize,
    #[serde(with = "crate::arith::serde_zvec")]
    pub direction: Vec<Z>,
}

/// A reference to a 1-dimensional cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CellRef {
    Edge(usize),
    Ray(usize),
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OneComplex {
    pub dimension: usize,
    pub vertices: Vec<Vertex>,
    #[serde(default)]
    pub edges: Vec<Edge>,
    #[serde(default)]
    pub rays: Vec<Ray>,
}

impl OneComplex {
    pub fn new(dimension: usize) -> Self {
        OneComplex {
            dimension,
            ..Default::default()
        }
    }

    pub fn add_vertex(&mut self, position: Vec<Q>) -> usize {
        self.vertices.push(Vertex {
            position,
            face: String::new(),
        });
        self.vertices.len() - 1
    }

    /// Adds the segment between two existing vertices; direction and lattice
    /// length are read off the positions.
    pub fn add_edge(&mut self, a: usize, b: usize) -> Result<usize> {
        let diff = sub_q(&self.vertices[b].position, &self.vertices[a].position);
        let (direction, length) = primitive_split(&diff)
            .ok_or_else(|| Error::Invalid(format!("edge {a}-{b} has coincident endpoints")))?;
        self.edges.push(Edge {
            ends: [a, b],
            direction,
            length,
        });
        Ok(self.edges.len() - 1)
    }

    pub fn add_ray(&mut self, vertex: usize, direction: Vec<Z>) -> usize {
        self.rays.push(Ray { vertex, direction });
        self.rays.len() - 1
    }

    /// Records the ambient cone of every vertex.
    pub fn locate_faces(&mut self, ambient: &ConeComplex) {
        for v in &mut self.vertices {
            v.face = ambient
                .locate(&v.position)
                .map(|i| ambient.cones[i].id.clone())
                .unwrap_or_default();
        }
    }

    pub(crate) fn cell(&self, c: CellRef) -> Cell {
        match c {
            CellRef::Edge(i) => {
                let e = &self.edges[i];
                Cell {
                    start: self.vertices[e.ends[0]].position.clone(),
                    dir: e.direction.clone(),
                    len: Some(e.length.clone()),
                }
            }
            CellRef::Ray(i) => {
                let r = &self.rays[i];
                Cell {
                    start: self.vertices[r.vertex].position.clone(),
                    dir: r.direction.clone(),
                    len: None,
                }
            }
        }
    }

    pub fn cells(&self) -> Vec<CellRef> {
        (0..self.edges.len())
            .map(CellRef::Edge)
            .chain((0..self.rays.len()).map(CellRef::Ray))
            .collect()
    }

    /// The 1-cells at v, each with its primitive direction pointing away from v.
    pub fn flags(&self, v: usize) -> Vec<(CellRef, Vec<Z>)> {
        let mut out = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            if e.ends[0] == v {
                out.push((CellRef::Edge(i), e.direction.clone()));
            }
            if e.ends[1] == v {
                out.push((CellRef::Edge(i), e.direction.iter().map(|x| -x).collect()));
            }
        }
        for (i, r) in self.rays.iter().enumerate() {
            if r.vertex == v {
                out.push((CellRef::Ray(i), r.direction.clone()));
            }
        }
        out
    }

    pub fn valence(&self, v: usize) -> usize {
        self.flags(v).len()
    }

    /// 1 if there is any edge or ray, otherwise 0 (−1 for the empty complex).
    pub fn complex_dimension(&self) -> i32 {
        if !self.edges.is_empty() || !self.rays.is_empty() {
            1
        } else if !self.vertices.is_empty() {
            0
        } else {
            -1
        }
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Is x in the realized point set?
    pub fn contains_point(&self, x: &[Q]) -> bool {
        self.vertices.iter().any(|v| v.position == x)
            || self.cells().iter().any(|&c| self.cell(c).closure_contains(x))
    }

    pub fn dilate(&self, k: &Q) -> OneComplex {
        let mut out = self.clone();
        for v in &mut out.vertices {
            v.position = scale_q(&v.position, k);
        }
        for e in &mut out.edges {
            e.length = &e.length * k;
        }
        out
    }

    /// Violations of the structural and embedding invariants; empty iff valid.
    /// With an ambient complex, vertex faces and cell containment are checked too.
    pub fn validate(&self, ambient: Option<&ConeComplex>) -> Vec<String> {
        let mut out = Vec::new();
        let n = self.dimension;
        for (i, v) in self.vertices.iter().enumerate() {
            if v.position.len() != n {
                out.push(format!("vertex {i}: position has length {} (expected {n})", v.position.len()));
            }
        }
        if !out.is_empty() {
            return out;
        }
        for (i, e) in self.edges.iter().enumerate() {
            if e.ends.iter().any(|&v| v >= self.vertices.len()) {
                out.push(format!("edge {i}: endpoint out of range"));
                continue;
            }
            if e.direction.len() != n || !is_primitive(&e.direction) {
                out.push(format!("edge {i}: direction is not a primitive vector of length {n}"));
                continue;
            }
            if !e.length.is_positive() {
                out.push(format!("edge {i}: length must be positive"));
                continue;
            }
            let diff = sub_q(&self.vertices[e.ends[1]].position, &self.vertices[e.ends[0]].position);
            if diff != scale_q(&to_q_vec(&e.direction), &e.length) {
                out.push(format!("edge {i}: endpoints do not differ by length × direction"));
            }
        }
        for (i, r) in self.rays.iter().enumerate() {
            if r.vertex >= self.vertices.len() {
                out.push(format!("ray {i}: vertex out of range"));
            } else if r.direction.len() != n || !is_primitive(&r.direction) {
                out.push(format!("ray {i}: direction is not a primitive vector of length {n}"));
            }
        }
        if !out.is_empty() {
            return out;
        }
        // embedding
        for i in 0..self.vertices.len() {
            for j in i + 1..self.vertices.len() {
                if self.vertices[i].position == self.vertices[j].position {
                    out.push(format!("vertices {i} and {j} coincide"));
                }
            }
        }
        let cells = self.cells();
        for (a, &ca) in cells.iter().enumerate() {
            let cell_a = self.cell(ca);
            for (vi, v) in self.vertices.iter().enumerate() {
                if cell_a.interior_contains(&v.position) {
                    out.push(format!("vertex {vi} lies inside {}", cell_name(ca)));
                }
            }
            for &cb in &cells[a + 1..] {
                if interiors_meet(&cell_a, &self.cell(cb)) {
                    out.push(format!("{} and {} intersect", cell_name(ca), cell_name(cb)));
                }
            }
        }
        if let Some(amb) = ambient {
            if amb.lattice_rank != n {
                out.push(format!("ambient lattice rank {} differs from dimension {n}", amb.lattice_rank));
                return out;
            }
            for (i, v) in self.vertices.iter().enumerate() {
                if v.face.is_empty() {
                    if !amb.support_contains(&v.position) {
                        out.push(format!("vertex {i} is outside the ambient support"));
                    }
                    continue;
                }
                match amb.cone(&v.face) {
                    Ok(c) if c.relint_contains(&v.position) => {}
                    Ok(_) => out.push(format!("vertex {i} is not in the relative interior of '{}'", v.face)),
                    Err(_) => out.push(format!("vertex {i}: unknown face '{}'", v.face)),
                }
            }
            for &c in &cells {
                if !self.cell_in_single_cone(c, amb) {
                    out.push(format!("{} is not contained in a single ambient cone", cell_name(c)));
                }
            }
        }
        out
    }

    pub fn is_valid(&self, ambient: Option<&ConeComplex>) -> bool {
        self.validate(ambient).is_empty()
    }

    fn cell_in_single_cone(&self, c: CellRef, amb: &ConeComplex) -> bool {
        let cell = self.cell(c);
        let dir = to_q_vec(&cell.dir);
        amb.maximal_cones().iter().any(|&i| {
            let cone = &amb.cones[i];
            cone.contains(&cell.start)
                && match cell.end() {
                    Some(e) => cone.contains(&e),
                    None => cone.contains(&dir),
                }
        })
    }

    /// Do the given cells (all incident to v) lie in a common ambient cone?
    fn cells_share_cone(&self, cs: &[CellRef], amb: Option<&ConeComplex>) -> bool {
        let Some(amb) = amb else { return true };
        amb.maximal_cones().iter().any(|&i| {
            let cone = &amb.cones[i];
            cs.iter().all(|&c| {
                let cell = self.cell(c);
                cone.contains(&cell.start)
                    && match cell.end() {
                        Some(e) => cone.contains(&e),
                        None => cone.contains(&to_q_vec(&cell.dir)),
                    }
            })
        })
    }

    /// Is v a 2-valent vertex whose two cells continue each other in one cone?
    pub fn is_linear_bivalent(&self, v: usize, ambient: Option<&ConeComplex>) -> bool {
        let f = self.flags(v);
        if f.len() != 2 {
            return false;
        }
        let opposite = f[0].1.iter().zip(&f[1].1).all(|(a, b)| (a + b).is_zero());
        opposite && self.cells_share_cone(&[f[0].0, f[1].0], ambient)
    }

    /// No free vertices and no linear 2-valent vertices.
    pub fn is_pure(&self, ambient: Option<&ConeComplex>) -> bool {
        (0..self.vertices.len())
            .all(|v| self.valence(v) > 0 && !self.is_linear_bivalent(v, ambient))
    }

    /// Erases free vertices and linear 2-valent vertices. A vertex joining two
    /// opposite rays (a full line) is kept, since a line needs one vertex.
    pub fn retract_to_pure(&self, ambient: Option<&ConeComplex>) -> OneComplex {
        retract(self, ambient, None).0
    }

    /// Removes the vertices flagged in `drop` (which must have no incident cells)
    /// and renumbers; returns the old→new vertex map.
    pub(crate) fn remove_vertices(&mut self, drop: &[bool]) -> Vec<Option<usize>> {
        let mut map = Vec::with_capacity(drop.len());
        let mut next = 0;
        for &d in drop {
            if d {
                map.push(None);
            } else {
                map.push(Some(next));
                next += 1;
            }
        }
        let mut k = 0;
        self.vertices.retain(|_| {
            k += 1;
            !drop[k - 1]
        });
        for e in &mut self.edges {
            e.ends = [map[e.ends[0]].expect("kept"), map[e.ends[1]].expect("kept")];
        }
        for r in &mut self.rays {
            r.vertex = map[r.vertex].expect("kept");
        }
        map
    }
}

fn cell_name(c: CellRef) -> String {
    match c {
        CellRef::Edge(i) => format!("edge {i}"),
        CellRef::Ray(i) => format!("ray {i}"),
    }
}

/// Per-cell labels and per-vertex classes carried along by the retraction.
#[derive(Clone, Debug)]
pub(crate) struct Labels {
    pub edges: Vec<u32>,
    pub rays: Vec<u32>,
    pub classes: Vec<Vec<i64>>,
}

/// Core of the retraction. With labels, vertices carrying a nonzero class and
/// joins of cells with different labels are kept.
pub(crate) fn retract(
    g: &OneComplex,
    ambient: Option<&ConeComplex>,
    labels: Option<&Labels>,
) -> (OneComplex, Option<Labels>) {
    let mut g = g.clone();
    let mut lab = labels.cloned();
    loop {
        let class_zero =
            |lab: &Option<Labels>, v: usize| lab.as_ref().map_or(true, |l| l.classes[v].iter().all(|&x| x == 0));
        let nv = g.vertices.len();
        // free vertices
        let free: Vec<bool> = (0..nv).map(|v| g.valence(v) == 0 && class_zero(&lab, v)).collect();
        if free.iter().any(|&b| b) {
            let map = g.remove_vertices(&free);
            if let Some(l) = lab.as_mut() {
                l.classes = l
                    .classes
                    .iter()
                    .zip(&map)
                    .filter(|(_, m)| m.is_some())
                    .map(|(c, _)| c.clone())
                    .collect();
            }
            continue;
        }
        let target = (0..nv).find(|&v| {
            if !class_zero(&lab, v) || !g.is_linear_bivalent(v, ambient) {
                return false;
            }
            let f = g.flags(v);
            if matches!((f[0].0, f[1].0), (CellRef::Ray(_), CellRef::Ray(_))) {
                return false;
            }
            match &lab {
                Some(l) => label_of(l, f[0].0) == label_of(l, f[1].0),
                None => true,
            }
        });
        let Some(v) = target else { break };
        splice(&mut g, &mut lab, v);
    }
    (g, lab)
}

fn label_of(l: &Labels, c: CellRef) -> u32 {
    match c {
        CellRef::Edge(i) => l.edges[i],
        CellRef::Ray(i) => l.rays[i],
    }
}

/// Replaces the two cells at the linear 2-valent vertex v by one cell.
fn splice(g: &mut OneComplex, lab: &mut Option<Labels>, v: usize) {
    let f = g.flags(v);
    let (mut c1, mut c2) = (f[0].0, f[1].0);
    if matches!(c1, CellRef::Ray(_)) {
        std::mem::swap(&mut c1, &mut c2);
    }
    let CellRef::Edge(e1) = c1 else { unreachable!("at most one ray") };
    let a = if g.edges[e1].ends[0] == v { g.edges[e1].ends[1] } else { g.edges[e1].ends[0] };
    let label = lab.as_ref().map(|l| l.edges[e1]);
    match c2 {
        CellRef::Edge(e2) => {
            let b = if g.edges[e2].ends[0] == v { g.edges[e2].ends[1] } else { g.edges[e2].ends[0] };
            let length = &g.edges[e1].length + &g.edges[e2].length;
            let diff = sub_q(&g.vertices[b].position, &g.vertices[a].position);
            let (direction, _) = primitive_split(&diff).expect("distinct endpoints");
            let (hi, lo) = (e1.max(e2), e1.min(e2));
            g.edges.remove(hi);
            g.edges.remove(lo);
            g.edges.push(Edge {
                ends: [a, b],
                direction,
                length,
            });
            if let Some(l) = lab.as_mut() {
                l.edges.remove(hi);
                l.edges.remove(lo);
                l.edges.push(label.expect("labelled"));
            }
        }
        CellRef::Ray(r) => {
            let direction = g.rays[r].direction.clone();
            g.edges.remove(e1);
            g.rays[r] = Ray { vertex: a, direction };
            if let Some(l) = lab.as_mut() {
                l.edges.remove(e1);
            }
        }
    }
    let mut drop = vec![false; g.vertices.len()];
    drop[v] = true;
    let map = g.remove_vertices(&drop);
    if let Some(l) = lab.as_mut() {
        l.classes = l
            .classes
            .iter()
            .zip(&map)
            .filter(|(_, m)| m.is_some())
            .map(|(c, _)| c.clone())
            .collect();
    }
}

/// Convenience constructor used in tests and examples: vertices, edges by
/// endpoint indices, and rays.
pub fn one_complex(
    dimension: usize,
    vertices: &[Vec<Q>],
    edges: &[(usize, usize)],
    rays: &[(usize, Vec<Z>)],
) -> Result<OneComplex> {
    let mut g = OneComplex::new(dimension);
    for p in vertices {
        g.add_vertex(p.clone());
    }
    for &(a, b) in edges {
        g.add_edge(a, b)?;
    }
    for (v, d) in rays {
        g.add_ray(*v, d.clone());
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{q, qvec, zvec};

    fn line() -> OneComplex {
        one_complex(
            2,
            &[qvec(&[0, 0])],
            &[],
            &[(0, zvec(&[1, 0])), (0, zvec(&[0, 1])), (0, zvec(&[-1, -1]))],
        )
        .unwrap()
    }

    #[test]
    fn purity_examples() {
        let point = one_complex(2, &[qvec(&[0, 0])], &[], &[]).unwrap();
        assert!(!point.is_pure(None));
        let sub = one_complex(2, &[qvec(&[0, 0]), qvec(&[1, 0]), qvec(&[2, 0])], &[(0, 1), (1, 2)], &[]).unwrap();
        assert!(!sub.is_pure(None));
        assert!(line().is_pure(None));
    }

    #[test]
    fn retraction_examples() {
        let sub = one_complex(2, &[qvec(&[0, 0]), qvec(&[1, 0]), qvec(&[2, 0])], &[(0, 1), (1, 2)], &[]).unwrap();
        let r = sub.retract_to_pure(None);
        assert_eq!(r.vertices.len(), 2);
        assert_eq!(r.edges.len(), 1);
        assert_eq!(r.edges[0].length, q(2));
        assert!(r.is_valid(None));
        assert_eq!(line().retract_to_pure(None), line());
        let free = one_complex(2, &[qvec(&[5, 5]), qvec(&[0, 0]), qvec(&[1, 0]), qvec(&[7, 7])], &[(1, 2)], &[]).unwrap();
        let r = free.retract_to_pure(None);
        assert_eq!(r.vertices.len(), 2);
        assert_eq!(r.edges.len(), 1);
    }

    #[test]
    fn edge_and_ray_splice() {
        let g = one_complex(2, &[qvec(&[0, 0]), qvec(&[1, 0])], &[(0, 1)], &[(1, zvec(&[1, 0])), (0, zvec(&[0, 1])), (0, zvec(&[-1, -1]))]).unwrap();
        let r = g.retract_to_pure(None);
        assert_eq!(r.vertices.len(), 1);
        assert_eq!(r, line());
    }

    #[test]
    fn linearity_respects_ambient_cones() {
        // the path crosses the wall between the two cones at its middle vertex
        let amb = ConeComplex::from_maximal(
            2,
            &[vec![zvec(&[1, 0]), zvec(&[0, 1])], vec![zvec(&[0, 1]), zvec(&[-1, 0])]],
        )
        .unwrap();
        let g = one_complex(2, &[qvec(&[-1, 1]), qvec(&[0, 1]), qvec(&[1, 1])], &[(0, 1), (1, 2)], &[]).unwrap();
        assert!(g.is_pure(Some(&amb)));
        assert!(!g.is_pure(None));
        assert_eq!(g.retract_to_pure(Some(&amb)).vertices.len(), 3);
        let g = one_complex(2, &[qvec(&[-1, 1]), qvec(&[0, 1])], &[(0, 1)], &[]).unwrap();
        assert!(g.validate(Some(&amb)).is_empty());
    }

    #[test]
    fn embedding_violations() {
        let g = one_complex(2, &[qvec(&[0, 0]), qvec(&[2, 2]), qvec(&[0, 2]), qvec(&[2, 0])], &[(0, 1), (2, 3)], &[]).unwrap();
        assert!(g.validate(None).iter().any(|s| s.contains("intersect")));
        let mut g = line();
        g.rays[0].direction = zvec(&[2, 0]);
        assert!(!g.validate(None).is_empty());
        let mut g = one_complex(2, &[qvec(&[0, 0]), qvec(&[1, 0])], &[(0, 1)], &[]).unwrap();
        g.edges[0].length = q(2);
        assert!(g.validate(None).iter().any(|s| s.contains("length × direction")));
    }

    #[test]
    fn ambient_containment() {
        let amb = ConeComplex::from_maximal(2, &[vec![zvec(&[1, 0]), zvec(&[0, 1])]]).unwrap();
        let mut g = one_complex(2, &[qvec(&[1, 1])], &[], &[(0, zvec(&[1, 0])), (0, zvec(&[-1, 0]))]).unwrap();
        g.locate_faces(&amb);
        let v = g.validate(Some(&amb));
        assert_eq!(v, vec!["ray 1 is not contained in a single ambient cone".to_string()]);
    }

    #[test]
    fn point_set() {
        let g = line();
        assert!(g.contains_point(&qvec(&[-3, -3])));
        assert!(!g.contains_point(&qvec(&[1, 1])));
        assert!(g.dilate(&q(2)).contains_point(&qvec(&[0, 5])));
    }
}
