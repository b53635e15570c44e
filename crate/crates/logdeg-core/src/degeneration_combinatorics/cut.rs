//! Cutting a vertical 1-complex near a rigid one into the stars of its
//! vertices, evaluating along the edges, and gluing compatible pieces back.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::degeneration::{DegenerationComplex, RigidComplexRecord};
use crate::arith::{primitive_of_rational, primitive_split, sub_q, to_q_vec, Q, Z};
use crate::cone_geometry::{star_projection, ConeComplex};
use crate::error::{Error, Result};
use crate::linalg::{inverse_q, mat_mul_q, mat_mul_z, mat_vec_q, mat_z_vec_q, to_qmat, transpose, QMat, ZMat};
use crate::one_complexes::{ChowDecoration, Edge, OneComplex, Ray, Vertex};
use crate::tropical_moduli::{evaluate_along_ray, ZeroComplex};

/// A 1-complex in the slice at some height, with each vertex assigned to the
/// vertex of the rigid complex it retracts to.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerticalComplex {
    pub complex: OneComplex,
    pub decoration: ChowDecoration,
    #[serde(with = "crate::arith::serde_q")]
    pub height: Q,
    pub retraction: Vec<usize>,
}

/// The piece of a vertical complex seen from one vertex of γ, in the star of
/// that vertex's ray.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Part {
    pub vertex: usize,
    pub star_ray: String,
    pub complex: OneComplex,
    pub decoration: ChowDecoration,
}

/// The two evaluations at an edge of γ, both in the star of the edge's cone.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeEvaluation {
    pub edge: usize,
    pub star_cone: String,
    pub left: ZeroComplex,
    pub right: ZeroComplex,
}

impl EdgeEvaluation {
    pub fn on_diagonal(&self) -> bool {
        self.left == self.right
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutResult {
    pub parts: Vec<Part>,
    pub evaluations: Vec<EdgeEvaluation>,
}

/// Right inverse Aᵀ(AAᵀ)⁻¹ of a full row rank matrix.
fn right_inverse(a: &QMat, cols: usize) -> Result<QMat> {
    let rows = a.len();
    if rows == 0 {
        return Ok(vec![vec![]; cols]);
    }
    let at = transpose(a, cols);
    let aat = mat_mul_q(a, &at, rows);
    let inv = inverse_q(&aat).ok_or_else(|| Error::Computation("projection is not surjective".into()))?;
    Ok(mat_mul_q(&at, &inv, rows))
}

/// Side data of one edge end: the star ray pointing along the edge and the map
/// from the evaluation chart of that star into the edge star's chart.
struct EdgeSide {
    direction: Vec<Z>,
    chart: QMat,
}

/// Everything about γ inside the degeneration that cutting and gluing need.
struct Frame {
    k: usize,
    cones: Vec<usize>,
    slice_vertices: Vec<Vec<Q>>,
    projections: Vec<ZMat>,
    stars: Vec<ConeComplex>,
    edge_ends: Vec<[usize; 2]>,
    edge_cones: Vec<usize>,
    sides: Vec<[EdgeSide; 2]>,
}

impl Frame {
    fn new(d: &DegenerationComplex, gamma: &RigidComplexRecord) -> Result<Self> {
        let cones = gamma.vertex_cones(d)?;
        let k = d.rank();
        let mut projections = Vec::new();
        let mut stars = Vec::new();
        for &c in &cones {
            let (p, s) = d.star_of(c)?;
            projections.push(p);
            stars.push(s);
        }
        let mut edge_ends = Vec::new();
        let mut edge_cones = Vec::new();
        let mut sides = Vec::new();
        for (i, e) in gamma.gamma.edges.iter().enumerate() {
            let [u, w] = e.ends;
            let ec = d
                .cone_spanned(&[cones[u], cones[w]])
                .ok_or_else(|| Error::Invalid(format!("edge {i} of γ is not an edge of the slice")))?;
            let qe = star_projection(&d.total, ec);
            let mut pair = Vec::new();
            for (a, b) in [(u, w), (w, u)] {
                let pa = &projections[a];
                let dir = primitive_of_rational(&mat_z_vec_q(pa, &to_q_vec(d.ray(cones[b]))))
                    .ok_or_else(|| Error::Computation("edge ray vanishes in the star".into()))?;
                let sa = &stars[a];
                let ray = sa
                    .ray_index(&dir)
                    .ok_or_else(|| Error::Computation("edge direction is not a star ray".into()))?;
                let r = star_projection(sa, ray);
                let composite = mat_mul_z(&r, pa, k);
                let s = right_inverse(&to_qmat(&composite), k)?;
                let chart = mat_mul_q(&to_qmat(&qe), &s, composite.len());
                pair.push(EdgeSide { direction: dir, chart });
            }
            let second = pair.pop().expect("two sides");
            let first = pair.pop().expect("two sides");
            edge_ends.push([u, w]);
            edge_cones.push(ec);
            sides.push([first, second]);
        }
        Ok(Frame {
            k,
            slice_vertices: cones.iter().map(|&c| d.slice_vertex(c)).collect(),
            cones,
            projections,
            stars,
            edge_ends,
            edge_cones,
            sides,
        })
    }

    /// Evaluation of a part along an edge end, in the edge star's chart.
    fn evaluate(&self, d: &DegenerationComplex, part: &Part, edge: usize, side: usize) -> Result<ZeroComplex> {
        let u = self.edge_ends[edge][side];
        let st = &self.stars[u];
        let id = &d.total.cones[self.edge_cones[edge]].id;
        let ev = evaluate_along_ray(&part.complex, Some(&part.decoration.ray_labels), st, id)?;
        let chart = &self.sides[edge][side].chart;
        Ok(ZeroComplex::from_points(
            ev.complex.points.iter().map(|p| (mat_vec_q(chart, &p.position), p.multiplicity)),
        ))
    }

    fn evaluations(&self, d: &DegenerationComplex, parts: &[Part]) -> Result<Vec<EdgeEvaluation>> {
        (0..self.edge_ends.len())
            .map(|e| {
                let [u, w] = self.edge_ends[e];
                Ok(EdgeEvaluation {
                    edge: e,
                    star_cone: d.total.cones[self.edge_cones[e]].id.clone(),
                    left: self.evaluate(d, &parts[u], e, 0)?,
                    right: self.evaluate(d, &parts[w], e, 1)?,
                })
            })
            .collect()
    }

    /// The γ edge between two vertices and the side of the first one.
    fn edge_between(&self, u: usize, w: usize) -> Option<(usize, usize)> {
        self.edge_ends.iter().enumerate().find_map(|(e, &[a, b])| {
            if (a, b) == (u, w) {
                Some((e, 0))
            } else if (a, b) == (w, u) {
                Some((e, 1))
            } else {
                None
            }
        })
    }

    fn star_ray_ok(&self, u: usize, dir: &[Z]) -> bool {
        self.stars[u].ray_index(dir).is_some()
    }
}

/// Vertices sorted by position, edges oriented from the smaller endpoint and
/// sorted, rays sorted; labels travel with their cells.
fn canonical(g: &OneComplex, deco: &ChowDecoration) -> (OneComplex, ChowDecoration) {
    let mut order: Vec<usize> = (0..g.vertices.len()).collect();
    order.sort_by(|&a, &b| g.vertices[a].position.cmp(&g.vertices[b].position));
    let mut new_index = vec![0; order.len()];
    for (i, &v) in order.iter().enumerate() {
        new_index[v] = i;
    }
    let vertices: Vec<Vertex> = order.iter().map(|&v| g.vertices[v].clone()).collect();
    let mut edges: Vec<(Edge, u32)> = g
        .edges
        .iter()
        .zip(&deco.edge_labels)
        .map(|(e, &l)| {
            let (a, b) = (new_index[e.ends[0]], new_index[e.ends[1]]);
            let edge = if a <= b {
                Edge { ends: [a, b], direction: e.direction.clone(), length: e.length.clone() }
            } else {
                Edge {
                    ends: [b, a],
                    direction: e.direction.iter().map(|x| -x).collect(),
                    length: e.length.clone(),
                }
            };
            (edge, l)
        })
        .collect();
    edges.sort_by(|(x, l), (y, m)| (x.ends, &x.direction, l).cmp(&(y.ends, &y.direction, m)));
    let mut rays: Vec<(Ray, u32)> = g
        .rays
        .iter()
        .zip(&deco.ray_labels)
        .map(|(r, &l)| (Ray { vertex: new_index[r.vertex], direction: r.direction.clone() }, l))
        .collect();
    rays.sort_by(|(x, l), (y, m)| (x.vertex, &x.direction, l).cmp(&(y.vertex, &y.direction, m)));
    let classes = order.iter().map(|&v| deco.vertex_classes.get(v).cloned().unwrap_or_default()).collect();
    (
        OneComplex {
            dimension: g.dimension,
            vertices,
            edges: edges.iter().map(|(e, _)| e.clone()).collect(),
            rays: rays.iter().map(|(r, _)| r.clone()).collect(),
        },
        ChowDecoration {
            edge_labels: edges.iter().map(|(_, l)| *l).collect(),
            ray_labels: rays.iter().map(|(_, l)| *l).collect(),
            vertex_classes: classes,
        },
    )
}

fn check_decoration(g: &OneComplex, deco: &ChowDecoration) -> Result<()> {
    if deco.edge_labels.len() != g.edges.len() || deco.ray_labels.len() != g.rays.len() {
        return Err(Error::Invalid("decoration does not match the complex".into()));
    }
    Ok(())
}

fn vertex_class(deco: &ChowDecoration, v: usize) -> Vec<i64> {
    deco.vertex_classes.get(v).cloned().unwrap_or_default()
}

/// The tuple of star 1-complexes of g and its edge evaluations.
pub fn cut(d: &DegenerationComplex, gamma: &RigidComplexRecord, g: &VerticalComplex) -> Result<CutResult> {
    let f = Frame::new(d, gamma)?;
    cut_in_frame(d, &f, g)
}

fn cut_in_frame(d: &DegenerationComplex, f: &Frame, g: &VerticalComplex) -> Result<CutResult> {
    let k = f.k;
    let cx = &g.complex;
    check_decoration(cx, &g.decoration)?;
    if cx.dimension != k {
        return Err(Error::Invalid(format!("complex has dimension {}, lattice rank is {k}", cx.dimension)));
    }
    if !g.height.is_positive() {
        return Err(Error::Invalid("height must be positive".into()));
    }
    // verticality
    for (i, v) in cx.vertices.iter().enumerate() {
        if v.position[k - 1] != g.height {
            return Err(Error::Invalid(format!("vertex {i} is not at height {}", g.height)));
        }
    }
    for (i, e) in cx.edges.iter().enumerate() {
        if !e.direction[k - 1].is_zero() {
            return Err(Error::Invalid(format!("edge {i} is not horizontal")));
        }
    }
    for (i, r) in cx.rays.iter().enumerate() {
        if !r.direction[k - 1].is_zero() {
            return Err(Error::Invalid(format!("ray {i} is not horizontal")));
        }
    }
    // specialization to γ
    let n = f.cones.len();
    if g.retraction.len() != cx.vertices.len() || g.retraction.iter().any(|&u| u >= n) {
        return Err(Error::Invalid("retraction does not map vertices to vertices of γ".into()));
    }
    for (i, v) in cx.vertices.iter().enumerate() {
        let u = g.retraction[i];
        let r_u = d.ray(f.cones[u]);
        let ok = d.total.locate(&v.position).is_some_and(|c| d.total.cones[c].rays.iter().any(|r| r == r_u));
        if !ok {
            return Err(Error::Invalid(format!(
                "vertex {i} does not lie in a cone containing the ray of γ-vertex {u}"
            )));
        }
    }
    let mut parts: Vec<(OneComplex, ChowDecoration)> = (0..n)
        .map(|_| (OneComplex::new(k - 1), ChowDecoration::default()))
        .collect();
    let mut local = vec![0usize; cx.vertices.len()];
    for (i, v) in cx.vertices.iter().enumerate() {
        let u = g.retraction[i];
        let (p, deco) = &mut parts[u];
        local[i] = p.add_vertex(mat_z_vec_q(&f.projections[u], &v.position));
        deco.vertex_classes.push(vertex_class(&g.decoration, i));
    }
    let project_dir = |u: usize, dir: &[Z]| -> Result<Vec<Z>> {
        primitive_of_rational(&mat_z_vec_q(&f.projections[u], &to_q_vec(dir)))
            .ok_or_else(|| Error::Invalid("a horizontal direction vanishes in a star".into()))
    };
    for (i, e) in cx.edges.iter().enumerate() {
        let [a, b] = e.ends;
        let (u, w) = (g.retraction[a], g.retraction[b]);
        let label = g.decoration.edge_labels[i];
        if u == w {
            let (p, deco) = &mut parts[u];
            p.add_edge(local[a], local[b])?;
            deco.edge_labels.push(label);
            continue;
        }
        let (edge, _) = f
            .edge_between(u, w)
            .ok_or_else(|| Error::Invalid(format!("edge {i} joins γ-vertices {u} and {w}, which are not adjacent")))?;
        let along = sub_q(&f.slice_vertices[w], &f.slice_vertices[u]);
        let dir_q = to_q_vec(&e.direction);
        let parallel = primitive_of_rational(&along) == primitive_of_rational(&dir_q);
        if !parallel {
            return Err(Error::Invalid(format!("edge {i} crosses between γ-vertices {u} and {w} off the direction of γ-edge {edge}")));
        }
        for (x, side_vertex, sign) in [(a, u, 1i64), (b, w, -1i64)] {
            let dir: Vec<Z> = e.direction.iter().map(|c| c * Z::from(sign)).collect();
            let pd = project_dir(side_vertex, &dir)?;
            let (p, deco) = &mut parts[side_vertex];
            p.add_ray(local[x], pd);
            deco.ray_labels.push(label);
        }
    }
    for (i, r) in cx.rays.iter().enumerate() {
        let u = g.retraction[r.vertex];
        let pd = project_dir(u, &r.direction)?;
        if !f.star_ray_ok(u, &pd) {
            return Err(Error::Invalid(format!("ray {i} is not parallel to a ray of the star of γ-vertex {u}")));
        }
        let (p, deco) = &mut parts[u];
        p.add_ray(local[r.vertex], pd);
        deco.ray_labels.push(g.decoration.ray_labels[i]);
    }
    let parts: Vec<Part> = parts
        .into_iter()
        .enumerate()
        .map(|(u, (mut p, deco))| {
            p.locate_faces(&f.stars[u]);
            let (p, deco) = canonical(&p, &deco);
            Part {
                vertex: u,
                star_ray: d.total.cones[f.cones[u]].id.clone(),
                complex: p,
                decoration: deco,
            }
        })
        .collect();
    let evaluations = f.evaluations(d, &parts)?;
    Ok(CutResult { parts, evaluations })
}

fn max_abs(v: &[Q]) -> Q {
    v.iter().map(|x| x.abs()).max().unwrap_or_else(Q::zero)
}

/// Reassembles a vertical complex from star pieces whose evaluations agree
/// along every edge of γ. The height starts from the size of the pieces and
/// the slice, and doubles until the lifted pieces sit in the right cones, the
/// result is embedded, and cutting it returns the pieces.
pub fn glue(d: &DegenerationComplex, gamma: &RigidComplexRecord, parts: &[Part]) -> Result<VerticalComplex> {
    let f = Frame::new(d, gamma)?;
    let n = f.cones.len();
    if parts.len() != n || parts.iter().enumerate().any(|(u, p)| p.vertex != u) {
        return Err(Error::Invalid(format!("expected one part per γ-vertex, in order ({n})")));
    }
    for (u, p) in parts.iter().enumerate() {
        check_decoration(&p.complex, &p.decoration)?;
        if p.star_ray != d.total.cones[f.cones[u]].id {
            return Err(Error::Invalid(format!("part {u} lives in the star of {}, not of γ-vertex {u}", p.star_ray)));
        }
        let errs = p.complex.validate(Some(&f.stars[u]));
        if !errs.is_empty() {
            return Err(Error::Invalid(format!("part {u}: {}", errs.join("; "))));
        }
        for (i, r) in p.complex.rays.iter().enumerate() {
            if !f.star_ray_ok(u, &r.direction) {
                return Err(Error::Invalid(format!("part {u}: ray {i} is not parallel to a star ray")));
            }
        }
    }
    let evaluations = f.evaluations(d, parts)?;
    for ev in &evaluations {
        if !ev.on_diagonal() {
            let [u, w] = f.edge_ends[ev.edge];
            return Err(Error::DiagonalMismatch {
                edge: format!("{} (γ-vertices {u}–{w})", ev.edge),
                left: ev.left.to_string(),
                right: ev.right.to_string(),
            });
        }
    }
    let expected: Vec<Part> = parts
        .iter()
        .map(|p| {
            let (c, deco) = canonical(&p.complex, &p.decoration);
            Part { complex: c, decoration: deco, ..p.clone() }
        })
        .collect();
    let radius = parts
        .iter()
        .flat_map(|p| p.complex.vertices.iter().map(|v| max_abs(&v.position)))
        .max()
        .unwrap_or_else(Q::zero);
    let diameter = f.slice_vertices.iter().map(|v| max_abs(v)).max().unwrap_or_else(Q::zero);
    let mut t = Q::from_integer(Z::from(2)) * (radius + Q::one()) * (diameter + Q::one());
    for _ in 0..48 {
        if let Some(g) = lift_at(d, &f, parts, &t)? {
            if let Ok(c) = cut_in_frame(d, &f, &g) {
                if c.parts == expected {
                    return Ok(g);
                }
            }
        }
        t = t * Q::from_integer(Z::from(2));
    }
    Err(Error::Computation("no height separates the lifted pieces".into()))
}

/// Lifts the pieces to height t and joins matching edge rays; None when the
/// height is too small for the lift to be a vertical complex over γ.
fn lift_at(d: &DegenerationComplex, f: &Frame, parts: &[Part], t: &Q) -> Result<Option<VerticalComplex>> {
    let k = f.k;
    let mut g = OneComplex::new(k);
    let mut deco = ChowDecoration::default();
    let mut retraction = Vec::new();
    let mut global: Vec<Vec<usize>> = Vec::new();
    for (u, p) in parts.iter().enumerate() {
        let mut ids = Vec::new();
        for (i, v) in p.complex.vertices.iter().enumerate() {
            let x = d.lift(&f.projections[u], &v.position, t)?;
            let star_cone = f.stars[u].locate(&v.position).map(|c| f.stars[u].cones[c].id.clone());
            let cone = d.total.locate(&x).map(|c| d.total.cones[c].id.clone());
            if star_cone.is_none() || star_cone != cone {
                return Ok(None);
            }
            ids.push(g.add_vertex(x));
            retraction.push(u);
            deco.vertex_classes.push(vertex_class(&p.decoration, i));
        }
        global.push(ids);
    }
    for (u, p) in parts.iter().enumerate() {
        for (e, &l) in p.complex.edges.iter().zip(&p.decoration.edge_labels) {
            g.add_edge(global[u][e.ends[0]], global[u][e.ends[1]])?;
            deco.edge_labels.push(l);
        }
    }
    // rays toward a γ-neighbour are matched by evaluation point; the others stay rays
    type Pending = Vec<(Vec<Q>, u32, usize)>;
    let mut pending: BTreeMap<(usize, usize), Pending> = BTreeMap::new();
    let zero = Q::zero();
    for (u, p) in parts.iter().enumerate() {
        for (r, &l) in p.complex.rays.iter().zip(&p.decoration.ray_labels) {
            let edge_side = (0..f.edge_ends.len())
                .flat_map(|e| [(e, 0), (e, 1)])
                .find(|&(e, s)| f.edge_ends[e][s] == u && f.sides[e][s].direction == r.direction);
            match edge_side {
                Some((e, s)) => {
                    let single = Part {
                        complex: OneComplex {
                            dimension: k - 1,
                            vertices: vec![p.complex.vertices[r.vertex].clone()],
                            edges: vec![],
                            rays: vec![Ray { vertex: 0, direction: r.direction.clone() }],
                        },
                        decoration: ChowDecoration { edge_labels: vec![], ray_labels: vec![1], vertex_classes: vec![vec![]] },
                        ..p.clone()
                    };
                    let point = f.evaluate(d, &single, e, s)?.points.remove(0).position;
                    pending.entry((e, s)).or_default().push((point, l, global[u][r.vertex]));
                }
                None => {
                    let lifted = d.lift(&f.projections[u], &to_q_vec(&r.direction), &zero)?;
                    let dir = primitive_of_rational(&lifted)
                        .ok_or_else(|| Error::Computation("ray direction vanishes when lifted".into()))?;
                    g.add_ray(global[u][r.vertex], dir);
                    deco.ray_labels.push(l);
                }
            }
        }
    }
    for e in 0..f.edge_ends.len() {
        let mut a = pending.remove(&(e, 0)).unwrap_or_default();
        let mut b = pending.remove(&(e, 1)).unwrap_or_default();
        a.sort();
        b.sort();
        if a.len() != b.len() {
            return Err(Error::Computation(format!("unmatched rays along γ-edge {e}")));
        }
        let [u, w] = f.edge_ends[e];
        let along = primitive_of_rational(&sub_q(&f.slice_vertices[w], &f.slice_vertices[u]));
        for ((pa, la, va), (pb, lb, vb)) in a.into_iter().zip(b) {
            if pa != pb || la != lb {
                return Err(Error::Computation(format!("rays along γ-edge {e} do not pair up")));
            }
            let diff = sub_q(&g.vertices[vb].position, &g.vertices[va].position);
            match primitive_split(&diff) {
                Some((dir, _)) if Some(dir.clone()) == along => {}
                _ => return Ok(None),
            }
            g.add_edge(va, vb)?;
            deco.edge_labels.push(la);
        }
    }
    g.locate_faces(&d.total);
    if !g.validate(Some(&d.total)).is_empty() {
        return Ok(None);
    }
    Ok(Some(VerticalComplex {
        complex: g,
        decoration: deco,
        height: t.clone(),
        retraction,
    }))
}

type Signature = (usize, String, Vec<i64>, Vec<(Vec<Z>, u32, bool)>);

fn signature(g: &VerticalComplex, v: usize) -> Signature {
    let cx = &g.complex;
    let mut flags: Vec<(Vec<Z>, u32, bool)> = Vec::new();
    for (e, l) in cx.edges.iter().zip(&g.decoration.edge_labels) {
        if e.ends[0] == v {
            flags.push((e.direction.clone(), *l, false));
        }
        if e.ends[1] == v {
            flags.push((e.direction.iter().map(|x| -x).collect(), *l, false));
        }
    }
    for (r, l) in cx.rays.iter().zip(&g.decoration.ray_labels) {
        if r.vertex == v {
            flags.push((r.direction.clone(), *l, true));
        }
    }
    flags.sort();
    (g.retraction[v], cx.vertices[v].face.clone(), vertex_class(&g.decoration, v), flags)
}

type EdgeKey = (usize, usize, Vec<Z>, u32);

/// Orientation-free key of an edge between two (mapped) vertices.
fn edge_key(a: usize, b: usize, dir: &[Z], label: u32) -> EdgeKey {
    if a <= b {
        (a, b, dir.to_vec(), label)
    } else {
        (b, a, dir.iter().map(|x| -x).collect(), label)
    }
}

/// Same combinatorial type: a bijection of vertices preserving retraction,
/// ambient cone, class and flags, carrying edges to edges with the same
/// direction and label.
pub fn same_type(a: &VerticalComplex, b: &VerticalComplex) -> bool {
    let (ca, cb) = (&a.complex, &b.complex);
    if ca.vertices.len() != cb.vertices.len() || ca.edges.len() != cb.edges.len() || ca.rays.len() != cb.rays.len() {
        return false;
    }
    let sa: Vec<Signature> = (0..ca.vertices.len()).map(|v| signature(a, v)).collect();
    let sb: Vec<Signature> = (0..cb.vertices.len()).map(|v| signature(b, v)).collect();
    let mut x = sa.clone();
    let mut y = sb.clone();
    x.sort();
    y.sort();
    if x != y {
        return false;
    }
    let edge_set = |g: &VerticalComplex| -> BTreeMap<EdgeKey, usize> {
        let mut m = BTreeMap::new();
        for (e, l) in g.complex.edges.iter().zip(&g.decoration.edge_labels) {
            *m.entry(edge_key(e.ends[0], e.ends[1], &e.direction, *l)).or_insert(0) += 1;
        }
        m
    };
    let eb = edge_set(b);
    let n = ca.vertices.len();
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn extend(
        i: usize,
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
        sa: &[Signature],
        sb: &[Signature],
        a: &VerticalComplex,
        eb: &BTreeMap<EdgeKey, usize>,
    ) -> bool {
        if i == map.len() {
            let mut mapped: BTreeMap<EdgeKey, usize> = BTreeMap::new();
            for (e, l) in a.complex.edges.iter().zip(&a.decoration.edge_labels) {
                *mapped.entry(edge_key(map[e.ends[0]], map[e.ends[1]], &e.direction, *l)).or_insert(0) += 1;
            }
            return &mapped == eb;
        }
        for j in 0..sb.len() {
            if used[j] || sa[i] != sb[j] {
                continue;
            }
            // edges among already-mapped vertices must exist in b
            let consistent = a.complex.edges.iter().zip(&a.decoration.edge_labels).all(|(e, l)| {
                let [p, q] = e.ends;
                let image = |v: usize| if v == i { Some(j) } else if v < i { Some(map[v]) } else { None };
                match (image(p), image(q)) {
                    (Some(x), Some(y)) => eb.contains_key(&edge_key(x, y, &e.direction, *l)),
                    _ => true,
                }
            });
            if !consistent {
                continue;
            }
            map[i] = j;
            used[j] = true;
            if extend(i + 1, map, used, sa, sb, a, eb) {
                return true;
            }
            used[j] = false;
        }
        map[i] = usize::MAX;
        false
    }
    extend(0, &mut map, &mut used, &sa, &sb, a, &eb)
}

/// Height-rescaled copy (the dilation action on vertical complexes).
impl VerticalComplex {
    pub fn dilate(&self, k: &Q) -> VerticalComplex {
        VerticalComplex {
            complex: self.complex.dilate(k),
            decoration: self.decoration.clone(),
            height: &self.height * k,
            retraction: self.retraction.clone(),
        }
    }

    /// The most degenerate member: γ itself at height t, every vertex
    /// retracting to itself.
    pub fn central(d: &DegenerationComplex, gamma: &RigidComplexRecord, t: &Q) -> Result<VerticalComplex> {
        let mut g = gamma.gamma.dilate(t);
        g.locate_faces(&d.total);
        Ok(VerticalComplex {
            complex: g,
            decoration: gamma.decoration.clone(),
            height: t.clone(),
            retraction: (0..gamma.gamma.vertices.len()).collect(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::degeneration_combinatorics::fixtures::{self, sample_vertical, sampling_height};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn central_member_cuts_to_origin_germs() {
        for fx in fixtures::splitting_fixtures() {
            let d = &fx.degeneration;
            let g = VerticalComplex::central(d, &fx.gamma, &Q::from_integer(Z::from(3))).unwrap();
            let c = cut(d, &fx.gamma, &g).unwrap();
            for p in &c.parts {
                assert_eq!(p.complex.vertices.len(), 1);
                assert!(p.complex.vertices[0].position.iter().all(|x| x.is_zero()));
            }
            for ev in &c.evaluations {
                assert!(ev.on_diagonal());
                assert_eq!(ev.left.points.len(), 1);
                assert!(ev.left.points[0].position.iter().all(|x| x.is_zero()));
            }
            let back = glue(d, &fx.gamma, &c.parts).unwrap();
            assert!(same_type(&back, &g), "{}", fx.name);
        }
    }

    #[test]
    fn segment_strand_evaluates_to_matching_points() {
        let fx = fixtures::segment();
        let d = &fx.degeneration;
        // one vertex on each side joined by an edge parallel to the slice segment
        let t = Q::from_integer(Z::from(10));
        let mut g = OneComplex::new(2);
        let a = g.add_vertex(vec![Q::from_integer(Z::from(8)), t.clone()]);
        let b = g.add_vertex(vec![Q::from_integer(Z::from(3)), t.clone()]);
        g.add_edge(a, b).unwrap();
        g.locate_faces(&d.total);
        let v = VerticalComplex {
            decoration: ChowDecoration::trivial(&g, 0),
            complex: g,
            height: t,
            retraction: vec![0, 1],
        };
        let c = cut(d, &fx.gamma, &v).unwrap();
        for p in &c.parts {
            assert_eq!(p.complex.vertices.len(), 1);
            assert_eq!(p.complex.rays.len(), 1);
        }
        assert!(c.evaluations[0].on_diagonal());
        assert_eq!(c.evaluations[0].left.degree(), 1);
    }

    #[test]
    fn mismatched_labels_fail_at_the_edge() {
        let fx = fixtures::segment();
        let d = &fx.degeneration;
        let g = VerticalComplex::central(d, &fx.gamma, &Q::from_integer(Z::from(2))).unwrap();
        let mut parts = cut(d, &fx.gamma, &g).unwrap().parts;
        parts[1].decoration.ray_labels[0] = 2;
        match glue(d, &fx.gamma, &parts) {
            Err(Error::DiagonalMismatch { left, right, .. }) => assert_ne!(left, right),
            other => panic!("expected a diagonal mismatch, got {other:?}"),
        }
    }

    #[test]
    fn empty_parts_glue_to_the_empty_complex() {
        let fx = fixtures::single_vertex();
        let d = &fx.degeneration;
        let parts = vec![Part {
            vertex: 0,
            star_ray: fx.gamma.vertex_rays[0].clone(),
            complex: OneComplex::new(1),
            decoration: ChowDecoration::default(),
        }];
        let g = glue(d, &fx.gamma, &parts).unwrap();
        assert!(g.complex.is_empty());
    }

    #[test]
    fn non_vertical_input_is_rejected() {
        let fx = fixtures::segment();
        let d = &fx.degeneration;
        let mut g = VerticalComplex::central(d, &fx.gamma, &Q::from_integer(Z::from(2))).unwrap();
        g.complex.vertices[1].position[1] = Q::from_integer(Z::from(3));
        assert!(cut(d, &fx.gamma, &g).is_err());
    }

    #[test]
    fn sampled_round_trips() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for fx in fixtures::splitting_fixtures() {
            let d = &fx.degeneration;
            let mut done = 0;
            while done < 40 {
                let Some(g) = sample_vertical(&fx, &mut rng, &sampling_height()) else { continue };
                let c = cut(d, &fx.gamma, &g).unwrap_or_else(|e| panic!("{}: cut failed: {e}", fx.name));
                let back = glue(d, &fx.gamma, &c.parts).unwrap_or_else(|e| panic!("{}: glue failed: {e}", fx.name));
                assert!(same_type(&back, &g), "{}: type changed\n{:?}\n{:?}\n{:?}", fx.name, g, back, c.parts);
                assert_eq!(cut(d, &fx.gamma, &back).unwrap().parts, c.parts);
                done += 1;
            }
        }
    }
}
