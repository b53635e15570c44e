//! Rigid plane tropical curves of a given degree through points of a rank-2
//! slice.
//!
//! A balanced 1-complex in the plane with transverse ends of the given degree
//! is the corner locus of a tropical polynomial max_a (c_a + ⟨a, x⟩) over the
//! lattice points a of the Newton polygon. Passing through a point p means some
//! pair {a, b} attains the maximum at p strictly above every other term; fixing
//! one such pair per point cuts out a relatively open polyhedron in coefficient
//! space. The search walks these pair choices depth first, pruning with a
//! floating-point linear program and confirming every surviving cell exactly.
//! Every curve of a cell of dimension 0, and every curve of a 1-dimensional
//! cell at its breakpoints, endpoints and on each open stretch where the curve
//! does not move, is then tested for rigidity.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use minilp::{ComparisonOp, OptimizationDirection, Problem};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use super::degeneration::{DegenerationComplex, RigidComplexRecord, RigidityCertificate};
use crate::arith::{q, Q, Z};
use crate::error::{Error, Result};
use crate::linalg::nullspace_q;
use crate::lp::Constraints;
use crate::one_complexes::{check_balancing_decorated, ChowDecoration, OneComplex};
use crate::tropical_moduli::{realized_dimension, type_of};

type P2 = (i64, i64);

fn cross(a: P2, b: P2) -> i64 {
    a.0 * b.1 - a.1 * b.0
}

fn sub(a: P2, b: P2) -> P2 {
    (a.0 - b.0, a.1 - b.1)
}

/// Vertices, counterclockwise, of the polygon whose boundary has edge vector
/// d·J(u) for each end direction u of multiplicity d (J = rotation by +90°).
/// The polygon is translated to have minimal coordinates 0.
pub fn newton_polygon(directions: &[Vec<Z>], degree: &[u32]) -> Result<Vec<P2>> {
    if directions.len() != degree.len() {
        return Err(Error::Invalid(format!(
            "degree has {} entries for {} end directions",
            degree.len(),
            directions.len()
        )));
    }
    let mut ends: Vec<(P2, i64)> = Vec::new();
    for (u, &d) in directions.iter().zip(degree) {
        if u.len() != 2 {
            return Err(Error::Unsupported("rigid enumeration needs a 2-dimensional slice".into()));
        }
        let u = (
            u[0].to_i64().ok_or_else(|| Error::Invalid("direction too large".into()))?,
            u[1].to_i64().ok_or_else(|| Error::Invalid("direction too large".into()))?,
        );
        if d > 0 {
            ends.push((u, d as i64));
        }
    }
    let sum = ends.iter().fold((0, 0), |s, (u, d)| (s.0 + d * u.0, s.1 + d * u.1));
    if sum != (0, 0) || ends.is_empty() {
        return Err(Error::Invalid("degree is not balanced: weighted end directions must sum to zero".into()));
    }
    let half = |v: P2| if v.1 > 0 || (v.1 == 0 && v.0 > 0) { 0 } else { 1 };
    ends.sort_by(|(a, _), (b, _)| half(*a).cmp(&half(*b)).then_with(|| 0.cmp(&cross(*a, *b))));
    let mut pts = vec![(0i64, 0i64)];
    for (u, d) in &ends {
        let last = *pts.last().expect("nonempty");
        pts.push((last.0 - d * u.1, last.1 + d * u.0));
    }
    pts.pop();
    // drop collinear repeats (parallel consecutive ends)
    let n = pts.len();
    let mut verts: Vec<P2> = (0..n)
        .filter(|&i| {
            let (a, b, c) = (pts[(i + n - 1) % n], pts[i], pts[(i + 1) % n]);
            cross(sub(b, a), sub(c, b)) != 0
        })
        .map(|i| pts[i])
        .collect();
    let mx = verts.iter().map(|p| p.0).min().unwrap_or(0);
    let my = verts.iter().map(|p| p.1).min().unwrap_or(0);
    for p in &mut verts {
        *p = (p.0 - mx, p.1 - my);
    }
    Ok(verts)
}

/// Lattice points of a convex polygon given counterclockwise, sorted.
pub fn lattice_points(poly: &[P2]) -> Vec<P2> {
    if poly.is_empty() {
        return vec![];
    }
    let (x0, x1) = (poly.iter().map(|p| p.0).min().unwrap(), poly.iter().map(|p| p.0).max().unwrap());
    let (y0, y1) = (poly.iter().map(|p| p.1).min().unwrap(), poly.iter().map(|p| p.1).max().unwrap());
    let n = poly.len();
    let mut out = Vec::new();
    for x in x0..=x1 {
        for y in y0..=y1 {
            let inside = (0..n).all(|j| cross(sub(poly[(j + 1) % n], poly[j]), sub((x, y), poly[j])) >= 0);
            if inside {
                out.push((x, y));
            }
        }
    }
    out
}

/// A plane tropical curve: dual vertices, bounded edges and ends with weights.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct PlaneCurve {
    pub vertices: Vec<[Q; 2]>,
    /// (vertex, vertex, weight) with the first index smaller.
    pub edges: Vec<(usize, usize, u32)>,
    /// (vertex, primitive direction, weight).
    pub ends: Vec<(usize, P2, u32)>,
}

fn hull_ccw(points: &[P2]) -> Vec<P2> {
    let mut p: Vec<P2> = points.to_vec();
    p.sort();
    p.dedup();
    if p.len() < 3 {
        return p;
    }
    let mut lower: Vec<P2> = Vec::new();
    for &x in &p {
        while lower.len() >= 2 && cross(sub(lower[lower.len() - 1], lower[lower.len() - 2]), sub(x, lower[lower.len() - 1])) <= 0 {
            lower.pop();
        }
        lower.push(x);
    }
    let mut upper: Vec<P2> = Vec::new();
    for &x in p.iter().rev() {
        while upper.len() >= 2 && cross(sub(upper[upper.len() - 1], upper[upper.len() - 2]), sub(x, upper[upper.len() - 1])) <= 0 {
            upper.pop();
        }
        upper.push(x);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

fn gcd_i(a: i64, b: i64) -> i64 {
    a.abs().gcd(&b.abs())
}

/// The corner locus of max_a (c_a + ⟨a, x⟩), read off the regular subdivision
/// induced by the lifts (a, c_a): upper faces give vertices, interior edges
/// give bounded edges and boundary edges give ends along outer normals.
pub fn corner_locus(a: &[P2], c: &[Q]) -> PlaneCurve {
    let n = a.len();
    let qi = |v: i64| Q::from_integer(Z::from(v));
    let mut faces: Vec<(Vec<usize>, [Q; 2])> = Vec::new();
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    for (i, j, k) in (0..n).tuple_combinations() {
        let det = cross(sub(a[j], a[i]), sub(a[k], a[i]));
        if det == 0 {
            continue;
        }
        if faces.iter().any(|(f, _)| f.contains(&i) && f.contains(&j) && f.contains(&k)) {
            continue;
        }
        let (dcj, dck) = (&c[j] - &c[i], &c[k] - &c[i]);
        let (xj, yj) = sub(a[j], a[i]);
        let (xk, yk) = sub(a[k], a[i]);
        let d = qi(det);
        let b1 = (&dcj * qi(yk) - &dck * qi(yj)) / &d;
        let b2 = (&dck * qi(xj) - &dcj * qi(xk)) / &d;
        let alpha = &c[i] - &b1 * qi(a[i].0) - &b2 * qi(a[i].1);
        let mut on = Vec::new();
        let mut ok = true;
        for m in 0..n {
            let plane = &alpha + &b1 * qi(a[m].0) + &b2 * qi(a[m].1);
            if c[m] > plane {
                ok = false;
                break;
            }
            if c[m] == plane {
                on.push(m);
            }
        }
        if ok && seen.insert(on.clone()) {
            faces.push((on, [b1, b2]));
        }
    }
    // dual vertices, sorted by position
    let mut order: Vec<usize> = (0..faces.len()).collect();
    let dual = |f: usize| [-faces[f].1[0].clone(), -faces[f].1[1].clone()];
    order.sort_by_key(|&f| dual(f));
    let mut rank = vec![0; faces.len()];
    for (r, &f) in order.iter().enumerate() {
        rank[f] = r;
    }
    let vertices: Vec<[Q; 2]> = order.iter().map(|&f| dual(f)).collect();
    let mut edge_faces: BTreeMap<(P2, P2), Vec<(usize, P2, P2)>> = BTreeMap::new();
    for (f, (pts, _)) in faces.iter().enumerate() {
        let h = hull_ccw(&pts.iter().map(|&m| a[m]).collect::<Vec<_>>());
        for t in 0..h.len() {
            let (p, q) = (h[t], h[(t + 1) % h.len()]);
            let key = if p < q { (p, q) } else { (q, p) };
            edge_faces.entry(key).or_default().push((rank[f], p, q));
        }
    }
    let mut edges = Vec::new();
    let mut ends = Vec::new();
    for (_, fs) in edge_faces {
        let (f, p, q) = fs[0];
        let e = sub(q, p);
        let w = gcd_i(e.0, e.1) as u32;
        if fs.len() == 2 {
            let g = fs[1].0;
            edges.push((f.min(g), f.max(g), w));
        } else {
            let g = gcd_i(e.0, e.1);
            ends.push((f, (e.1 / g, -e.0 / g), w));
        }
    }
    edges.sort();
    ends.sort();
    PlaneCurve { vertices, edges, ends }
}

impl PlaneCurve {
    /// The curve at height 1 of a rank-3 lattice, with its weights as labels.
    pub fn to_complex(&self) -> Result<(OneComplex, ChowDecoration)> {
        let mut g = OneComplex::new(3);
        for v in &self.vertices {
            g.add_vertex(vec![v[0].clone(), v[1].clone(), Q::one()]);
        }
        let mut labels = Vec::new();
        for &(i, j, w) in &self.edges {
            g.add_edge(i, j)?;
            labels.push(w);
        }
        let mut ray_labels = Vec::new();
        for &(v, d, w) in &self.ends {
            g.add_ray(v, vec![Z::from(d.0), Z::from(d.1), Z::zero()]);
            ray_labels.push(w);
        }
        let deco = ChowDecoration {
            edge_labels: labels,
            ray_labels,
            vertex_classes: vec![vec![]; g.vertices.len()],
        };
        Ok((g, deco))
    }
}

/// Mikhalkin multiplicity: the product over trivalent vertices of
/// w₁w₂|det(d₁, d₂)|, with 4-valent crossings of two straight lines counting
/// 1. Records that are not transverse genus-0 curves through the points
/// (a point at a vertex, another vertex shape, or a cycle that is not a
/// crossing) get 0.
pub fn mikhalkin_multiplicity(g: &OneComplex, deco: &ChowDecoration, points: &[Vec<Q>]) -> u64 {
    if points.iter().any(|p| g.vertices.iter().any(|v| &v.position == p)) {
        return 0;
    }
    let mut mult: u64 = 1;
    let mut crossings = 0usize;
    for v in 0..g.vertices.len() {
        let flags: Vec<(Vec<Z>, u32)> = g.flags(v).into_iter().map(|(c, d)| (d, deco.label(c))).collect();
        match flags.len() {
            3 => {
                let (d1, w1) = &flags[0];
                let (d2, w2) = &flags[1];
                let det = (&d1[0] * &d2[1] - &d1[1] * &d2[0]).abs();
                let det = det.to_u64().unwrap_or(0);
                mult *= u64::from(*w1) * u64::from(*w2) * det;
            }
            4 => {
                let opposite = |i: usize, j: usize| {
                    flags[i].1 == flags[j].1 && flags[i].0.iter().zip(&flags[j].0).all(|(x, y)| *x == -y.clone())
                };
                let paired = (1..4).any(|j| {
                    let rest: Vec<usize> = (1..4).filter(|&k| k != j).collect();
                    opposite(0, j) && opposite(rest[0], rest[1])
                });
                if !paired {
                    return 0;
                }
                crossings += 1;
            }
            _ => return 0,
        }
    }
    // genus of the parametrizing curve: cycles of the embedded graph not
    // explained by crossings
    let nv = g.vertices.len();
    let mut parent: Vec<usize> = (0..nv).collect();
    fn find(p: &mut Vec<usize>, x: usize) -> usize {
        if p[x] != x {
            let r = find(p, p[x]);
            p[x] = r;
        }
        p[x]
    }
    let mut components = nv;
    for e in &g.edges {
        let (a, b) = (find(&mut parent, e.ends[0]), find(&mut parent, e.ends[1]));
        if a != b {
            parent[a] = b;
            components -= 1;
        }
    }
    let b1 = g.edges.len() + components - nv;
    if b1 != crossings {
        return 0;
    }
    mult
}

struct Search {
    a: Vec<P2>,
    points: Vec<[Q; 2]>,
    pf: Vec<(f64, f64)>,
}

impl Search {
    fn value_f(&self, m: usize, p: usize) -> f64 {
        (self.a[m].0 as f64) * self.pf[p].0 + (self.a[m].1 as f64) * self.pf[p].1
    }

    fn value(&self, m: usize, p: usize) -> Q {
        Q::from_integer(Z::from(self.a[m].0)) * &self.points[p][0] + Q::from_integer(Z::from(self.a[m].1)) * &self.points[p][1]
    }

    /// Floating-point strict feasibility of a partial assignment.
    fn plausible(&self, pairs: &[(usize, usize)]) -> bool {
        let n = self.a.len();
        let mut lp = Problem::new(OptimizationDirection::Maximize);
        let c: Vec<_> = (0..n)
            .map(|m| {
                if m == 0 {
                    lp.add_var(0.0, (0.0, 0.0))
                } else {
                    lp.add_var(0.0, (f64::NEG_INFINITY, f64::INFINITY))
                }
            })
            .collect();
        let s = lp.add_var(1.0, (f64::NEG_INFINITY, 1.0));
        for (p, &(x, y)) in pairs.iter().enumerate() {
            // c_x + ⟨x,p⟩ = c_y + ⟨y,p⟩
            lp.add_constraint(&[(c[x], 1.0), (c[y], -1.0)], ComparisonOp::Eq, self.value_f(y, p) - self.value_f(x, p));
            for m in 0..n {
                if m == x || m == y {
                    continue;
                }
                // c_m + ⟨m,p⟩ + s ≤ c_x + ⟨x,p⟩
                lp.add_constraint(&[(c[m], 1.0), (c[x], -1.0), (s, 1.0)], ComparisonOp::Le, self.value_f(x, p) - self.value_f(m, p));
            }
        }
        match lp.solve() {
            Ok(sol) => sol.objective() > 1e-7,
            Err(_) => false,
        }
    }

    fn exact(&self, pairs: &[(usize, usize)]) -> Constraints {
        let n = self.a.len();
        let mut c = Constraints::new(n);
        let unit = |i: usize| {
            let mut r = vec![Q::zero(); n];
            r[i] = Q::one();
            r
        };
        c.eq.push((unit(0), Q::zero()));
        for (p, &(x, y)) in pairs.iter().enumerate() {
            let mut r = unit(x);
            r[y] = -Q::one();
            c.eq.push((r, self.value(y, p) - self.value(x, p)));
            for m in 0..n {
                if m == x || m == y {
                    continue;
                }
                let mut r = unit(x);
                r[m] = -Q::one();
                c.gt.push((r, self.value(m, p) - self.value(x, p)));
            }
        }
        c
    }

    fn dfs(&self, pairs: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        if pairs.len() == self.points.len() {
            out.push(pairs.clone());
            return;
        }
        let n = self.a.len();
        for (x, y) in (0..n).tuple_combinations() {
            pairs.push((x, y));
            if self.plausible(pairs) {
                self.dfs(pairs, out);
            }
            pairs.pop();
        }
    }
}

/// Curves worth a rigidity test from one cell of coefficient space.
fn cell_candidates(search: &Search, quads: &[([usize; 4], [i64; 4])], pairs: &[(usize, usize)]) -> Result<Vec<PlaneCurve>> {
    let cons = search.exact(pairs);
    let f = cons.analyse();
    match f.dimension {
        -1 => Ok(vec![]),
        0 => Ok(vec![corner_locus(&search.a, &f.witness.expect("feasible cell has a witness"))]),
        1 => {
            let c0 = f.witness.expect("feasible cell has a witness");
            let eqs: Vec<Vec<Q>> = cons.eq.iter().map(|(r, _)| r.clone()).collect();
            let r = nullspace_q(&eqs, search.a.len()).pop().expect("one-dimensional cell");
            let dot = |u: &[Q], v: &[Q]| u.iter().zip(v).fold(Q::zero(), |s, (x, y)| s + x * y);
            let (mut lo, mut hi): (Option<Q>, Option<Q>) = (None, None);
            for (g, beta) in &cons.gt {
                let gr = dot(g, &r);
                if gr.is_zero() {
                    continue;
                }
                let bound = (beta - dot(g, &c0)) / &gr;
                if gr.is_positive() {
                    if lo.as_ref().map_or(true, |l| &bound > l) {
                        lo = Some(bound);
                    }
                } else if hi.as_ref().map_or(true, |h| &bound < h) {
                    hi = Some(bound);
                }
            }
            let inside = |t: &Q| lo.as_ref().map_or(true, |l| t > l) && hi.as_ref().map_or(true, |h| t < h);
            let mut marks: BTreeSet<Q> = BTreeSet::new();
            for (idx, cof) in quads {
                let mut d0 = Q::zero();
                let mut d1 = Q::zero();
                for k in 0..4 {
                    let cf = Q::from_integer(Z::from(cof[k]));
                    d0 += &cf * &c0[idx[k]];
                    d1 += &cf * &r[idx[k]];
                }
                if !d1.is_zero() {
                    let t = -d0 / d1;
                    if inside(&t) {
                        marks.insert(t);
                    }
                }
            }
            let at = |t: &Q| -> Vec<Q> { c0.iter().zip(&r).map(|(x, y)| x + y * t).collect() };
            let mut out = Vec::new();
            for t in marks.iter().chain(lo.iter()).chain(hi.iter()) {
                out.push(corner_locus(&search.a, &at(t)));
            }
            // open stretches between consecutive marks: keep the curve only when
            // it is the same at two interior parameters
            let mut cuts: Vec<Option<Q>> = vec![lo.clone()];
            cuts.extend(marks.iter().cloned().map(Some));
            cuts.push(hi.clone());
            for w in cuts.windows(2) {
                let (s1, s2) = match (&w[0], &w[1]) {
                    (Some(a), Some(b)) => {
                        let len = b - a;
                        (a + &len * Q::new(Z::from(1), Z::from(3)), a + &len * Q::new(Z::from(2), Z::from(3)))
                    }
                    (Some(a), None) => (a + q(1), a + q(2)),
                    (None, Some(b)) => (b - q(1), b - q(2)),
                    (None, None) => (q(0), q(1)),
                };
                let (g1, g2) = (corner_locus(&search.a, &at(&s1)), corner_locus(&search.a, &at(&s2)));
                if g1 == g2 {
                    out.push(g1);
                }
            }
            Ok(out)
        }
        k => Err(Error::NonGeneric(format!(
            "the curves through the points with pair choice {pairs:?} form a family of dimension {k}"
        ))),
    }
}

fn chart_point(d: &DegenerationComplex, p: &[Q]) -> Result<[Q; 2]> {
    match p.len() {
        2 => Ok([p[0].clone(), p[1].clone()]),
        3 if p[2] == d.height(p) && p[2].is_one() => Ok([p[0].clone(), p[1].clone()]),
        _ => Err(Error::Invalid(format!("point {p:?} is not in the height-1 slice"))),
    }
}

/// All rigid 1-complexes with transverse ends of the given degree (one entry
/// per horizontal ray, in cone order) through the points of the height-1
/// slice. Records are in lattice coordinates at height 1, sorted.
pub fn enumerate_rigid(
    d: &DegenerationComplex,
    degree: &[u32],
    points: &[Vec<Q>],
    require_balanced: bool,
) -> Result<Vec<RigidComplexRecord>> {
    if d.rank() != 3 {
        return Err(Error::Unsupported(format!(
            "rigid enumeration is implemented for 2-dimensional slices, this slice has dimension {}",
            d.rank() - 1
        )));
    }
    let poly = newton_polygon(&d.recession_directions(), degree)?;
    let a = lattice_points(&poly);
    let chart: Vec<[Q; 2]> = points.iter().map(|p| chart_point(d, p)).collect::<Result<_>>()?;
    for (i, j) in (0..chart.len()).tuple_combinations() {
        if chart[i] == chart[j] {
            return Err(Error::NonGeneric(format!("points {i} and {j} coincide")));
        }
    }
    if chart.len() + 1 > a.len() {
        return Err(Error::NonGeneric(format!(
            "{} points exceed the {} conditions a curve of this degree can meet",
            chart.len(),
            a.len() - 1
        )));
    }
    // process points in a canonical order so the search does not depend on input order
    let mut sorted = chart.clone();
    sorted.sort();
    let pf = sorted
        .iter()
        .map(|p| (p[0].to_f64().unwrap_or(f64::NAN), p[1].to_f64().unwrap_or(f64::NAN)))
        .collect();
    let search = Search {
        a: a.clone(),
        points: sorted,
        pf,
    };
    let quads: Vec<([usize; 4], [i64; 4])> = (0..a.len())
        .combinations(4)
        .filter_map(|s| {
            let det3 = |i: usize, j: usize, k: usize| cross(sub(a[j], a[i]), sub(a[k], a[i]));
            let cof = [
                -det3(s[1], s[2], s[3]),
                det3(s[0], s[2], s[3]),
                -det3(s[0], s[1], s[3]),
                det3(s[0], s[1], s[2]),
            ];
            (cof != [0; 4]).then(|| ([s[0], s[1], s[2], s[3]], cof))
        })
        .collect();
    let leaves: Vec<Vec<(usize, usize)>> = if search.points.is_empty() {
        vec![vec![]]
    } else {
        (0..a.len())
            .tuple_combinations()
            .collect::<Vec<(usize, usize)>>()
            .into_par_iter()
            .flat_map_iter(|first| {
                let mut pairs = vec![first];
                let mut out = Vec::new();
                if search.plausible(&pairs) {
                    search.dfs(&mut pairs, &mut out);
                }
                out
            })
            .collect()
    };
    let per_cell: Vec<Vec<PlaneCurve>> =
        leaves.par_iter().map(|pairs| cell_candidates(&search, &quads, pairs)).collect::<Result<_>>()?;
    let unique: BTreeSet<PlaneCurve> = per_cell.into_iter().flatten().collect();
    let points3: Vec<Vec<Q>> = chart.iter().map(|p| vec![p[0].clone(), p[1].clone(), Q::one()]).collect();
    let records: Vec<Option<RigidComplexRecord>> = unique
        .into_par_iter()
        .map(|curve| -> Result<Option<RigidComplexRecord>> {
            if curve.ends.iter().any(|e| e.2 != 1) {
                return Ok(None);
            }
            let (mut g, deco) = curve.to_complex()?;
            g.locate_faces(&d.total);
            if require_balanced && !check_balancing_decorated(&g, &deco, None).is_empty() {
                return Ok(None);
            }
            // the cells need not follow the fan of the slice, so the
            // parameter count is taken in the ambient vector space; the
            // point conditions pin the height
            let t = type_of(&g, None, &points3)?;
            let (variables, equation_rank, dimension) = realized_dimension(&t, None)?;
            if dimension != 0 {
                return Ok(None);
            }
            let multiplicity = mikhalkin_multiplicity(&g, &deco, &points3);
            Ok(Some(RigidComplexRecord {
                gamma: g,
                decoration: deco,
                hilbert: None,
                vertex_rays: vec![],
                points: points3.clone(),
                certificate: RigidityCertificate {
                    variables,
                    equation_rank,
                    dimension,
                },
                multiplicity: Some(multiplicity),
            }))
        })
        .collect::<Result<_>>()?;
    Ok(records.into_iter().flatten().collect())
}

/// Sum of the Mikhalkin multiplicities of a list of records.
pub fn total_multiplicity(records: &[RigidComplexRecord]) -> u64 {
    records.iter().map(|r| r.multiplicity.unwrap_or(0)).sum()
}
