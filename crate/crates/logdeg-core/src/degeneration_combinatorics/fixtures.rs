//! Small degenerations with a rigid 1-complex on the slice, generic point
//! sets in the plane, and a random sampler of vertical 1-complexes that
//! specialize to a given rigid complex.

use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;

use super::cut::VerticalComplex;
use super::degeneration::{DegenerationComplex, RigidComplexRecord};
use crate::arith::{add_q, qf, scale_q, sub_q, to_q_vec, zvec, Q, Z};
use crate::cone_geometry::ConeComplex;
use crate::one_complexes::{ChowDecoration, OneComplex};

/// A degeneration together with a rigid 1-complex on its slice.
#[derive(Clone, Debug)]
pub struct SplittingFixture {
    pub name: &'static str,
    pub degeneration: DegenerationComplex,
    pub gamma: RigidComplexRecord,
}

fn degeneration(rank: usize, maximal: &[&[&[i64]]]) -> DegenerationComplex {
    let cones: Vec<Vec<Vec<Z>>> = maximal.iter().map(|c| c.iter().map(|r| zvec(r)).collect()).collect();
    let total = ConeComplex::from_maximal(rank, &cones).expect("fixture fan");
    DegenerationComplex::new(total).expect("fixture degeneration")
}

fn ray_id(d: &DegenerationComplex, r: &[i64]) -> String {
    let i = d.total.ray_index(&zvec(r)).expect("fixture ray");
    d.total.cones[i].id.clone()
}

fn record(d: &DegenerationComplex, vertices: &[&[i64]], edges: &[(usize, usize)], rays: &[(usize, &[i64])]) -> RigidComplexRecord {
    let ids: Vec<String> = vertices.iter().map(|r| ray_id(d, r)).collect();
    let ids: Vec<&str> = ids.iter().map(String::as_str).collect();
    let rays: Vec<(usize, Vec<Z>)> = rays.iter().map(|(v, r)| (*v, zvec(r))).collect();
    RigidComplexRecord::on_slice(d, &ids, edges, &rays).expect("fixture record")
}

/// The product of the fan of the projective plane with R_{≥0}: its slice is
/// the plane with the fan structure of P² around a single vertex.
pub fn p2_degeneration() -> DegenerationComplex {
    let (x, y, w, v): (&[i64], &[i64], &[i64], &[i64]) = (&[1, 0, 0], &[0, 1, 0], &[-1, -1, 0], &[0, 0, 1]);
    degeneration(3, &[&[x, y, v], &[y, w, v], &[w, x, v]])
}

/// One 2-dimensional cone with two vertical rays: the slice is a segment
/// with two vertices, joined by γ.
pub fn segment() -> SplittingFixture {
    let d = degeneration(2, &[&[&[1, 1], &[0, 1]]]);
    let gamma = record(&d, &[&[1, 1], &[0, 1]], &[(0, 1)], &[]);
    SplittingFixture { name: "segment", degeneration: d, gamma }
}

/// The segment degeneration with γ a single vertex.
pub fn single_vertex() -> SplittingFixture {
    let d = degeneration(2, &[&[&[1, 1], &[0, 1]]]);
    let gamma = record(&d, &[&[1, 1]], &[], &[]);
    SplittingFixture { name: "single-vertex", degeneration: d, gamma }
}

/// A triangle in the slice with an unbounded cell over each side; γ is the
/// boundary cycle of the triangle.
pub fn triangle() -> SplittingFixture {
    let (a, b, c): (&[i64], &[i64], &[i64]) = (&[0, 0, 1], &[1, 0, 1], &[0, 1, 1]);
    let (s, e, n): (&[i64], &[i64], &[i64]) = (&[-1, -1, 0], &[2, -1, 0], &[-1, 2, 0]);
    let d = degeneration(3, &[&[a, b, c], &[a, b, s, e], &[b, c, e, n], &[c, a, n, s]]);
    let gamma = record(&d, &[a, b, c], &[(0, 1), (1, 2), (2, 0)], &[]);
    SplittingFixture { name: "triangle", degeneration: d, gamma }
}

/// Three collinear slice vertices in a strip subdivided by horizontal
/// lines; γ is the path through them with rays out of both ends.
pub fn chain() -> SplittingFixture {
    let (a, b, c): (&[i64], &[i64], &[i64]) = (&[0, 0, 1], &[1, 0, 1], &[2, 0, 1]);
    let (up, down, left, right): (&[i64], &[i64], &[i64], &[i64]) = (&[0, 1, 0], &[0, -1, 0], &[-1, 0, 0], &[1, 0, 0]);
    let d = degeneration(
        3,
        &[
            &[a, b, up],
            &[a, b, down],
            &[b, c, up],
            &[b, c, down],
            &[a, left, up],
            &[a, left, down],
            &[c, right, up],
            &[c, right, down],
        ],
    );
    let gamma = record(&d, &[a, b, c], &[(0, 1), (1, 2)], &[(0, left), (2, right)]);
    SplittingFixture { name: "chain", degeneration: d, gamma }
}

/// The three fixtures of the splitting round-trip suite.
pub fn splitting_fixtures() -> Vec<SplittingFixture> {
    vec![segment(), triangle(), chain()]
}

/// Generic points in the plane chart of the P² slice.
pub fn generic_points(n: usize) -> Vec<Vec<Q>> {
    const PTS: [(i64, i64); 8] = [(137, -412), (-583, 291), (766, 905), (-254, -871), (431, 688), (-912, 173), (619, -337), (28, 964)];
    PTS.iter().take(n).map(|&(x, y)| vec![Q::from_integer(x.into()), Q::from_integer(y.into())]).collect()
}

fn small_weight<R: Rng>(rng: &mut R) -> Q {
    qf(rng.gen_range(1..=4), 2)
}

/// Offset vector of a ray of a cone from the slice vertex of γ-vertex u:
/// towards the ray's slice vertex if vertical, along it if horizontal.
fn offset(d: &DegenerationComplex, v_u: &[Q], ray: &[Z]) -> Vec<Q> {
    let k = d.rank();
    if ray[k - 1].is_zero() {
        to_q_vec(ray)
    } else {
        let h = Q::from_integer(ray[k - 1].clone());
        sub_q(&scale_q(&to_q_vec(ray), &(Q::one() / h)), v_u)
    }
}

struct Hub {
    vertex: usize,
    cone: usize,
}

/// A random vertical 1-complex at height `t` specializing to the fixture's
/// γ: hubs in cones around each vertex ray, strands parallel to each edge of
/// γ, random connections and horizontal rays. None when the draw is not
/// embedded.
pub fn sample_vertical<R: Rng>(fx: &SplittingFixture, rng: &mut R, t: &Q) -> Option<VerticalComplex> {
    let d = &fx.degeneration;
    let k = d.rank();
    let cones = fx.gamma.vertex_cones(d).ok()?;
    let n = cones.len();
    let vs: Vec<Vec<Q>> = cones.iter().map(|&c| d.slice_vertex(c)).collect();
    let maximal_around = |rays: &[usize]| -> Vec<usize> {
        let want: Vec<&Vec<Z>> = rays.iter().map(|&c| &d.total.cones[c].rays[0]).collect();
        d.total
            .cones
            .iter()
            .enumerate()
            .filter(|(_, c)| c.rays.len() >= k && want.iter().all(|r| c.rays.contains(r)))
            .map(|(i, _)| i)
            .collect()
    };
    let mut g = OneComplex::new(k);
    let mut deco = ChowDecoration::default();
    let mut retraction = Vec::new();
    let mut hubs: Vec<Vec<Hub>> = (0..n).map(|_| Vec::new()).collect();
    let mut endpoints: Vec<Hub> = Vec::new();
    let mut add = |g: &mut OneComplex, deco: &mut ChowDecoration, x: Vec<Q>, u: usize| {
        retraction.push(u);
        deco.vertex_classes.push(vec![]);
        g.add_vertex(x)
    };
    for u in 0..n {
        let around = maximal_around(&[cones[u]]);
        for _ in 0..rng.gen_range(0..=2) {
            let &cone = around.choose(rng)?;
            let mut x = scale_q(&vs[u], t);
            for r in &d.total.cones[cone].rays {
                if r.as_slice() == d.ray(cones[u]) || rng.gen_bool(0.4) {
                    continue;
                }
                let lam = qf(rng.gen_range(0..=4), 2);
                x = add_q(&x, &scale_q(&offset(d, &vs[u], r), &lam));
            }
            let vertex = add(&mut g, &mut deco, x, u);
            hubs[u].push(Hub { vertex, cone });
        }
    }
    let gamma_edges: Vec<[usize; 2]> = fx.gamma.gamma.edges.iter().map(|e| e.ends).collect();
    for &[u, w] in &gamma_edges {
        let around = maximal_around(&[cones[u], cones[w]]);
        for _ in 0..rng.gen_range(0..=2) {
            let &cone = around.choose(rng)?;
            let mut o = vec![Q::zero(); k];
            let mut vertical_weight = Q::zero();
            for r in &d.total.cones[cone].rays {
                if r.as_slice() == d.ray(cones[u]) || r.as_slice() == d.ray(cones[w]) || rng.gen_bool(0.3) {
                    continue;
                }
                let lam = small_weight(rng);
                if !r[k - 1].is_zero() {
                    vertical_weight += &lam;
                }
                o = add_q(&o, &scale_q(&offset(d, &vs[u], r), &lam));
            }
            let along = sub_q(&vs[w], &vs[u]);
            let a = small_weight(rng);
            let b = &vertical_weight + small_weight(rng);
            let p = add_q(&add_q(&scale_q(&vs[u], t), &scale_q(&along, &a)), &o);
            let q = add_q(&sub_q(&scale_q(&vs[w], t), &scale_q(&along, &b)), &o);
            let pv = add(&mut g, &mut deco, p, u);
            let qv = add(&mut g, &mut deco, q, w);
            g.add_edge(pv, qv).ok()?;
            deco.edge_labels.push(rng.gen_range(1..=2));
            endpoints.push(Hub { vertex: pv, cone });
            endpoints.push(Hub { vertex: qv, cone });
        }
    }
    // connections inside a class, only within a common cone
    let mut pool: Vec<Vec<&Hub>> = (0..n).map(|u| hubs[u].iter().collect()).collect();
    for h in &endpoints {
        pool[retraction[h.vertex]].push(h);
    }
    for class in &pool {
        for (i, a) in class.iter().enumerate() {
            for b in &class[i + 1..] {
                if a.cone == b.cone && rng.gen_bool(0.35) {
                    g.add_edge(a.vertex, b.vertex).ok()?;
                    deco.edge_labels.push(rng.gen_range(1..=2));
                }
            }
        }
    }
    // horizontal rays of the vertex's cone that span a cone with its γ-ray
    for class in &pool {
        for h in class {
            if !rng.gen_bool(0.3) {
                continue;
            }
            let u = retraction[h.vertex];
            let choices: Vec<&Vec<Z>> = d.total.cones[h.cone]
                .rays
                .iter()
                .filter(|r| {
                    r[k - 1].is_zero()
                        && d.total.ray_index(r).is_some_and(|i| d.cone_spanned(&[cones[u], i]).is_some())
                })
                .collect();
            if let Some(r) = choices.choose(rng) {
                g.add_ray(h.vertex, (*r).clone());
                deco.ray_labels.push(rng.gen_range(1..=2));
            }
        }
    }
    g.locate_faces(&d.total);
    if !g.validate(Some(&d.total)).is_empty() {
        return None;
    }
    for (i, v) in g.vertices.iter().enumerate() {
        let c = d.total.locate(&v.position)?;
        if !d.total.cones[c].rays.iter().any(|r| r.as_slice() == d.ray(cones[retraction[i]])) {
            return None;
        }
    }
    Some(VerticalComplex {
        complex: g,
        decoration: deco,
        height: t.clone(),
        retraction,
    })
}

/// Default sampling height: comfortably above the offsets the sampler uses.
pub fn sampling_height() -> Q {
    Q::from_integer(Z::from(60))
}
