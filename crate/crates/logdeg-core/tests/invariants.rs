//! Property tests for structural invariants across the core modules.

use proptest::prelude::*;

use logdeg_core::arith::{q, qvec, zvec};
use logdeg_core::assembler::{
    assemble, BoundaryCondition, Gluing, GluingJob, JobComplex, JobEdge, TableKey, Theory, VertexTable,
};
use logdeg_core::cone_geometry::{Cone, ConeComplex};
use logdeg_core::one_complexes::{one_complex, OneComplex};
use logdeg_core::partition_algebra::Partition;
use logdeg_core::series_engine::{pade_reconstruct, QSeries, RationalFunction, Var};
use logdeg_core::tropical_moduli::type_of;
use logdeg_core::Q;

fn series(coeffs: &[i64], order: i64) -> QSeries {
    let c: Vec<Q> = coeffs.iter().map(|&x| q(x)).collect();
    QSeries::from_poly(Var::Q, &c, order)
}

fn coeffs() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-5i64..=5, 1..8)
}

/// A balanced star at `centre` whose rays are split by bivalent vertices at
/// the given integer distances.
fn subdivided_star(centre: &[i64], splits: &[Vec<u8>]) -> (OneComplex, OneComplex) {
    let dirs = [zvec(&[1, 0]), zvec(&[0, 1]), zvec(&[-1, -1])];
    let c = qvec(centre);
    let star = one_complex(2, &[c.clone()], &[], &dirs.iter().map(|d| (0, d.clone())).collect::<Vec<_>>()).unwrap();
    let mut vertices = vec![c.clone()];
    let mut edges = Vec::new();
    let mut rays = Vec::new();
    for (d, cuts) in dirs.iter().zip(splits) {
        let mut prev = 0;
        let mut dist = 0i64;
        for &step in cuts {
            dist += i64::from(step) + 1;
            let p: Vec<Q> = c.iter().zip(d).map(|(x, y)| x + Q::from_integer(y.clone()) * q(dist)).collect();
            vertices.push(p);
            edges.push((prev, vertices.len() - 1));
            prev = vertices.len() - 1;
        }
        rays.push((prev, d.clone()));
    }
    (star, one_complex(2, &vertices, &edges, &rays).unwrap())
}

/// `reordered` lists the vertices backwards; `flipped` reverses the edge and
/// moves the point class with it.
fn single_edge_job(a: &[Q], b: &[Q], order: i64, reordered: bool, flipped: bool) -> GluingJob {
    let bc = |label: &str| BoundaryCondition { edge: "e".into(), partition: Partition::new(vec![1]).unwrap(), label: label.into() };
    let mut tables = VertexTable::new();
    let (first, second) = if flipped { ("unit", "point") } else { ("point", "unit") };
    tables.insert(TableKey::new("x", vec![bc(first)], vec![]), QSeries::from_poly(Var::Q, a, order + 1));
    tables.insert(TableKey::new("y", vec![bc(second)], vec![]), QSeries::from_poly(Var::Q, b, order + 1));
    let mut vertices = vec!["x".to_string(), "y".to_string()];
    if reordered {
        vertices.reverse();
    }
    let mut ends = ["x".to_string(), "y".to_string()];
    if flipped {
        ends.reverse();
    }
    GluingJob {
        theory: Theory::Pt,
        complexes: vec![JobComplex {
            id: "g".into(),
            vertices,
            edges: vec![JobEdge { id: "e".into(), ends, label: 1, pairing: None }],
            gluing: Gluing::All,
            record: None,
        }],
        tables,
        insertions: vec![],
        order,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn series_product_is_commutative_and_associative(a in coeffs(), b in coeffs(), c in coeffs()) {
        let (a, b, c) = (series(&a, 8), series(&b, 8), series(&c, 8));
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
    }

    #[test]
    fn series_inverse_is_two_sided(mut a in coeffs(), lead in prop::sample::select(vec![-3i64, -1, 1, 2])) {
        a[0] = lead;
        let a = series(&a, 9);
        let inv = a.inverse().unwrap();
        let one = QSeries::one(Var::Q, 9);
        prop_assert_eq!(a.mul(&inv).unwrap(), one.clone());
        prop_assert_eq!(inv.mul(&a).unwrap(), one);
    }

    #[test]
    fn products_are_known_exactly_through_the_smaller_order(a in coeffs(), b in coeffs(), k in 0i64..8) {
        let full = series(&a, 10).mul(&series(&b, 10)).unwrap();
        let cut = series(&a, k).mul(&series(&b, 10)).unwrap();
        prop_assert!(cut.order() >= k);
        for e in 0..=k {
            prop_assert_eq!(cut.coeff(e), full.coeff(e));
        }
    }

    #[test]
    fn rational_expansions_are_recovered(num in prop::collection::vec(-4i64..=4, 1..3), den in prop::collection::vec(-4i64..=4, 0..2)) {
        let mut d = vec![q(1)];
        d.extend(den.iter().map(|&x| q(x)));
        let f = RationalFunction::from_coeffs(&num.iter().map(|&x| q(x)).collect::<Vec<_>>(), &d).unwrap();
        let s = f.expand(0, 12);
        let g = pade_reconstruct(&s, 2).unwrap().expect("degree ≤ 2 rational");
        prop_assert_eq!(g.expand(0, 12), s);
    }

    #[test]
    fn retraction_forgets_bivalent_subdivisions(
        centre in prop::collection::vec(-5i64..=5, 2),
        splits in prop::collection::vec(prop::collection::vec(0u8..3, 0..3), 3),
    ) {
        let (star, g) = subdivided_star(&centre, &splits);
        let r = g.retract_to_pure(None);
        prop_assert!(r.is_pure(None));
        prop_assert_eq!(r.vertices.len(), 1);
        prop_assert_eq!(r.rays.len(), 3);
        prop_assert_eq!(r.retract_to_pure(None), r.clone());
        prop_assert_eq!(type_of(&r, None, &[]).unwrap(), type_of(&star, None, &[]).unwrap());
    }

    #[test]
    fn types_are_invariant_under_dilation(
        centre in prop::collection::vec(-5i64..=5, 2),
        splits in prop::collection::vec(prop::collection::vec(0u8..3, 0..3), 3),
        k in 1i64..5,
    ) {
        let (_, g) = subdivided_star(&centre, &splits);
        let scaled = g.dilate(&q(k));
        prop_assert_eq!(type_of(&scaled, None, &[]).unwrap(), type_of(&g, None, &[]).unwrap());
    }

    #[test]
    fn stellar_subdivision_preserves_support(a in 1i64..5, b in 1i64..5, x in 0i64..7, y in 0i64..7) {
        let quadrant = ConeComplex::from_maximal(2, &[vec![zvec(&[1, 0]), zvec(&[0, 1])]]).unwrap();
        let sub = quadrant.stellar_subdivide(&zvec(&[a, b])).unwrap();
        prop_assert!(sub.validate().is_empty());
        prop_assert_eq!(sub.maximal_cones().len(), 2);
        let p = qvec(&[x, y]);
        prop_assert_eq!(sub.support_contains(&p), quadrant.support_contains(&p));
    }

    #[test]
    fn interior_points_lie_in_the_relative_interior(rays in prop::collection::vec(prop::collection::vec(0i64..4, 3), 1..4)) {
        prop_assume!(rays.iter().all(|r| r.iter().any(|&x| x > 0)));
        let gens: Vec<_> = rays.iter().map(|r| zvec(r)).collect();
        let cone = Cone::from_generators("c", 3, &gens).unwrap();
        prop_assert!(cone.relint_contains(&cone.interior_point()));
    }

    #[test]
    fn assembly_ignores_vertex_order(a in coeffs(), b in coeffs()) {
        let to_q = |v: &[i64]| v.iter().map(|&x| q(x)).collect::<Vec<Q>>();
        let (a, b) = (to_q(&a), to_q(&b));
        let base = assemble(&single_edge_job(&a, &b, 6, false, false)).unwrap();
        prop_assert_eq!(&assemble(&single_edge_job(&a, &b, 6, true, false)).unwrap(), &base);
        prop_assert_eq!(&assemble(&single_edge_job(&a, &b, 6, false, true)).unwrap(), &base);
    }
}
