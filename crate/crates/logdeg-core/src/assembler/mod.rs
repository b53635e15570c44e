//! Assembly of glued DT/PT/GW series from per-vertex partition functions:
//! sums over rigid complexes, gluing partitions with their Künneth rows, and
//! insertion distributions, with the theory's prefactor.

mod assemble;
pub mod examples;
mod job;
mod solve;

pub use assemble::{
    assemble, assemble_terms, compare_series, consistency_check, cycle_factors, ConsistencyReport, CycleFactors,
    Residual, Term, TermReport,
};
pub use job::{
    BoundaryCondition, Gluing, GluingJob, InsertionLabel, JobComplex, JobEdge, TableEntry, TableKey, Theory,
    VertexTable,
};
pub use solve::{fixed_point_solve, parse_power_relation};

#[cfg(test)]
mod tests {
    use super::examples::*;
    use super::*;
    use crate::arith::{q, qf};
    use crate::degeneration_combinatorics::{enumerate_rigid, fixtures};
    use crate::error::Error;
    use crate::partition_algebra::Partition;
    use crate::series_engine::{macmahon, QSeries, Var};

    fn poly(c: &[i64], order: i64) -> QSeries {
        QSeries::from_poly(Var::Q, &c.iter().map(|&x| q(x)).collect::<Vec<_>>(), order)
    }

    #[test]
    fn degree_zero_job_squares_the_vertex_series() {
        let f = macmahon(8).unwrap();
        let out = assemble(&degree_zero_job(&f, 8)).unwrap();
        assert_eq!(out, f.mul(&f).unwrap());
    }

    #[test]
    fn conic_job_is_fourth_power_with_prefactor() {
        let d = fixtures::p2_degeneration();
        let rec = enumerate_rigid(&d, &[2, 2, 2], &fixtures::generic_points(5), true).unwrap().remove(0);
        assert_eq!(rec.gamma.vertices.len(), 4);
        assert_eq!(rec.gamma.edges.len(), 3);
        let line = sample_line_series(12).unwrap();
        let out = assemble(&conic_job(&rec, &line, 6).unwrap()).unwrap();
        let expected = line.pow(4).unwrap().shift(-3).truncate(6);
        assert_eq!(out, expected);
    }

    #[test]
    fn single_label_one_edge_collapses() {
        let left = poly(&[1, 2, 3], 6);
        let right = poly(&[2, 0, 1], 6);
        let mut tables = VertexTable::new();
        let b = |label: &str| BoundaryCondition {
            edge: "e".into(),
            partition: Partition::new(vec![1]).unwrap(),
            label: label.into(),
        };
        tables.insert(TableKey::new("x", vec![b("point")], vec![]), left.clone());
        tables.insert(TableKey::new("y", vec![b("unit")], vec![]), right.clone());
        let job = GluingJob {
            theory: Theory::Dt,
            complexes: vec![JobComplex {
                id: "g".into(),
                vertices: vec!["x".into(), "y".into()],
                edges: vec![JobEdge { id: "e".into(), ends: ["x".into(), "y".into()], label: 1, pairing: None }],
                gluing: Gluing::All,
                record: None,
            }],
            tables,
            insertions: vec![],
            order: 4,
        };
        let out = assemble(&job).unwrap();
        assert_eq!(out, left.mul(&right).unwrap().shift(-1).truncate(4));
    }

    #[test]
    fn missing_entries_name_the_key() {
        let f = poly(&[1], 3);
        let mut job = degree_zero_job(&f, 3);
        job.tables = VertexTable::new();
        job.tables.insert(TableKey::new("v0", vec![], vec![]), f);
        match assemble(&job) {
            Err(Error::MissingEntry(k)) => assert!(k.contains("v1"), "{k}"),
            other => panic!("expected a missing entry, got {other:?}"),
        }
    }

    #[test]
    fn short_tables_raise_truncation() {
        let f = poly(&[1, 1], 2);
        let job = degree_zero_job(&f, 5);
        assert!(matches!(assemble(&job), Err(Error::Truncation(_))));
    }

    #[test]
    fn insertions_are_distributed_over_vertices() {
        let mut job = degree_zero_job(&poly(&[1], 5), 5);
        job.insertions = vec![InsertionLabel { id: "p".into(), level: 0, class: "pt".into() }];
        job.tables.insert(TableKey::new("v0", vec![], vec!["p".into()]), poly(&[0, 1], 5));
        job.tables.insert(TableKey::new("v1", vec![], vec!["p".into()]), poly(&[0, 0, 1], 5));
        // p at v0: q·1, p at v1: 1·q²
        assert_eq!(assemble(&job).unwrap(), poly(&[0, 1, 1], 5));
    }

    #[test]
    fn gw_prefactor_counts_parts() {
        let one = QSeries::one(Var::U, 10);
        let mut tables = VertexTable::new();
        for (p, v, l) in [(vec![2], "x", "point"), (vec![2], "y", "unit"), (vec![1, 1], "x", "point"), (vec![1, 1], "y", "unit")] {
            let b = BoundaryCondition { edge: "e".into(), partition: Partition::new(p).unwrap(), label: l.into() };
            tables.insert(TableKey::new(v, vec![b], vec![]), one.clone());
        }
        let job = GluingJob {
            theory: Theory::Gw,
            complexes: vec![JobComplex {
                id: "g".into(),
                vertices: vec!["x".into(), "y".into()],
                edges: vec![JobEdge { id: "e".into(), ends: ["x".into(), "y".into()], label: 2, pairing: None }],
                gluing: Gluing::All,
                record: None,
            }],
            tables,
            insertions: vec![],
            order: 8,
        };
        let terms = assemble_terms(&job).unwrap();
        assert_eq!(terms.len(), 2);
        for t in &terms {
            let ell = t.partitions.total_length() as i64;
            assert_eq!(t.series.valuation(), Some(2 * ell));
        }
        // (2): −1·2/1 u²;  (1,1): +1·1/2 u⁴
        let out = assemble(&job).unwrap();
        assert_eq!(out.coeff(2), q(-2));
        assert_eq!(out.coeff(4), qf(1, 2));
    }

    #[test]
    fn trivalent_jobs_agree_under_maximal_tangency() {
        let s = TrivalentSeries::synthetic(10).unwrap();
        let (a, b) = trivalent_jobs(&s, TrivalentVariant::MaximalTangency, 8).unwrap();
        let r = consistency_check(&a, &b).unwrap();
        assert!(r.consistent, "{r:?}");
        assert_eq!(assemble(&a).unwrap(), s.n22.mul(&s.n21).unwrap().truncate(8));
    }

    #[test]
    fn perturbed_n22_is_localized() {
        let s = TrivalentSeries::synthetic(10).unwrap();
        let (mut a, b) = trivalent_jobs(&s, TrivalentVariant::MaximalTangency, 8).unwrap();
        perturb_n22(&mut a, 3, q(1)).unwrap();
        let r = consistency_check(&a, &b).unwrap();
        assert!(!r.consistent);
        // N21 has constant term 1, so the first mismatch sits at the perturbed order
        assert_eq!(r.residual.unwrap().exponent, 3);
    }

    #[test]
    fn split_partition_breaks_the_relation() {
        let s = TrivalentSeries::synthetic(10).unwrap();
        let (a, b) = trivalent_jobs(&s, TrivalentVariant::AllPartitions, 8).unwrap();
        let r = consistency_check(&a, &b).unwrap();
        assert!(!r.consistent);
        let zero = TrivalentSeries { split_left: QSeries::zero(Var::Q, 12), ..s };
        let (a, b) = trivalent_jobs(&zero, TrivalentVariant::AllPartitions, 8).unwrap();
        assert!(consistency_check(&a, &b).unwrap().consistent);
    }

    #[test]
    fn jobs_round_trip_through_json() {
        let s = TrivalentSeries::synthetic(6).unwrap();
        let (a, _) = trivalent_jobs(&s, TrivalentVariant::AllPartitions, 4).unwrap();
        let text = serde_json::to_string(&a).unwrap();
        let back: GluingJob = serde_json::from_str(&text).unwrap();
        assert_eq!(back, a);
    }

    #[test]
    fn cycle_factors_report_labels_and_dilations() {
        let d = fixtures::p2_degeneration();
        let rec = enumerate_rigid(&d, &[1, 1, 1], &fixtures::generic_points(2), true).unwrap().remove(0);
        let job = GluingJob {
            theory: Theory::Pt,
            complexes: vec![JobComplex::from_record("line", "v", &rec)],
            tables: VertexTable::new(),
            insertions: vec![],
            order: 0,
        };
        let f = cycle_factors(&job);
        assert_eq!(f[0].edge_label_product, "1");
        assert_eq!(f[0].dilation_lcm.as_deref(), Some("1"));
    }
}
