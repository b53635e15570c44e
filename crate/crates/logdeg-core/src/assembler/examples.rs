//! Ready-made jobs: the degree-zero square, the conic job over four line
//! vertices, and the two trivalent degenerations compared against each other.

use crate::arith::{q, qf, Q};
use crate::degeneration_combinatorics::RigidComplexRecord;
use crate::error::{Error, Result};
use crate::partition_algebra::{PairingRow, PairingTable, Partition};
use crate::series_engine::{QSeries, Var};

use super::job::{BoundaryCondition, Gluing, GluingJob, JobComplex, JobEdge, TableKey, Theory, VertexTable};

fn bc(edge: &str, parts: &[u32], label: &str) -> Result<BoundaryCondition> {
    Ok(BoundaryCondition {
        edge: edge.into(),
        partition: Partition::new(parts.to_vec())?,
        label: label.into(),
    })
}

/// Two vertices, no edges, both tables F: the assembled series is F².
pub fn degree_zero_job(f: &QSeries, order: i64) -> GluingJob {
    let mut tables = VertexTable::new();
    for v in ["v0", "v1"] {
        tables.insert(TableKey::new(v, vec![], vec![]), f.clone());
    }
    GluingJob {
        theory: Theory::Pt,
        complexes: vec![JobComplex {
            id: "degree0".into(),
            vertices: vec!["v0".into(), "v1".into()],
            edges: vec![],
            gluing: Gluing::All,
            record: None,
        }],
        tables,
        insertions: vec![],
        order,
    }
}

/// The conic job: the bounded-edge graph of the rigid conic, every vertex
/// carrying the line series for each boundary condition it sees. With the
/// point/unit pairing each edge contributes one row and the glued series is
/// q^{−#edges} times the product of the vertex series.
pub fn conic_job(record: &RigidComplexRecord, line: &QSeries, order: i64) -> Result<GluingJob> {
    let complex = JobComplex::from_record("conic", "v", record);
    if complex.edges.iter().any(|e| e.label != 1) {
        return Err(Error::Invalid("the conic job expects edges of label 1".into()));
    }
    let mut tables = VertexTable::new();
    for v in &complex.vertices {
        let mut boundary = Vec::new();
        for e in &complex.edges {
            if &e.ends[0] == v {
                boundary.push(bc(&e.id, &[1], "point")?);
            } else if &e.ends[1] == v {
                boundary.push(bc(&e.id, &[1], "unit")?);
            }
        }
        tables.insert(TableKey::new(v, boundary, vec![]), line.clone());
    }
    Ok(GluingJob {
        theory: Theory::Pt,
        complexes: vec![complex],
        tables,
        insertions: vec![],
        order,
    })
}

/// A stand-in for the PT series of a line relative to its boundary: q^0
/// term 1 and alternating growth, known through `order`.
pub fn sample_line_series(order: i64) -> Result<QSeries> {
    // 1/(1 + q)^2
    QSeries::from_poly(Var::Q, &[q(1), q(1)], order + 2).pow(-2).map(|s| s.truncate(order))
}

/// Vertex series of the trivalent comparison.
#[derive(Clone, Debug, PartialEq)]
pub struct TrivalentSeries {
    pub n22: QSeries,
    pub n21: QSeries,
    pub n41: QSeries,
    /// Vertex series for the split gluing partition (1,1) at the two ends
    /// of the weight-2 edge, used by the variant without the vanishing
    /// assumption.
    pub split_left: QSeries,
    pub split_right: QSeries,
}

impl TrivalentSeries {
    /// Synthetic series satisfying N22 = N41, with nonzero split tables.
    pub fn synthetic(order: i64) -> Result<Self> {
        let n41 = QSeries::from_poly(Var::Q, &[q(1), q(-1)], order + 4).pow(-2)?.truncate(order + 2);
        let n21 = QSeries::from_poly(Var::Q, &[q(1), q(2), q(0), q(1)], order + 2);
        let split = QSeries::from_poly(Var::Q, &[q(0), q(1), q(3)], order + 2);
        Ok(TrivalentSeries {
            n22: n41.clone(),
            n21,
            n41,
            split_left: split.clone(),
            split_right: split,
        })
    }
}

/// Which gluing partitions of the weight-2 edge are summed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TrivalentVariant {
    /// Only maximal tangency (2) contributes: the split partition (1,1) is
    /// assumed to vanish.
    MaximalTangency,
    /// Both (2) and (1,1) contribute, with the supplied split tables.
    AllPartitions,
}

fn pairing(coefficient: Q) -> PairingTable {
    PairingTable {
        labels: vec!["unit".into(), "point".into()],
        rows: vec![PairingRow {
            left: "point".into(),
            right: "unit".into(),
            coefficient,
        }],
    }
}

/// The two degenerations of the non-trivalent invariant. In the first the
/// bounded edge has weight 2 between the (2,2) and (2,1) vertices; in the
/// second it has weight 1 between the (2,1) and (4,1) vertices. The tables
/// absorb the prefactors so that, under maximal tangency, the jobs assemble
/// to N22·N21 and N21·N41 respectively: the weight-2 term carries
/// (−1)·2·q^{−2}, offset by the pairing coefficient −1/2 and a factor q² in
/// the (2,2) table; the weight-1 term carries q^{−1}, offset by q in the
/// (2,1) table.
pub fn trivalent_jobs(s: &TrivalentSeries, variant: TrivalentVariant, order: i64) -> Result<(GluingJob, GluingJob)> {
    let gluing = match variant {
        TrivalentVariant::MaximalTangency => Gluing::Maximal,
        TrivalentVariant::AllPartitions => Gluing::All,
    };
    let mut ta = VertexTable::new();
    ta.insert(TableKey::new("a22", vec![bc("ea", &[2], "point")?], vec![]), s.n22.shift(2));
    ta.insert(TableKey::new("a21", vec![bc("ea", &[2], "unit")?], vec![]), s.n21.clone());
    if variant == TrivalentVariant::AllPartitions {
        ta.insert(TableKey::new("a22", vec![bc("ea", &[1, 1], "point")?], vec![]), s.split_left.shift(2));
        ta.insert(TableKey::new("a21", vec![bc("ea", &[1, 1], "unit")?], vec![]), s.split_right.clone());
    }
    let job_a = GluingJob {
        theory: Theory::Pt,
        complexes: vec![JobComplex {
            id: "weight-two-edge".into(),
            vertices: vec!["a22".into(), "a21".into()],
            edges: vec![JobEdge {
                id: "ea".into(),
                ends: ["a22".into(), "a21".into()],
                label: 2,
                pairing: Some(pairing(qf(-1, 2))),
            }],
            gluing,
            record: None,
        }],
        tables: ta,
        insertions: vec![],
        order,
    };
    let mut tb = VertexTable::new();
    tb.insert(TableKey::new("b21", vec![bc("eb", &[1], "point")?], vec![]), s.n21.shift(1));
    tb.insert(TableKey::new("b41", vec![bc("eb", &[1], "unit")?], vec![]), s.n41.clone());
    let job_b = GluingJob {
        theory: Theory::Pt,
        complexes: vec![JobComplex {
            id: "weight-one-edge".into(),
            vertices: vec!["b21".into(), "b41".into()],
            edges: vec![JobEdge {
                id: "eb".into(),
                ends: ["b21".into(), "b41".into()],
                label: 1,
                pairing: None,
            }],
            gluing,
            record: None,
        }],
        tables: tb,
        insertions: vec![],
        order,
    };
    Ok((job_a, job_b))
}

/// Adds δ to the q^exponent coefficient of the (2,2) vertex series.
pub fn perturb_n22(job_a: &mut GluingJob, exponent: i64, delta: Q) -> Result<()> {
    let key = TableKey::new("a22", vec![bc("ea", &[2], "point")?], vec![]);
    let s = job_a
        .tables
        .get_mut(&key)
        .ok_or_else(|| Error::MissingEntry(key.to_string()))?;
    // the stored table is q²·N22
    let bump = QSeries::monomial(Var::Q, exponent + 2, delta, s.order());
    *s = s.add(&bump)?;
    Ok(())
}
