//! Gluing jobs: rigid complexes as graphs with labelled edges, per-vertex
//! series tables keyed by boundary conditions and insertions, and the
//! insertion set.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::degeneration_combinatorics::RigidComplexRecord;
use crate::error::{Error, Result};
use crate::partition_algebra::{PairingTable, Partition};
use crate::series_engine::{QSeries, SeriesRepr, Var};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Theory {
    Dt,
    Pt,
    Gw,
}

impl Theory {
    pub fn variable(self) -> Var {
        match self {
            Theory::Dt | Theory::Pt => Var::Q,
            Theory::Gw => Var::U,
        }
    }
}

/// Which gluing partitions of an edge label enter the sum.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Gluing {
    /// Every partition of the edge label.
    #[default]
    All,
    /// Only the one-part partition (maximal tangency).
    Maximal,
}

/// A primary or descendent insertion: τ_level(class).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct InsertionLabel {
    pub id: String,
    #[serde(default)]
    pub level: u32,
    pub class: String,
}

/// The boundary condition a vertex sees along one incident edge.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct BoundaryCondition {
    pub edge: String,
    pub partition: Partition,
    pub label: String,
}

/// Lookup key of a vertex series; boundary and insertions are kept sorted.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TableKey {
    pub vertex: String,
    #[serde(default)]
    pub boundary: Vec<BoundaryCondition>,
    #[serde(default)]
    pub insertions: Vec<String>,
}

impl TableKey {
    pub fn new(vertex: &str, mut boundary: Vec<BoundaryCondition>, mut insertions: Vec<String>) -> Self {
        boundary.sort();
        insertions.sort();
        TableKey {
            vertex: vertex.to_string(),
            boundary,
            insertions,
        }
    }

    fn normalized(self) -> Self {
        TableKey::new(&self.vertex, self.boundary, self.insertions)
    }
}

impl fmt::Display for TableKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b: Vec<String> = self.boundary.iter().map(|c| format!("{}:{}[{}]", c.edge, c.partition, c.label)).collect();
        write!(f, "vertex {} | boundary {{{}}} | insertions {{{}}}", self.vertex, b.join(", "), self.insertions.join(", "))
    }
}

/// File form of one table entry.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableEntry {
    #[serde(flatten)]
    pub key: TableKey,
    pub series: SeriesRepr,
}

/// Vertex series by key; lookups of absent keys are errors.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<TableEntry>", into = "Vec<TableEntry>")]
pub struct VertexTable {
    entries: BTreeMap<TableKey, QSeries>,
}

impl VertexTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, key: TableKey, series: QSeries) {
        self.entries.insert(key.normalized(), series);
    }

    pub fn get(&self, key: &TableKey) -> Result<&QSeries> {
        self.entries.get(key).ok_or_else(|| Error::MissingEntry(key.to_string()))
    }

    pub fn get_mut(&mut self, key: &TableKey) -> Option<&mut QSeries> {
        self.entries.get_mut(key)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn keys(&self) -> impl Iterator<Item = &TableKey> {
        self.entries.keys()
    }

    /// The same table with every vertex id passed through `rename`.
    pub fn renamed(&self, rename: impl Fn(&str) -> String) -> Self {
        let mut t = VertexTable::new();
        for (k, v) in &self.entries {
            t.insert(TableKey::new(&rename(&k.vertex), k.boundary.clone(), k.insertions.clone()), v.clone());
        }
        t
    }
}

impl TryFrom<Vec<TableEntry>> for VertexTable {
    type Error = Error;

    fn try_from(v: Vec<TableEntry>) -> Result<Self> {
        let mut t = VertexTable::new();
        for e in v {
            let key = e.key.normalized();
            if t.entries.contains_key(&key) {
                return Err(Error::Invalid(format!("duplicate table entry: {key}")));
            }
            t.entries.insert(key, QSeries::from_repr(&e.series)?);
        }
        Ok(t)
    }
}

impl From<VertexTable> for Vec<TableEntry> {
    fn from(t: VertexTable) -> Self {
        t.entries
            .into_iter()
            .map(|(key, s)| TableEntry { key, series: s.to_repr() })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JobEdge {
    pub id: String,
    pub ends: [String; 2],
    pub label: u32,
    /// Künneth rows of the boundary diagonal; the point/unit pair when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pairing: Option<PairingTable>,
}

/// One rigid complex of the sum, as the graph the formula sees.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JobComplex {
    pub id: String,
    pub vertices: Vec<String>,
    #[serde(default)]
    pub edges: Vec<JobEdge>,
    #[serde(default)]
    pub gluing: Gluing,
    /// The underlying record, when known; used only for audit output.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub record: Option<RigidComplexRecord>,
}

impl JobComplex {
    /// The bounded-edge graph of a record, with vertices `{prefix}{i}` and
    /// edges `{prefix}e{i}`.
    pub fn from_record(id: &str, prefix: &str, record: &RigidComplexRecord) -> Self {
        let g = &record.gamma;
        JobComplex {
            id: id.to_string(),
            vertices: (0..g.vertices.len()).map(|i| format!("{prefix}{i}")).collect(),
            edges: g
                .edges
                .iter()
                .enumerate()
                .map(|(i, e)| JobEdge {
                    id: format!("{prefix}e{i}"),
                    ends: [format!("{prefix}{}", e.ends[0]), format!("{prefix}{}", e.ends[1])],
                    label: record.decoration.edge_labels.get(i).copied().unwrap_or(1),
                    pairing: None,
                })
                .collect(),
            gluing: Gluing::All,
            record: Some(record.clone()),
        }
    }

    pub fn pairing(&self, edge: usize) -> PairingTable {
        self.edges[edge].pairing.clone().unwrap_or_default()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GluingJob {
    pub theory: Theory,
    pub complexes: Vec<JobComplex>,
    pub tables: VertexTable,
    #[serde(default)]
    pub insertions: Vec<InsertionLabel>,
    /// Output truncation order (inclusive).
    pub order: i64,
}

impl GluingJob {
    pub fn validate(&self) -> Result<()> {
        let mut ids = BTreeSet::new();
        for i in &self.insertions {
            if !ids.insert(&i.id) {
                return Err(Error::Invalid(format!("insertion id '{}' is repeated", i.id)));
            }
        }
        let mut complex_ids = BTreeSet::new();
        for c in &self.complexes {
            if !complex_ids.insert(&c.id) {
                return Err(Error::Invalid(format!("complex id '{}' is repeated", c.id)));
            }
            let vs: BTreeSet<&String> = c.vertices.iter().collect();
            if vs.len() != c.vertices.len() {
                return Err(Error::Invalid(format!("complex '{}' repeats a vertex id", c.id)));
            }
            if vs.is_empty() {
                return Err(Error::Invalid(format!("complex '{}' has no vertices", c.id)));
            }
            let mut es = BTreeSet::new();
            for e in &c.edges {
                if !es.insert(&e.id) {
                    return Err(Error::Invalid(format!("complex '{}' repeats edge id '{}'", c.id, e.id)));
                }
                if e.label == 0 {
                    return Err(Error::Invalid(format!("edge '{}' has label 0", e.id)));
                }
                if e.ends.iter().any(|v| !vs.contains(v)) {
                    return Err(Error::UnknownId(format!("endpoint of edge '{}'", e.id)));
                }
                if e.ends[0] == e.ends[1] {
                    return Err(Error::Unsupported(format!("edge '{}' is a loop", e.id)));
                }
                if let Some(p) = &e.pairing {
                    p.validate()?;
                    if p.rows.iter().any(|r| r.left.contains('⊗') || r.right.contains('⊗')) {
                        return Err(Error::Invalid("pairing labels may not contain '⊗'".into()));
                    }
                }
            }
        }
        Ok(())
    }
}
