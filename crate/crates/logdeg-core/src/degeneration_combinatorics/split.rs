//! Distributing a total curve class and Euler characteristic (or genus) over
//! the vertices of a rigid 1-complex.

use serde::{Deserialize, Serialize};

use super::degeneration::RigidComplexRecord;
use crate::error::{Error, Result};

/// The second total: Euler characteristic (plain sum over vertices) or genus
/// (vertex genera plus the first Betti number of γ).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SecondTotal {
    Euler(i64),
    Genus(i64),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitTotals {
    pub class: Vec<i64>,
    pub second: SecondTotal,
    /// Inclusive per-vertex bounds on the Euler characteristic or genus; one
    /// pair for every vertex.
    pub bounds: Vec<(i64, i64)>,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DecorationSplit {
    pub vertex_classes: Vec<Vec<i64>>,
    pub vertex_values: Vec<i64>,
}

fn first_betti(gamma: &RigidComplexRecord) -> i64 {
    let g = &gamma.gamma;
    let n = g.vertices.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    let mut components = n as i64;
    for e in &g.edges {
        let (a, b) = (find(&mut parent, e.ends[0]), find(&mut parent, e.ends[1]));
        if a != b {
            parent[a] = b;
            components -= 1;
        }
    }
    g.edges.len() as i64 - n as i64 + components
}

/// Every way of writing `total` as a sum of `parts` nonnegative vectors.
fn class_splits(total: &[i64], parts: usize) -> Vec<Vec<Vec<i64>>> {
    if parts == 0 {
        return if total.iter().all(|&x| x == 0) { vec![vec![]] } else { vec![] };
    }
    if parts == 1 {
        return vec![vec![total.to_vec()]];
    }
    let mut out = Vec::new();
    let mut first = vec![0i64; total.len()];
    loop {
        let rest: Vec<i64> = total.iter().zip(&first).map(|(t, f)| t - f).collect();
        for mut tail in class_splits(&rest, parts - 1) {
            tail.insert(0, first.clone());
            out.push(tail);
        }
        // odometer over the box 0 ≤ first ≤ total
        let mut i = 0;
        loop {
            if i == first.len() {
                return out;
            }
            if first[i] < total[i] {
                first[i] += 1;
                break;
            }
            first[i] = 0;
            i += 1;
        }
    }
}

fn value_splits(total: i64, bounds: &[(i64, i64)]) -> Vec<Vec<i64>> {
    let Some((&(lo, hi), rest)) = bounds.split_first() else {
        return if total == 0 { vec![vec![]] } else { vec![] };
    };
    let rest_lo: i64 = rest.iter().map(|b| b.0).sum();
    let rest_hi: i64 = rest.iter().map(|b| b.1).sum();
    let mut out = Vec::new();
    for x in lo.max(total - rest_hi)..=hi.min(total - rest_lo) {
        for mut tail in value_splits(total - x, rest) {
            tail.insert(0, x);
            out.push(tail);
        }
    }
    out
}

/// All decorations of γ's vertices with the given totals, sorted.
pub fn split_decorations(gamma: &RigidComplexRecord, totals: &SplitTotals) -> Result<Vec<DecorationSplit>> {
    let n = gamma.gamma.vertices.len();
    if totals.class.iter().any(|&x| x < 0) {
        return Err(Error::Invalid("the total class must be effective".into()));
    }
    if totals.bounds.len() != n {
        return Err(Error::Invalid(format!("{} bounds for {n} vertices", totals.bounds.len())));
    }
    if totals.bounds.iter().any(|(lo, hi)| lo > hi) {
        return Err(Error::Invalid("empty per-vertex bound".into()));
    }
    let vertex_total = match totals.second {
        SecondTotal::Euler(chi) => chi,
        SecondTotal::Genus(g) => {
            if totals.bounds.iter().any(|b| b.0 < 0) {
                return Err(Error::Invalid("vertex genera are nonnegative".into()));
            }
            g - first_betti(gamma)
        }
    };
    let lo: i64 = totals.bounds.iter().map(|b| b.0).sum();
    let hi: i64 = totals.bounds.iter().map(|b| b.1).sum();
    if n == 0 || vertex_total < lo || vertex_total > hi {
        return Err(Error::Invalid(format!(
            "vertex total {vertex_total} is outside the range [{lo}, {hi}] allowed by the bounds"
        )));
    }
    let classes = class_splits(&totals.class, n);
    let values = value_splits(vertex_total, &totals.bounds);
    let mut out: Vec<DecorationSplit> = classes
        .iter()
        .flat_map(|c| {
            values.iter().map(move |v| DecorationSplit {
                vertex_classes: c.clone(),
                vertex_values: v.clone(),
            })
        })
        .collect();
    out.sort();
    Ok(out)
}
