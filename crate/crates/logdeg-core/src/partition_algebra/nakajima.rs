//! Class-labelled partition tuples, formal vectors over them, and the diagonal
//! decomposition Σ_μ (−1)^μ/(Aut(μ)·m_μ) Σ_j μ(δ_L^j) ⊗ μ(δ_R^j).

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{aut_of, m_of, partition_tuples, sign_of, PartitionTuple};
use crate::arith::{q, serde_q, zq, Q};
use crate::error::{Error, Result};

/// A partition tuple decorated by an opaque cohomology label.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct WeightedPartitionTuple {
    pub tuple: PartitionTuple,
    pub label: String,
}

impl fmt::Display for WeightedPartitionTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.tuple, self.label)
    }
}

/// One Künneth term δ_L ⊗ δ_R with a rational coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairingRow {
    pub left: String,
    pub right: String,
    #[serde(with = "serde_q")]
    pub coefficient: Q,
}

/// Künneth decomposition of the diagonal of one boundary divisor, as rows over a
/// declared finite label set. An empty label set means "labels are not checked".
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairingTable {
    #[serde(default)]
    pub labels: Vec<String>,
    pub rows: Vec<PairingRow>,
}

impl Default for PairingTable {
    /// A single point/unit dual pair.
    fn default() -> Self {
        PairingTable {
            labels: vec!["unit".into(), "point".into()],
            rows: vec![PairingRow {
                left: "point".into(),
                right: "unit".into(),
                coefficient: Q::one(),
            }],
        }
    }
}

impl PairingTable {
    pub fn validate(&self) -> Result<()> {
        if self.rows.is_empty() {
            return Err(Error::Invalid("pairing table has no rows".into()));
        }
        if self.labels.is_empty() {
            return Ok(());
        }
        for r in &self.rows {
            for l in [&r.left, &r.right] {
                if !self.labels.contains(l) {
                    return Err(Error::UnknownId(format!("pairing label '{l}'")));
                }
            }
        }
        Ok(())
    }
}

/// Finite linear combination of basis symbols with exact rational coefficients;
/// zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalVector<B: Ord> {
    terms: BTreeMap<B, Q>,
}

impl<B: Ord> Default for FormalVector<B> {
    fn default() -> Self {
        FormalVector {
            terms: BTreeMap::new(),
        }
    }
}

impl<B: Ord + Clone> FormalVector<B> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_term(&mut self, basis: B, coefficient: Q) {
        let entry = self.terms.entry(basis.clone()).or_insert_with(Q::zero);
        *entry += coefficient;
        if entry.is_zero() {
            self.terms.remove(&basis);
        }
    }

    pub fn coefficient(&self, basis: &B) -> Q {
        self.terms.get(basis).cloned().unwrap_or_else(Q::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&B, &Q)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Combined Künneth rows for an r-factor tuple: one row choice per factor, labels
/// joined by '⊗' and coefficients multiplied.
pub(crate) fn tuple_rows(tables: &[PairingTable], r: usize) -> Result<Vec<(String, String, Q)>> {
    let table_for = |i: usize| -> Result<&PairingTable> {
        match tables.len() {
            0 => Err(Error::Invalid("no pairing table supplied".into())),
            1 => Ok(&tables[0]),
            k if k == r => Ok(&tables[i]),
            k => Err(Error::Invalid(format!(
                "{k} pairing tables for a tuple with {r} factors"
            ))),
        }
    };
    let mut out = vec![(String::new(), String::new(), q(1))];
    for i in 0..r {
        let t = table_for(i)?;
        t.validate()?;
        let mut next = Vec::new();
        for (l, rr, c) in &out {
            for row in &t.rows {
                let join = |a: &str, b: &str| {
                    if a.is_empty() {
                        b.to_string()
                    } else {
                        format!("{a}⊗{b}")
                    }
                };
                next.push((
                    join(l, &row.left),
                    join(rr, &row.right),
                    c * &row.coefficient,
                ));
            }
        }
        out = next;
    }
    Ok(out)
}

/// Coefficient (−1)^μ / (Aut(μ)·m_μ) of the diagonal class.
pub fn diagonal_coefficient(mu: &PartitionTuple) -> Q {
    q(sign_of(mu) as i64) / (zq(&aut_of(mu)) * zq(&m_of(mu)))
}

/// The diagonal class over partition tuples of the given sizes as a formal vector
/// of basis pairs. `tables` holds either one table shared by all factors or one per
/// factor.
pub fn diagonal_decomposition(
    sizes: &[u32],
    tables: &[PairingTable],
) -> Result<FormalVector<(WeightedPartitionTuple, WeightedPartitionTuple)>> {
    let rows = tuple_rows(tables, sizes.len())?;
    let mut out = FormalVector::new();
    for mu in partition_tuples(sizes) {
        let c = diagonal_coefficient(&mu);
        for (l, r, k) in &rows {
            out.add_term(
                (
                    WeightedPartitionTuple {
                        tuple: mu.clone(),
                        label: l.clone(),
                    },
                    WeightedPartitionTuple {
                        tuple: mu.clone(),
                        label: r.clone(),
                    },
                ),
                &c * k,
            );
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::qf;
    use crate::partition_algebra::Partition;

    fn wpt(parts: &[&[u32]], label: &str) -> WeightedPartitionTuple {
        WeightedPartitionTuple {
            tuple: PartitionTuple::new(
                parts
                    .iter()
                    .map(|p| Partition::new(p.to_vec()).unwrap())
                    .collect(),
            ),
            label: label.into(),
        }
    }

    #[test]
    fn diagonal_n2() {
        let d = diagonal_decomposition(&[2], &[PairingTable::default()]).unwrap();
        assert_eq!(d.len(), 2);
        assert_eq!(
            d.coefficient(&(wpt(&[&[2]], "point"), wpt(&[&[2]], "unit"))),
            qf(-1, 2)
        );
        assert_eq!(
            d.coefficient(&(wpt(&[&[1, 1]], "point"), wpt(&[&[1, 1]], "unit"))),
            qf(1, 2)
        );
    }

    #[test]
    fn diagonal_n1_and_n11() {
        let d = diagonal_decomposition(&[1], &[PairingTable::default()]).unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(
            d.coefficient(&(wpt(&[&[1]], "point"), wpt(&[&[1]], "unit"))),
            q(1)
        );
        let d = diagonal_decomposition(&[1, 1], &[PairingTable::default()]).unwrap();
        assert_eq!(d.len(), 1);
        let (k, c) = d.iter().next().unwrap();
        assert_eq!(k.0.tuple.entries.len(), 2);
        assert_eq!(c, &q(1));
    }

    #[test]
    fn unknown_label_rejected() {
        let t = PairingTable {
            labels: vec!["unit".into()],
            rows: vec![PairingRow {
                left: "unit".into(),
                right: "mystery".into(),
                coefficient: q(1),
            }],
        };
        assert!(matches!(
            diagonal_decomposition(&[2], &[t]),
            Err(Error::UnknownId(_))
        ));
    }

    #[test]
    fn two_row_table_doubles_symbols() {
        let t = PairingTable {
            labels: vec!["unit".into(), "point".into()],
            rows: vec![
                PairingRow {
                    left: "unit".into(),
                    right: "point".into(),
                    coefficient: q(1),
                },
                PairingRow {
                    left: "point".into(),
                    right: "unit".into(),
                    coefficient: q(1),
                },
            ],
        };
        let d = diagonal_decomposition(&[3], &[t]).unwrap();
        assert_eq!(d.len(), 6);
    }

    #[test]
    fn formal_vector_prunes_zeros() {
        let mut v: FormalVector<u32> = FormalVector::new();
        v.add_term(1, q(2));
        v.add_term(1, q(-2));
        assert!(v.is_empty());
    }
}
