//! The numerical degeneration formula as an exact sum over rigid complexes,
//! gluing partitions, Künneth rows and insertion distributions.

use num_traits::One;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::job::{BoundaryCondition, Gluing, GluingJob, JobComplex, TableKey, Theory};
use crate::arith::{fmt_q, zq, Q, Z};
use crate::error::{Error, Result};
use crate::partition_algebra::{diagonal_decomposition, m_of, PartitionTuple};
use crate::series_engine::QSeries;

/// One summand: a complex, its gluing partitions with Künneth labels, an
/// insertion distribution, the combinatorial coefficient, and the series.
#[derive(Clone, Debug, PartialEq)]
pub struct Term {
    pub complex: String,
    pub partitions: PartitionTuple,
    /// Per edge: (label at the first end, label at the second end).
    pub labels: Vec<(String, String)>,
    /// Insertion ids placed at each vertex.
    pub distribution: Vec<Vec<String>>,
    pub coefficient: Q,
    pub series: QSeries,
}

/// Printable summary of a term.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermReport {
    pub complex: String,
    pub partitions: String,
    pub labels: Vec<String>,
    pub distribution: Vec<Vec<String>>,
    pub coefficient: String,
    pub series: String,
}

impl Term {
    pub fn report(&self) -> TermReport {
        TermReport {
            complex: self.complex.clone(),
            partitions: self.partitions.to_string(),
            labels: self.labels.iter().map(|(l, r)| format!("{l}|{r}")).collect(),
            distribution: self.distribution.clone(),
            coefficient: fmt_q(&self.coefficient),
            series: self.series.to_string(),
        }
    }
}

/// Numerical coefficient (−1)^μ m_μ / Aut(μ) of a gluing partition, obtained
/// from the diagonal class coefficient (−1)^μ / (Aut(μ) m_μ) times m_μ².
fn numerical_coefficient(diagonal: &Q, mu: &PartitionTuple) -> Q {
    let m = zq(&m_of(mu));
    diagonal * &m * &m
}

/// Künneth-decomposed gluing data of one complex: partition tuple, per-edge
/// labels, and coefficient (row coefficient included).
fn gluing_terms(c: &JobComplex) -> Result<Vec<(PartitionTuple, Vec<(String, String)>, Q)>> {
    if c.edges.is_empty() {
        return Ok(vec![(PartitionTuple::new(vec![]), vec![], Q::one())]);
    }
    let sizes: Vec<u32> = c.edges.iter().map(|e| e.label).collect();
    let tables: Vec<_> = (0..c.edges.len()).map(|i| c.pairing(i)).collect();
    let diag = diagonal_decomposition(&sizes, &tables)?;
    let mut out = Vec::new();
    for ((l, r), coeff) in diag.iter() {
        let mu = &l.tuple;
        if c.gluing == Gluing::Maximal && mu.entries.iter().any(|p| p.len() != 1) {
            continue;
        }
        let left: Vec<&str> = l.label.split('⊗').collect();
        let right: Vec<&str> = r.label.split('⊗').collect();
        let labels = left.iter().zip(&right).map(|(a, b)| (a.to_string(), b.to_string())).collect();
        out.push((mu.clone(), labels, numerical_coefficient(coeff, mu)));
    }
    Ok(out)
}

/// All maps from the insertion set to the vertices, as blocks per vertex.
fn distributions(insertions: &[String], vertices: usize) -> Vec<Vec<Vec<String>>> {
    let mut out = vec![vec![Vec::new(); vertices]];
    for s in insertions {
        let mut next = Vec::with_capacity(out.len() * vertices);
        for d in &out {
            for v in 0..vertices {
                let mut e = d.clone();
                e[v].push(s.clone());
                next.push(e);
            }
        }
        out = next;
    }
    out
}

/// Exponent of the theory prefactor: q^{−|μ|} or u^{2ℓ(μ)}.
fn prefactor_exponent(theory: Theory, mu: &PartitionTuple) -> i64 {
    match theory {
        Theory::Dt | Theory::Pt => -(mu.total_size() as i64),
        Theory::Gw => 2 * mu.total_length() as i64,
    }
}

fn complex_terms(job: &GluingJob, c: &JobComplex) -> Result<Vec<Term>> {
    let var = job.theory.variable();
    let ids: Vec<String> = job.insertions.iter().map(|i| i.id.clone()).collect();
    let dists = distributions(&ids, c.vertices.len());
    let mut out = Vec::new();
    for (mu, labels, coefficient) in gluing_terms(c)? {
        let shift = prefactor_exponent(job.theory, &mu);
        for dist in &dists {
            let mut product = QSeries::one(var, i64::MAX / 4);
            for (vi, v) in c.vertices.iter().enumerate() {
                let boundary: Vec<BoundaryCondition> = c
                    .edges
                    .iter()
                    .enumerate()
                    .filter_map(|(ei, e)| {
                        let side = if &e.ends[0] == v {
                            &labels[ei].0
                        } else if &e.ends[1] == v {
                            &labels[ei].1
                        } else {
                            return None;
                        };
                        Some(BoundaryCondition {
                            edge: e.id.clone(),
                            partition: mu.entries[ei].clone(),
                            label: side.clone(),
                        })
                    })
                    .collect();
                let key = TableKey::new(v, boundary, dist[vi].clone());
                let s = job.tables.get(&key)?;
                if s.var() != var {
                    return Err(Error::Invalid(format!("series for {key} is in {}, expected {var}", s.var())));
                }
                product = product.mul(s)?;
            }
            let series = product.shift(shift).scale(&coefficient);
            if series.order() < job.order {
                return Err(Error::Truncation(format!(
                    "complex '{}', partitions {mu}: tables determine the term only through {var}^{}, output needs {var}^{}",
                    c.id,
                    series.order(),
                    job.order
                )));
            }
            out.push(Term {
                complex: c.id.clone(),
                partitions: mu.clone(),
                labels: labels.clone(),
                distribution: dist.clone(),
                coefficient: coefficient.clone(),
                series: series.truncate(job.order),
            });
        }
    }
    Ok(out)
}

/// Every summand of the formula, in a fixed order.
pub fn assemble_terms(job: &GluingJob) -> Result<Vec<Term>> {
    job.validate()?;
    let per: Vec<Vec<Term>> = job.complexes.par_iter().map(|c| complex_terms(job, c)).collect::<Result<_>>()?;
    Ok(per.into_iter().flatten().collect())
}

/// The glued series, truncated to the job's order.
pub fn assemble(job: &GluingJob) -> Result<QSeries> {
    let terms = assemble_terms(job)?;
    let mut total = QSeries::zero(job.theory.variable(), job.order);
    for t in &terms {
        total = total.add(&t.series)?;
    }
    Ok(total)
}

/// First coefficient at which two series disagree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Residual {
    pub exponent: i64,
    pub left: String,
    pub right: String,
    pub difference: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConsistencyReport {
    pub consistent: bool,
    /// Common truncation order of the comparison.
    pub order: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residual: Option<Residual>,
}

/// Termwise comparison of two series through their common order.
pub fn compare_series(a: &QSeries, b: &QSeries) -> Result<ConsistencyReport> {
    if a.var() != b.var() {
        return Err(Error::Invalid(format!("series in {} and {}", a.var(), b.var())));
    }
    let order = a.order().min(b.order());
    let lo = a.min_exp().min(b.min_exp()).min(order + 1);
    let residual = (lo..=order).find_map(|e| {
        let (x, y) = (a.coeff(e), b.coeff(e));
        (x != y).then(|| Residual {
            exponent: e,
            difference: fmt_q(&(&x - &y)),
            left: fmt_q(&x),
            right: fmt_q(&y),
        })
    });
    Ok(ConsistencyReport {
        consistent: residual.is_none(),
        order,
        residual,
    })
}

/// Do two jobs assemble to the same series?
pub fn consistency_check(a: &GluingJob, b: &GluingJob) -> Result<ConsistencyReport> {
    compare_series(&assemble(a)?, &assemble(b)?)
}

/// Audit data of one complex: the product of edge labels and the least
/// common multiple of the dilations making every vertex integral.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleFactors {
    pub complex: String,
    pub edge_label_product: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dilation_lcm: Option<String>,
}

pub fn cycle_factors(job: &GluingJob) -> Vec<CycleFactors> {
    job.complexes
        .iter()
        .map(|c| {
            let product = c.edges.iter().fold(Z::one(), |a, e| a * Z::from(e.label));
            let lcm = c.record.as_ref().map(|r| {
                r.gamma
                    .vertices
                    .iter()
                    .flat_map(|v| v.position.iter())
                    .fold(Z::one(), |a, x| num_integer::Integer::lcm(&a, x.denom()))
            });
            CycleFactors {
                complex: c.id.clone(),
                edge_label_product: product.to_string(),
                dilation_lcm: lcm.map(|l| l.to_string()),
            }
        })
        .collect()
}
