//! Partitions, partition tuples and the Nakajima-basis coefficient algebra.

mod nakajima;
mod symfun;

pub use nakajima::{
    diagonal_coefficient, diagonal_decomposition, FormalVector, PairingRow, PairingTable, WeightedPartitionTuple,
};
pub use symfun::{gamma_inverse_check, GammaModel};

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{factorial, Z};
use crate::error::{invalid, Result};

/// A partition: weakly decreasing positive parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        if parts.iter().any(|&p| p == 0) {
            return invalid("partition parts must be positive");
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Partition { parts })
    }

    pub fn empty() -> Self {
        Partition { parts: vec![] }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn size(&self) -> u32 {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Product of the parts.
    pub fn m(&self) -> Z {
        self.parts.iter().fold(Z::from(1), |a, &p| a * Z::from(p))
    }

    /// (−1)^{n − ℓ}
    pub fn sign(&self) -> i32 {
        if (self.size() as usize - self.len()) % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Order of the group of permutations of the parts preserving them.
    pub fn aut(&self) -> Z {
        let mut out = Z::from(1);
        let mut i = 0;
        while i < self.parts.len() {
            let mut j = i;
            while j < self.parts.len() && self.parts[j] == self.parts[i] {
                j += 1;
            }
            out *= factorial((j - i) as u64);
            i = j;
        }
        out
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// All partitions of n, largest first part first.
pub fn partitions(n: u32) -> Vec<Partition> {
    fn rec(n: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if n == 0 {
            out.push(Partition { parts: cur.clone() });
            return;
        }
        for p in (1..=max.min(n)).rev() {
            cur.push(p);
            rec(n - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// An r-tuple of partitions.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PartitionTuple {
    pub entries: Vec<Partition>,
}

impl PartitionTuple {
    pub fn new(entries: Vec<Partition>) -> Self {
        PartitionTuple { entries }
    }

    pub fn single(p: Partition) -> Self {
        PartitionTuple { entries: vec![p] }
    }

    pub fn sizes(&self) -> Vec<u32> {
        self.entries.iter().map(|p| p.size()).collect()
    }

    pub fn total_size(&self) -> u32 {
        self.entries.iter().map(|p| p.size()).sum()
    }

    pub fn total_length(&self) -> usize {
        self.entries.iter().map(|p| p.len()).sum()
    }

    pub fn concat(&self, other: &PartitionTuple) -> PartitionTuple {
        let mut e = self.entries.clone();
        e.extend(other.entries.iter().cloned());
        PartitionTuple { entries: e }
    }
}

impl fmt::Display for PartitionTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.len() == 1 {
            return write!(f, "{}", self.entries[0]);
        }
        write!(f, "(")?;
        for (i, p) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// m_μ: product of all parts across all entries.
pub fn m_of(mu: &PartitionTuple) -> Z {
    mu.entries.iter().fold(Z::from(1), |a, p| a * p.m())
}

/// (−1)^μ = ∏ (−1)^{n_i − ℓ(μ_i)}.
pub fn sign_of(mu: &PartitionTuple) -> i32 {
    mu.entries.iter().map(|p| p.sign()).product()
}

/// Aut(μ) = ∏ Aut(μ_i).
pub fn aut_of(mu: &PartitionTuple) -> Z {
    mu.entries.iter().fold(Z::from(1), |a, p| a * p.aut())
}

/// All partition tuples with the given sizes, in lexicographic order of the factors.
pub fn partition_tuples(sizes: &[u32]) -> Vec<PartitionTuple> {
    let mut out = vec![PartitionTuple::new(vec![])];
    for &n in sizes {
        let ps = partitions(n);
        let mut next = Vec::with_capacity(out.len() * ps.len());
        for t in &out {
            for p in &ps {
                let mut e = t.entries.clone();
                e.push(p.clone());
                next.push(PartitionTuple::new(e));
            }
        }
        out = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(v: &[&[u32]]) -> PartitionTuple {
        PartitionTuple::new(v.iter().map(|p| Partition::new(p.to_vec()).unwrap()).collect())
    }

    #[test]
    fn m_examples() {
        assert_eq!(m_of(&pt(&[&[3, 1]])), Z::from(3));
        assert_eq!(m_of(&pt(&[&[2, 2], &[1]])), Z::from(4));
        assert_eq!(m_of(&pt(&[&[], &[]])), Z::from(1));
    }

    #[test]
    fn sign_examples() {
        assert_eq!(sign_of(&pt(&[&[2, 2]])), 1);
        assert_eq!(sign_of(&pt(&[&[2]])), -1);
        assert_eq!(sign_of(&pt(&[&[1, 1, 1], &[1]])), 1);
    }

    #[test]
    fn aut_examples() {
        assert_eq!(aut_of(&pt(&[&[2, 2, 1]])), Z::from(2));
        assert_eq!(aut_of(&pt(&[&[3, 2, 1]])), Z::from(1));
        assert_eq!(aut_of(&pt(&[&[1, 1, 1], &[2, 2]])), Z::from(12));
    }

    #[test]
    fn partition_counts() {
        let p: Vec<usize> = (0..10).map(|n| partitions(n).len()).collect();
        assert_eq!(p, vec![1, 1, 2, 3, 5, 7, 11, 15, 22, 30]);
        assert_eq!(partition_tuples(&[2, 3]).len(), 6);
    }

    #[test]
    fn rejects_zero_parts() {
        assert!(Partition::new(vec![2, 0]).is_err());
    }
}
