//! A concrete model of Γ = ⊕ Γ_μ on the partition-tuple basis.
//!
//! Each factor of size n is realised inside degree-n symmetric functions written in
//! the monomial basis: Γ sends the basis vector 1_μ to p_μ / Aut(μ). The target
//! carries the signed Hall pairing ⟨f, ω g⟩ (so that ⟨p_μ, p_ν⟩ = (−1)^μ z_μ δ_μν)
//! and the source the diagonal pairing 1/Aut(μ). All matrices are computed by
//! direct combinatorial counting (functions, integer matrices, 0–1 matrices), so
//! the orthogonality of Γ is a genuine check rather than an assumption.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_traits::{One, Zero};

use super::{aut_of, m_of, partition_tuples, partitions, sign_of, Partition, PartitionTuple};
use crate::arith::{q, zq, Q};
use crate::linalg::{inverse_q, mat_mul_q, transpose, QMat};

/// Both counts below only depend on the multiset of remaining column sums, so
/// the recursions are memoised on (row index, sorted remainder).
type Memo = HashMap<(usize, Vec<u32>), u64>;

fn sorted(v: &[u32]) -> Vec<u32> {
    let mut k = v.to_vec();
    k.sort_unstable();
    k
}

/// Number of functions f from the parts of μ to the rows of λ with Σ_{f(i)=j} μ_i = λ_j.
/// This is the coefficient of m_λ in p_μ.
fn power_to_monomial(mu: &[u32], lambda: &[u32]) -> u64 {
    fn rec(mu: &[u32], i: usize, rem: &mut Vec<u32>, memo: &mut Memo) -> u64 {
        if i == mu.len() {
            return u64::from(rem.iter().all(|&r| r == 0));
        }
        let key = (i, sorted(rem));
        if let Some(&v) = memo.get(&key) {
            return v;
        }
        let p = mu[i];
        let mut total = 0;
        for j in 0..rem.len() {
            if rem[j] >= p {
                rem[j] -= p;
                total += rec(mu, i + 1, rem, memo);
                rem[j] += p;
            }
        }
        memo.insert(key, total);
        total
    }
    rec(mu, 0, &mut lambda.to_vec(), &mut Memo::new())
}

/// Number of matrices with nonnegative entries ≤ `bound` and given row/column sums.
fn count_matrices(rows: &[u32], cols: &[u32], bound: u32) -> u64 {
    fn fill_row(need: u32, j: usize, cols: &mut Vec<u32>, bound: u32, rows: &[u32], i: usize, memo: &mut Memo) -> u64 {
        if j == cols.len() {
            return if need == 0 { rec(rows, i + 1, cols, bound, memo) } else { 0 };
        }
        let mut total = 0;
        let top = need.min(cols[j]).min(bound);
        for x in 0..=top {
            cols[j] -= x;
            total += fill_row(need - x, j + 1, cols, bound, rows, i, memo);
            cols[j] += x;
        }
        total
    }
    fn rec(rows: &[u32], i: usize, cols: &mut Vec<u32>, bound: u32, memo: &mut Memo) -> u64 {
        if i == rows.len() {
            return u64::from(cols.iter().all(|&c| c == 0));
        }
        let key = (i, sorted(cols));
        if let Some(&v) = memo.get(&key) {
            return v;
        }
        let total = fill_row(rows[i], 0, cols, bound, rows, i, memo);
        memo.insert(key, total);
        total
    }
    rec(rows, 0, &mut cols.to_vec(), bound, &mut Memo::new())
}

fn kron(a: &QMat, b: &QMat) -> QMat {
    let (ar, br) = (a.len(), b.len());
    let (ac, bc) = (a.first().map_or(0, |r| r.len()), b.first().map_or(0, |r| r.len()));
    let mut out = vec![vec![Q::zero(); ac * bc]; ar * br];
    for i in 0..ar {
        for j in 0..ac {
            if a[i][j].is_zero() {
                continue;
            }
            for k in 0..br {
                for l in 0..bc {
                    out[i * br + k][j * bc + l] = &a[i][j] * &b[k][l];
                }
            }
        }
    }
    out
}

fn identity(n: usize) -> QMat {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Q::one() } else { Q::zero() }).collect())
        .collect()
}

#[derive(Clone)]
struct Factor {
    gamma: QMat,
    signed_gram: QMat,
    source_gram: QMat,
}

/// Factors are shared between size vectors, so they are built once per size.
fn factor(n: u32) -> Factor {
    static CACHE: OnceLock<Mutex<HashMap<u32, Factor>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(f) = cache.lock().unwrap().get(&n) {
        return f.clone();
    }
    let f = build_factor(n);
    cache.lock().unwrap().insert(n, f.clone());
    f
}

fn build_factor(n: u32) -> Factor {
    let basis: Vec<Partition> = partitions(n);
    let k = basis.len();
    let to_q = |x: u64| Q::from_integer(x.into());
    // Γ[λ][μ] = coeff of m_λ in p_μ / Aut(μ)
    let mut gamma = vec![vec![Q::zero(); k]; k];
    for (j, mu) in basis.iter().enumerate() {
        let a = zq(&mu.aut());
        for (i, la) in basis.iter().enumerate() {
            gamma[i][j] = to_q(power_to_monomial(mu.parts(), la.parts())) / &a;
        }
    }
    // h_κ = Σ_λ N[κ][λ] m_λ, e_κ = Σ_λ M[κ][λ] m_λ
    let big = n.max(1);
    let nmat: QMat = basis
        .iter()
        .map(|ka| basis.iter().map(|la| to_q(count_matrices(ka.parts(), la.parts(), big))).collect())
        .collect();
    let mmat: QMat = basis
        .iter()
        .map(|ka| basis.iter().map(|la| to_q(count_matrices(ka.parts(), la.parts(), 1))).collect())
        .collect();
    let ninv = inverse_q(&nmat).expect("h→m transition is invertible");
    // Hall Gram in the monomial basis: G = (Nᵀ)⁻¹
    let hall = transpose(&ninv, k);
    // ω(m_λ) coefficients: W = N⁻¹ M
    let w = mat_mul_q(&ninv, &mmat, k);
    // S[λ][ν] = ⟨m_λ, ω m_ν⟩ = (G Wᵀ)[λ][ν]
    let signed_gram = mat_mul_q(&hall, &transpose(&w, k), k);
    let source_gram: QMat = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| if i == j { Q::one() / zq(&basis[i].aut()) } else { Q::zero() })
                .collect()
        })
        .collect();
    Factor {
        gamma,
        signed_gram,
        source_gram,
    }
}

/// Matrices of Γ and the two pairings on the tuple basis of the given sizes.
#[derive(Clone, Debug)]
pub struct GammaModel {
    pub basis: Vec<PartitionTuple>,
    /// Γ: columns indexed by source tuples, rows by the target basis.
    pub gamma: QMat,
    /// Signed Hall pairing on the target.
    pub signed_gram: QMat,
    /// Diagonal 1/Aut(μ) pairing on the source.
    pub source_gram: QMat,
}

impl GammaModel {
    pub fn new(sizes: &[u32]) -> Self {
        let mut gamma = vec![vec![q(1)]];
        let mut sg = vec![vec![q(1)]];
        let mut g = vec![vec![q(1)]];
        for &n in sizes {
            let f = factor(n);
            gamma = kron(&gamma, &f.gamma);
            sg = kron(&sg, &f.signed_gram);
            g = kron(&g, &f.source_gram);
        }
        GammaModel {
            basis: partition_tuples(sizes),
            gamma,
            signed_gram: sg,
            source_gram: g,
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Adjoint of Γ with respect to the two pairings: g⁻¹ Γᵀ S.
    pub fn gamma_tr(&self) -> QMat {
        let k = self.dim();
        let ginv: QMat = (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| if i == j { Q::one() / &self.source_gram[i][i] } else { Q::zero() })
                    .collect()
            })
            .collect();
        let gt = transpose(&self.gamma, k);
        mat_mul_q(&mat_mul_q(&ginv, &gt, k), &self.signed_gram, k)
    }

    /// ⊕ ((−1)^μ / m_μ) Γ^tr.
    pub fn claimed_inverse(&self) -> QMat {
        let mut t = self.gamma_tr();
        for (i, mu) in self.basis.iter().enumerate() {
            let s = q(sign_of(mu) as i64) / zq(&m_of(mu));
            for x in t[i].iter_mut() {
                *x = &*x * &s;
            }
        }
        t
    }

    /// Contracts the diagonal class Σ_μ (−1)^μ/(Aut·m) Γ1_μ ⊗ Γ1_μ·Aut(μ)²
    /// (i.e. Σ c_μ p_μ ⊗ p_μ) against the signed pairing on one side; the result
    /// should be the identity on the target.
    pub fn diagonal_contraction(&self) -> QMat {
        let k = self.dim();
        // P[λ][μ] = coefficient of m_λ in p_μ
        let p: QMat = (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| &self.gamma[i][j] * zq(&aut_of(&self.basis[j])))
                    .collect()
            })
            .collect();
        let c: QMat = (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| {
                        if i == j {
                            super::nakajima::diagonal_coefficient(&self.basis[i])
                        } else {
                            Q::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        // f ↦ Σ_μ c_μ ⟨f, p_μ⟩_s p_μ  has matrix P C Pᵀ S
        let pc = mat_mul_q(&p, &c, k);
        let pcpt = mat_mul_q(&pc, &transpose(&p, k), k);
        mat_mul_q(&pcpt, &self.signed_gram, k)
    }
}

/// Γ^tr Γ = diag((−1)^μ m_μ), and the claimed inverse composes with Γ to the
/// identity on both sides.
pub fn gamma_inverse_check(sizes: &[u32]) -> bool {
    let model = GammaModel::new(sizes);
    let k = model.dim();
    let tr = model.gamma_tr();
    let prod = mat_mul_q(&tr, &model.gamma, k);
    for i in 0..k {
        for j in 0..k {
            let expect = if i == j {
                q(sign_of(&model.basis[i]) as i64) * zq(&m_of(&model.basis[i]))
            } else {
                Q::zero()
            };
            if prod[i][j] != expect {
                return false;
            }
        }
    }
    let inv = model.claimed_inverse();
    let id = identity(k);
    mat_mul_q(&inv, &model.gamma, k) == id && mat_mul_q(&model.gamma, &inv, k) == id
}
