//! Exact linear programming over Q.
//!
//! `maximize` solves max c·x subject to A x ≤ b with free x by running a
//! two-phase simplex (Bland's rule) on the dual standard-form problem
//! min b·w, Aᵀw = c, w ≥ 0. The dual has one row per primal variable, so the
//! tableau stays narrow when there are many constraints and few variables.

use num_traits::{One, Signed, Zero};

use crate::arith::{dot_q, Q};
use crate::linalg::{nullspace_q, solve_q};

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal { value: Q, x: Vec<Q> },
    Infeasible,
    Unbounded,
}

struct Tableau {
    // rows: [coeffs..., rhs]
    rows: Vec<Vec<Q>>,
    basis: Vec<usize>,
    ncols: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let inv = Q::one() / &self.rows[r][c];
        for x in self.rows[r].iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        let prow = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (j, pv) in prow.iter().enumerate() {
                if !pv.is_zero() {
                    row[j] -= &f * pv;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Minimises cost·w over the current basic feasible solution.
    /// `allowed` marks columns that may enter. Returns false if unbounded.
    fn minimize(&mut self, cost: &[Q], allowed: &[bool]) -> bool {
        let m = self.rows.len();
        loop {
            // reduced costs: cost_j - cost_B · column_j
            let mut entering = None;
            for j in 0..self.ncols {
                if !allowed[j] || self.basis.contains(&j) {
                    continue;
                }
                let mut rc = cost[j].clone();
                for i in 0..m {
                    let a = &self.rows[i][j];
                    if !a.is_zero() {
                        rc -= &cost[self.basis[i]] * a;
                    }
                }
                if rc.is_negative() {
                    entering = Some(j);
                    break; // Bland: smallest index
                }
            }
            let Some(c) = entering else { return true };
            let mut leave: Option<(usize, Q)> = None;
            for i in 0..m {
                let a = &self.rows[i][c];
                if a.is_positive() {
                    let ratio = &self.rows[i][self.ncols] / a;
                    let better = match &leave {
                        None => true,
                        Some((li, lr)) => {
                            ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li])
                        }
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            let Some((r, _)) = leave else { return false };
            self.pivot(r, c);
        }
    }
}

/// max c·x subject to A x ≤ b, x ∈ Qⁿ free.
pub fn maximize(c: &[Q], a: &[Vec<Q>], b: &[Q]) -> LpOutcome {
    let n = c.len();
    let m = a.len();
    // dual: variables w (m) ≥ 0, constraints Σ_i a_ij w_i = c_j for each j.
    // rows j, columns: w_0..w_{m-1}, artificials m..m+n-1
    let ncols = m + n;
    let mut flip = vec![false; n];
    let mut rows = Vec::with_capacity(n);
    for j in 0..n {
        let mut row = Vec::with_capacity(ncols + 1);
        let neg = c[j].is_negative();
        flip[j] = neg;
        for i in 0..m {
            row.push(if neg { -a[i][j].clone() } else { a[i][j].clone() });
        }
        for k in 0..n {
            row.push(if k == j { Q::one() } else { Q::zero() });
        }
        row.push(if neg { -c[j].clone() } else { c[j].clone() });
        rows.push(row);
    }
    let mut t = Tableau {
        rows,
        basis: (m..m + n).collect(),
        ncols,
    };
    // phase 1
    let mut cost1 = vec![Q::zero(); ncols];
    for k in m..ncols {
        cost1[k] = Q::one();
    }
    let all = vec![true; ncols];
    t.minimize(&cost1, &all);
    let infeas: Q = (0..n)
        .filter(|&i| t.basis[i] >= m)
        .map(|i| t.rows[i][ncols].clone())
        .fold(Q::zero(), |s, x| s + x);
    if infeas.is_positive() {
        // dual infeasible: primal is unbounded or infeasible
        return classify_dual_infeasible(c, a, b);
    }
    // drive zero-level artificials out of the basis where possible
    for i in 0..n {
        if t.basis[i] >= m {
            if let Some(j) = (0..m).find(|&j| !t.rows[i][j].is_zero() && !t.basis.contains(&j)) {
                t.pivot(i, j);
            }
        }
    }
    let mut cost2 = vec![Q::zero(); ncols];
    for i in 0..m {
        cost2[i] = b[i].clone();
    }
    let mut allowed = vec![true; ncols];
    for k in m..ncols {
        allowed[k] = false;
    }
    if !t.minimize(&cost2, &allowed) {
        return LpOutcome::Infeasible; // dual unbounded ⇒ primal infeasible
    }
    // primal x_j = (cost_B B⁻¹)_j ; B⁻¹ sits in the artificial columns
    let mut x = vec![Q::zero(); n];
    for j in 0..n {
        let mut s = Q::zero();
        for i in 0..n {
            let bi = t.basis[i];
            let cb = if bi < m { b[bi].clone() } else { Q::zero() };
            let inv = &t.rows[i][m + j];
            if !inv.is_zero() {
                s += cb * inv;
            }
        }
        x[j] = if flip[j] { -s } else { s };
    }
    let value = dot_q(c, &x);
    debug_assert!(a.iter().zip(b).all(|(r, bi)| dot_q(r, &x) <= *bi));
    LpOutcome::Optimal { value, x }
}

fn classify_dual_infeasible(c: &[Q], a: &[Vec<Q>], b: &[Q]) -> LpOutcome {
    // decide primal feasibility with a zero objective
    let zero = vec![Q::zero(); c.len()];
    match maximize_feasibility(&zero, a, b) {
        true => LpOutcome::Unbounded,
        false => LpOutcome::Infeasible,
    }
}

fn maximize_feasibility(c: &[Q], a: &[Vec<Q>], b: &[Q]) -> bool {
    // with c = 0 the dual is always feasible (w = 0), so `maximize` cannot recurse here
    matches!(maximize(c, a, b), LpOutcome::Optimal { .. })
}

/// A system of affine constraints on Qⁿ.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Constraints {
    pub n: usize,
    /// a·x = β
    pub eq: Vec<(Vec<Q>, Q)>,
    /// a·x ≥ β
    pub ge: Vec<(Vec<Q>, Q)>,
    /// a·x > β
    pub gt: Vec<(Vec<Q>, Q)>,
}

/// Result of analysing a constraint system.
#[derive(Clone, Debug, PartialEq)]
pub struct Feasibility {
    /// Dimension of the solution set; −1 when empty.
    pub dimension: i64,
    pub witness: Option<Vec<Q>>,
}

impl Constraints {
    pub fn new(n: usize) -> Self {
        Constraints {
            n,
            ..Default::default()
        }
    }

    /// Finds a point satisfying every constraint, strict ones strictly, and the
    /// dimension of the solution set (which is the dimension of the affine hull of
    /// the equalities when strict/ge rows leave a relatively open region).
    pub fn analyse(&self) -> Feasibility {
        let Some((w, d)) = self.witness() else {
            return Feasibility {
                dimension: -1,
                witness: None,
            };
        };
        // the non-strict rows may still cut the dimension down; detect implicit equalities
        let dim = if self.ge.is_empty() {
            d as i64
        } else {
            self.dimension_with_implicit()
        };
        Feasibility {
            dimension: dim,
            witness: Some(w),
        }
    }

    /// A point satisfying all constraints (strict ones strictly) together with the
    /// dimension of the affine hull of the equalities.
    pub fn witness(&self) -> Option<(Vec<Q>, usize)> {
        let n = self.n;
        let em: Vec<Vec<Q>> = self.eq.iter().map(|(r, _)| r.clone()).collect();
        let eb: Vec<Q> = self.eq.iter().map(|(_, b)| b.clone()).collect();
        let x0 = if em.is_empty() {
            vec![Q::zero(); n]
        } else {
            match solve_q(&em, &eb, n) {
                Some(x) => x,
                None => return None,
            }
        };
        let basis = if em.is_empty() {
            (0..n)
                .map(|i| (0..n).map(|j| if i == j { Q::one() } else { Q::zero() }).collect())
                .collect()
        } else {
            nullspace_q(&em, n)
        };
        let d = basis.len();
        // reduced rows: a·(x0 + N y) ⋈ β  ⇔  (aN)·y ⋈ β − a·x0
        let reduce = |(r, beta): &(Vec<Q>, Q)| -> (Vec<Q>, Q) {
            let coeffs: Vec<Q> = basis.iter().map(|v| dot_q(r, v)).collect();
            (coeffs, beta - dot_q(r, &x0))
        };
        let gt: Vec<(Vec<Q>, Q)> = self.gt.iter().map(reduce).collect();
        let ge: Vec<(Vec<Q>, Q)> = self.ge.iter().map(reduce).collect();
        // max s : -(a y) + s ≤ -β (strict rows), -(a y) ≤ -β (ge rows), s ≤ 1
        let mut a = Vec::new();
        let mut b = Vec::new();
        for (r, beta) in &gt {
            let mut row: Vec<Q> = r.iter().map(|x| -x.clone()).collect();
            row.push(Q::one());
            a.push(row);
            b.push(-beta.clone());
        }
        for (r, beta) in &ge {
            let mut row: Vec<Q> = r.iter().map(|x| -x.clone()).collect();
            row.push(Q::zero());
            a.push(row);
            b.push(-beta.clone());
        }
        let mut srow = vec![Q::zero(); d];
        srow.push(Q::one());
        a.push(srow);
        b.push(Q::one());
        let mut c = vec![Q::zero(); d];
        c.push(Q::one());
        let y = match maximize(&c, &a, &b) {
            LpOutcome::Optimal { value, x } => {
                if gt.is_empty() || value.is_positive() {
                    x
                } else {
                    return None;
                }
            }
            _ => return None,
        };
        let mut w = x0.clone();
        for (k, v) in basis.iter().enumerate() {
            for i in 0..n {
                w[i] += &y[k] * &v[i];
            }
        }
        Some((w, d))
    }

    fn dimension_with_implicit(&self) -> i64 {
        // a ge-row is an implicit equality iff the system with that row made strict is empty
        let mut em: Vec<Vec<Q>> = self.eq.iter().map(|(r, _)| r.clone()).collect();
        for idx in 0..self.ge.len() {
            let mut probe = self.clone();
            let row = probe.ge.remove(idx);
            probe.gt.push(row.clone());
            if probe.witness().is_none() {
                em.push(row.0);
            }
        }
        (self.n - crate::linalg::rank_q(&em, self.n)) as i64
    }

    pub fn is_strictly_feasible(&self) -> bool {
        self.witness().is_some()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{q, qf, qvec};

    #[test]
    fn simple_lp() {
        // max x + y, x ≤ 2, y ≤ 3, x + y ≤ 4
        let a = vec![qvec(&[1, 0]), qvec(&[0, 1]), qvec(&[1, 1])];
        let b = qvec(&[2, 3, 4]);
        match maximize(&qvec(&[1, 1]), &a, &b) {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, q(4)),
            o => panic!("{o:?}"),
        }
    }

    #[test]
    fn negative_objective_and_unbounded() {
        let a = vec![qvec(&[-1, 0]), qvec(&[0, -1])];
        let b = qvec(&[0, 0]);
        match maximize(&qvec(&[-1, -2]), &a, &b) {
            LpOutcome::Optimal { value, x } => {
                assert_eq!(value, q(0));
                assert_eq!(x, qvec(&[0, 0]));
            }
            o => panic!("{o:?}"),
        }
        assert_eq!(maximize(&qvec(&[1, 0]), &a, &b), LpOutcome::Unbounded);
    }

    #[test]
    fn infeasible_lp() {
        let a = vec![qvec(&[1]), qvec(&[-1])];
        let b = qvec(&[0, -1]); // x ≤ 0, x ≥ 1
        assert_eq!(maximize(&qvec(&[1]), &a, &b), LpOutcome::Infeasible);
    }

    #[test]
    fn strict_feasibility() {
        let mut c = Constraints::new(2);
        c.gt.push((qvec(&[1, 0]), q(0)));
        c.gt.push((qvec(&[0, 1]), q(0)));
        c.gt.push((qvec(&[-1, -1]), q(-1)));
        let f = c.analyse();
        assert_eq!(f.dimension, 2);
        let w = f.witness.unwrap();
        assert!(w[0] > q(0) && w[1] > q(0) && &w[0] + &w[1] < q(1));
        // x + y = 1 with x, y > 0 and x + y < 1 → empty
        c.eq.push((qvec(&[1, 1]), q(1)));
        assert_eq!(c.analyse().dimension, -1);
    }

    #[test]
    fn implicit_equalities_reduce_dimension() {
        let mut c = Constraints::new(2);
        c.ge.push((qvec(&[1, 0]), q(0)));
        c.ge.push((qvec(&[-1, 0]), q(0)));
        c.gt.push((qvec(&[0, 1]), qf(1, 2)));
        assert_eq!(c.analyse().dimension, 1);
    }
}
