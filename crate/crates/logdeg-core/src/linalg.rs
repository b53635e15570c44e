//! Exact linear algebra over Q and Z: row reduction, kernels, Smith and Hermite forms.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::{zq, Q, Z};

pub type QMat = Vec<Vec<Q>>;
pub type ZMat = Vec<Vec<Z>>;

pub fn to_qmat(m: &[Vec<Z>]) -> QMat {
    m.iter().map(|r| r.iter().map(zq).collect()).collect()
}

pub fn transpose<T: Clone>(m: &[Vec<T>], cols: usize) -> Vec<Vec<T>> {
    (0..cols).map(|j| m.iter().map(|r| r[j].clone()).collect()).collect()
}

pub fn identity_z(n: usize) -> ZMat {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Z::one() } else { Z::zero() }).collect())
        .collect()
}

pub fn mat_vec_z(m: &[Vec<Z>], v: &[Z]) -> Vec<Z> {
    m.iter()
        .map(|r| r.iter().zip(v).fold(Z::zero(), |s, (a, b)| s + a * b))
        .collect()
}

pub fn mat_vec_q(m: &[Vec<Q>], v: &[Q]) -> Vec<Q> {
    m.iter()
        .map(|r| r.iter().zip(v).fold(Q::zero(), |s, (a, b)| s + a * b))
        .collect()
}

/// Applies an integer matrix to a rational vector.
pub fn mat_z_vec_q(m: &[Vec<Z>], v: &[Q]) -> Vec<Q> {
    m.iter()
        .map(|r| r.iter().zip(v).fold(Q::zero(), |s, (a, b)| s + zq(a) * b))
        .collect()
}

pub fn mat_mul_z(a: &[Vec<Z>], b: &[Vec<Z>], bcols: usize) -> ZMat {
    a.iter()
        .map(|r| {
            (0..bcols)
                .map(|j| r.iter().zip(b).fold(Z::zero(), |s, (x, row)| s + x * &row[j]))
                .collect()
        })
        .collect()
}

pub fn mat_mul_q(a: &[Vec<Q>], b: &[Vec<Q>], bcols: usize) -> QMat {
    a.iter()
        .map(|r| {
            let mut out = vec![Q::zero(); bcols];
            for (x, row) in r.iter().zip(b) {
                if x.is_zero() {
                    continue;
                }
                for (o, y) in out.iter_mut().zip(row) {
                    if !y.is_zero() {
                        *o += x * y;
                    }
                }
            }
            out
        })
        .collect()
}

/// Reduced row echelon form in place; returns pivot columns.
pub fn rref(m: &mut QMat, cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r >= m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = Q::one() / &m[r][c];
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let d = &f * &m[r][j];
                    m[i][j] -= d;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank_q(m: &[Vec<Q>], cols: usize) -> usize {
    let mut a = m.to_vec();
    rref(&mut a, cols).len()
}

pub fn rank_z(m: &[Vec<Z>], cols: usize) -> usize {
    rank_q(&to_qmat(m), cols)
}

/// Basis of the rational nullspace {x : m x = 0}.
pub fn nullspace_q(m: &[Vec<Q>], cols: usize) -> Vec<Vec<Q>> {
    let mut a = m.to_vec();
    let piv = rref(&mut a, cols);
    let free: Vec<usize> = (0..cols).filter(|c| !piv.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Q::zero(); cols];
            v[f] = Q::one();
            for (i, &p) in piv.iter().enumerate() {
                v[p] = -a[i][f].clone();
            }
            v
        })
        .collect()
}

/// Some solution of m x = b, if one exists.
pub fn solve_q(m: &[Vec<Q>], b: &[Q], cols: usize) -> Option<Vec<Q>> {
    let mut a: QMat = m
        .iter()
        .zip(b)
        .map(|(r, bi)| {
            let mut row = r.clone();
            row.push(bi.clone());
            row
        })
        .collect();
    let piv = rref(&mut a, cols + 1);
    if piv.contains(&cols) {
        return None;
    }
    let mut x = vec![Q::zero(); cols];
    for (i, &p) in piv.iter().enumerate() {
        x[p] = a[i][cols].clone();
    }
    Some(x)
}

pub fn inverse_q(m: &[Vec<Q>]) -> Option<QMat> {
    let n = m.len();
    let mut a: QMat = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
            row
        })
        .collect();
    let piv = rref(&mut a, 2 * n);
    if piv.len() < n || piv[n - 1] != n - 1 {
        return None;
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn det_z(m: &[Vec<Z>]) -> Z {
    let n = m.len();
    let mut a = to_qmat(m);
    let mut det = Q::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Z::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= &a[c][c];
        for i in c + 1..n {
            if !a[i][c].is_zero() {
                let f = &a[i][c] / &a[c][c];
                for j in c..n {
                    let d = &f * &a[c][j];
                    a[i][j] -= d;
                }
            }
        }
    }
    det.to_integer()
}

/// Smith normal form: returns (U, D, V) with U·A·V = D, U and V unimodular,
/// D diagonal with d₁ | d₂ | … and nonnegative entries.
pub struct Smith {
    pub u: ZMat,
    pub d: ZMat,
    pub v: ZMat,
    pub rank: usize,
}

impl Smith {
    pub fn diagonal(&self) -> Vec<Z> {
        (0..self.rank).map(|i| self.d[i][i].clone()).collect()
    }
}

pub fn smith(a: &[Vec<Z>], cols: usize) -> Smith {
    let m = a.len();
    let n = cols;
    let mut d: ZMat = a.to_vec();
    let mut u = identity_z(m);
    let mut v = identity_z(n);
    let mut t = 0;
    while t < m.min(n) {
        // smallest nonzero entry of the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                if !d[i][j].is_zero()
                    && best.map_or(true, |(bi, bj)| d[i][j].abs() < d[bi][bj].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        d.swap(t, pi);
        u.swap(t, pi);
        for row in d.iter_mut() {
            row.swap(t, pj);
        }
        for row in v.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut dirty = false;
            for i in t + 1..m {
                if !d[i][t].is_zero() {
                    let qt = d[i][t].div_floor(&d[t][t]);
                    for j in 0..n {
                        let x = &qt * &d[t][j];
                        d[i][j] -= x;
                    }
                    for j in 0..m {
                        let x = &qt * &u[t][j];
                        u[i][j] -= x;
                    }
                    if !d[i][t].is_zero() {
                        dirty = true;
                    }
                }
            }
            for j in t + 1..n {
                if !d[t][j].is_zero() {
                    let qt = d[t][j].div_floor(&d[t][t]);
                    for i in 0..m {
                        let x = &qt * &d[i][t];
                        d[i][j] -= x;
                    }
                    for i in 0..n {
                        let x = &qt * &v[i][t];
                        v[i][j] -= x;
                    }
                    if !d[t][j].is_zero() {
                        dirty = true;
                    }
                }
            }
            if dirty {
                // bring the smallest nonzero of row/column t to the pivot
                let mut best = (t, t);
                for i in t..m {
                    if !d[i][t].is_zero() && d[i][t].abs() < d[best.0][best.1].abs() {
                        best = (i, t);
                    }
                }
                for j in t..n {
                    if !d[t][j].is_zero() && d[t][j].abs() < d[best.0][best.1].abs() {
                        best = (t, j);
                    }
                }
                if best.0 != t {
                    d.swap(t, best.0);
                    u.swap(t, best.0);
                } else if best.1 != t {
                    for row in d.iter_mut() {
                        row.swap(t, best.1);
                    }
                    for row in v.iter_mut() {
                        row.swap(t, best.1);
                    }
                }
                continue;
            }
            // divisibility of the trailing block
            let mut fix = None;
            'outer: for i in t + 1..m {
                for j in t + 1..n {
                    if !d[i][j].is_multiple_of(&d[t][t]) {
                        fix = Some(i);
                        break 'outer;
                    }
                }
            }
            match fix {
                Some(i) => {
                    for j in 0..n {
                        let x = d[i][j].clone();
                        d[t][j] += x;
                    }
                    for j in 0..m {
                        let x = u[i][j].clone();
                        u[t][j] += x;
                    }
                }
                None => break,
            }
        }
        if d[t][t].is_negative() {
            for j in 0..n {
                d[t][j] = -d[t][j].clone();
            }
            for j in 0..m {
                u[t][j] = -u[t][j].clone();
            }
        }
        t += 1;
    }
    Smith { u, d, v, rank: t }
}

/// Integer basis of the saturated lattice {x ∈ Zⁿ : a x = 0}.
pub fn integer_kernel(a: &[Vec<Z>], cols: usize) -> ZMat {
    if a.is_empty() {
        return identity_z(cols);
    }
    let s = smith(a, cols);
    (s.rank..cols)
        .map(|j| (0..cols).map(|i| s.v[i][j].clone()).collect())
        .collect()
}

/// Row-style Hermite normal form of a lattice basis (rows), zero rows dropped.
pub fn hermite(rows: &[Vec<Z>], cols: usize) -> ZMat {
    let mut a: ZMat = rows.to_vec();
    let mut r = 0;
    for c in 0..cols {
        if r >= a.len() {
            break;
        }
        loop {
            let nz: Vec<usize> = (r..a.len()).filter(|&i| !a[i][c].is_zero()).collect();
            if nz.is_empty() {
                break;
            }
            let p = *nz.iter().min_by_key(|&&i| a[i][c].abs()).unwrap();
            a.swap(r, p);
            let mut done = true;
            for i in r + 1..a.len() {
                if !a[i][c].is_zero() {
                    let qt = a[i][c].div_floor(&a[r][c]);
                    for j in 0..cols {
                        let x = &qt * &a[r][j];
                        a[i][j] -= x;
                    }
                    if !a[i][c].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if r < a.len() && !a[r][c].is_zero() {
            if a[r][c].is_negative() {
                for j in 0..cols {
                    a[r][j] = -a[r][j].clone();
                }
            }
            for i in 0..r {
                let qt = a[i][c].div_floor(&a[r][c]);
                if !qt.is_zero() {
                    for j in 0..cols {
                        let x = &qt * &a[r][j];
                        a[i][j] -= x;
                    }
                }
            }
            r += 1;
        }
    }
    a.truncate(r);
    a.retain(|row| row.iter().any(|x| !x.is_zero()));
    a
}

/// Canonical projection Zⁿ → Z^{n−r} whose kernel is the saturated span of `span`.
/// Rows form the Hermite basis of the annihilator lattice, so the map is surjective.
pub fn quotient_projection(span: &[Vec<Z>], n: usize) -> ZMat {
    let k = integer_kernel(span, n);
    hermite(&k, n)
}

/// Basis of the saturation (span_Q ∩ Zⁿ) of the lattice generated by `rows`.
pub fn saturation(rows: &[Vec<Z>], n: usize) -> ZMat {
    if rows.is_empty() {
        return vec![];
    }
    let s = smith(rows, n);
    let vinv = inverse_q(&to_qmat(&s.v)).expect("unimodular");
    let basis: ZMat = (0..s.rank)
        .map(|i| vinv[i].iter().map(|x| x.to_integer()).collect())
        .collect();
    hermite(&basis, n)
}

/// Index of the sublattice generated by `sub` inside the lattice generated by `sup`
/// (both given by generators, `sub` ⊆ `sup` assumed, equal ranks). None if ranks differ.
pub fn lattice_index(sub: &[Vec<Z>], sup: &[Vec<Z>], n: usize) -> Option<Z> {
    let hs = hermite(sub, n);
    let hp = hermite(sup, n);
    if hs.len() != hp.len() {
        return None;
    }
    if hp.is_empty() {
        return Some(Z::one());
    }
    // express sub basis in sup coordinates, then |det|
    let r = hp.len();
    let tp = transpose(&to_qmat(&hp), n);
    let mut coords = Vec::new();
    for row in &hs {
        let x = solve_q(&tp, &row.iter().map(zq).collect::<Vec<_>>(), r)?;
        if x.iter().any(|c| !c.is_integer()) {
            return None;
        }
        coords.push(x.iter().map(|c| c.to_integer()).collect::<Vec<Z>>());
    }
    Some(det_z(&coords).abs())
}

pub fn gcd_all(v: &[Z]) -> Z {
    v.iter().fold(Z::zero(), |g, x| g.gcd(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::zvec;

    fn zm(rows: &[&[i64]]) -> ZMat {
        rows.iter().map(|r| zvec(r)).collect()
    }

    #[test]
    fn smith_is_a_factorisation() {
        let a = zm(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
        let s = smith(&a, 3);
        let uav = mat_mul_z(&mat_mul_z(&s.u, &a, 3), &s.v, 3);
        assert_eq!(uav, s.d);
        assert_eq!(s.diagonal(), zvec(&[2, 6, 12]));
        assert_eq!(det_z(&s.u).abs(), Z::one());
        assert_eq!(det_z(&s.v).abs(), Z::one());
    }

    #[test]
    fn projection_kills_the_span() {
        let p = quotient_projection(&zm(&[&[1, 0]]), 2);
        assert_eq!(p, zm(&[&[0, 1]]));
        let p = quotient_projection(&zm(&[&[1, 1, 0]]), 3);
        assert_eq!(p.len(), 2);
        for row in &p {
            assert_eq!(&row[0] + &row[1], Z::zero());
        }
    }

    #[test]
    fn saturation_and_index() {
        let s = saturation(&zm(&[&[2, 2]]), 2);
        assert_eq!(s, zm(&[&[1, 1]]));
        assert_eq!(lattice_index(&zm(&[&[2, 0], &[0, 3]]), &identity_z(2), 2), Some(z6()));
    }

    fn z6() -> Z {
        Z::from(6)
    }

    #[test]
    fn nullspace_and_solve() {
        let m: QMat = vec![crate::arith::qvec(&[1, 1, 1])];
        let ns = nullspace_q(&m, 3);
        assert_eq!(ns.len(), 2);
        let x = solve_q(&m, &[crate::arith::q(3)], 3).unwrap();
        assert_eq!(&x[0] + &x[1] + &x[2], crate::arith::q(3));
    }
}
