//! Exact incidence tests between points, segments and rays in Qⁿ.

use num_traits::{Signed, Zero};

use crate::arith::{add_q, scale_q, sub_q, to_q_vec, Q, Z};
use crate::linalg::{rank_q, solve_q};

/// An open cell p + s·d, 0 < s < len (len = None for a ray).
#[derive(Clone, Debug)]
pub(crate) struct Cell {
    pub start: Vec<Q>,
    pub dir: Vec<Z>,
    pub len: Option<Q>,
}

impl Cell {
    pub fn point_at(&self, s: &Q) -> Vec<Q> {
        add_q(&self.start, &scale_q(&to_q_vec(&self.dir), s))
    }

    pub fn end(&self) -> Option<Vec<Q>> {
        self.len.as_ref().map(|l| self.point_at(l))
    }

    /// Parameter s with x = start + s·dir, if x is on the supporting line.
    pub fn param_of(&self, x: &[Q]) -> Option<Q> {
        line_param(&self.start, &self.dir, x)
    }

    /// Is x in the open cell?
    pub fn interior_contains(&self, x: &[Q]) -> bool {
        match self.param_of(x) {
            Some(s) => s.is_positive() && self.len.as_ref().map_or(true, |l| &s < l),
            None => false,
        }
    }

    /// Is x in the closed cell?
    pub fn closure_contains(&self, x: &[Q]) -> bool {
        match self.param_of(x) {
            Some(s) => !s.is_negative() && self.len.as_ref().map_or(true, |l| &s <= l),
            None => false,
        }
    }
}

pub(crate) fn line_param(p: &[Q], d: &[Z], x: &[Q]) -> Option<Q> {
    let diff = sub_q(x, p);
    let i = d.iter().position(|c| !c.is_zero())?;
    let s = &diff[i] / Q::from_integer(d[i].clone());
    let ok = diff
        .iter()
        .zip(d)
        .all(|(a, b)| *a == &s * Q::from_integer(b.clone()));
    ok.then_some(s)
}

fn parallel(a: &[Z], b: &[Z]) -> bool {
    let m: Vec<Vec<Q>> = vec![to_q_vec(a), to_q_vec(b)];
    rank_q(&m, a.len()) < 2
}

/// The unique intersection point of the supporting lines of two non-parallel
/// cells, as parameters (s, t), if the lines meet.
pub(crate) fn line_meet(a: &Cell, b: &Cell) -> Option<(Q, Q)> {
    if parallel(&a.dir, &b.dir) {
        return None;
    }
    let n = a.start.len();
    let m: Vec<Vec<Q>> = (0..n)
        .map(|k| vec![Q::from_integer(a.dir[k].clone()), -Q::from_integer(b.dir[k].clone())])
        .collect();
    let rhs = sub_q(&b.start, &a.start);
    let x = solve_q(&m, &rhs, 2)?;
    Some((x[0].clone(), x[1].clone()))
}

fn in_open(s: &Q, len: &Option<Q>) -> bool {
    s.is_positive() && len.as_ref().map_or(true, |l| s < l)
}

/// Do the open cells share a point?
pub(crate) fn interiors_meet(a: &Cell, b: &Cell) -> bool {
    if parallel(&a.dir, &b.dir) {
        // collinear overlap along a's parameter line
        let Some(s0) = a.param_of(&b.start) else {
            return false;
        };
        let same = a.dir == b.dir;
        let (lo, hi): (Option<Q>, Option<Q>) = match (&b.len, same) {
            (Some(l), true) => (Some(s0.clone()), Some(&s0 + l)),
            (Some(l), false) => (Some(&s0 - l), Some(s0.clone())),
            (None, true) => (Some(s0.clone()), None),
            (None, false) => (None, Some(s0.clone())),
        };
        // intersect (0, a.len) with (lo, hi)
        let lower = match lo {
            Some(l) if l.is_positive() => l,
            _ => Q::zero(),
        };
        let upper = match (hi, &a.len) {
            (Some(h), Some(l)) => Some(if &h < l { h } else { l.clone() }),
            (Some(h), None) => Some(h),
            (None, Some(l)) => Some(l.clone()),
            (None, None) => None,
        };
        return upper.map_or(true, |u| lower < u);
    }
    match line_meet(a, b) {
        Some((s, t)) => in_open(&s, &a.len) && in_open(&t, &b.len),
        None => false,
    }
}

/// The point where two non-parallel closed cells meet, if any.
pub(crate) fn crossing(a: &Cell, b: &Cell) -> Option<Vec<Q>> {
    let (s, t) = line_meet(a, b)?;
    let ok = |s: &Q, l: &Option<Q>| !s.is_negative() && l.as_ref().map_or(true, |l| s <= l);
    (ok(&s, &a.len) && ok(&t, &b.len)).then(|| a.point_at(&s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{q, qvec, zvec};

    fn seg(p: &[i64], d: &[i64], l: i64) -> Cell {
        Cell {
            start: qvec(p),
            dir: zvec(d),
            len: Some(q(l)),
        }
    }

    #[test]
    fn crossing_segments() {
        let a = seg(&[0, 0], &[1, 1], 2);
        let b = seg(&[0, 2], &[1, -1], 2);
        assert!(interiors_meet(&a, &b));
        assert_eq!(crossing(&a, &b), Some(qvec(&[1, 1])));
    }

    #[test]
    fn touching_endpoints_do_not_meet() {
        let a = seg(&[0, 0], &[1, 0], 1);
        let b = seg(&[1, 0], &[0, 1], 1);
        assert!(!interiors_meet(&a, &b));
        assert_eq!(crossing(&a, &b), Some(qvec(&[1, 0])));
    }

    #[test]
    fn collinear_overlap() {
        let a = seg(&[0, 0], &[1, 0], 2);
        let b = seg(&[3, 0], &[-1, 0], 2);
        assert!(interiors_meet(&a, &b));
        let c = seg(&[2, 0], &[1, 0], 2);
        assert!(!interiors_meet(&a, &c));
        let r = Cell {
            start: qvec(&[5, 0]),
            dir: zvec(&[-1, 0]),
            len: None,
        };
        assert!(interiors_meet(&a, &r));
    }

    #[test]
    fn point_params() {
        let a = seg(&[0, 0], &[1, 2], 3);
        assert_eq!(a.param_of(&qvec(&[2, 4])), Some(q(2)));
        assert!(a.interior_contains(&qvec(&[2, 4])));
        assert!(!a.interior_contains(&qvec(&[3, 6])));
        assert!(a.closure_contains(&qvec(&[3, 6])));
        assert_eq!(a.param_of(&qvec(&[1, 1])), None);
    }
}
