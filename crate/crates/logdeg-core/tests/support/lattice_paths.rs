//! Mikhalkin's lattice-path count of plane curves of degree d through
//! 3d − 1 generic points, as an oracle independent of any tropical
//! enumeration: λ-increasing paths across the Newton triangle weighted by
//! the products of their positive and negative multiplicities.

type Pt = (i64, i64);

fn in_triangle(p: Pt, d: i64) -> bool {
    p.0 >= 0 && p.1 >= 0 && p.0 + p.1 <= d
}

/// λ(x, y) = x − εy with ε small: lexicographic on (x, −y).
fn lambda_less(a: Pt, b: Pt) -> bool {
    (a.0, -a.1) < (b.0, -b.1)
}

fn cross(o: Pt, a: Pt, b: Pt) -> i64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// All λ-increasing lattice paths from (0, d) to (d, 0) with `len` steps.
fn paths(d: i64, len: usize) -> Vec<Vec<Pt>> {
    let mut pts: Vec<Pt> = (0..=d).flat_map(|x| (0..=d - x).map(move |y| (x, y))).collect();
    pts.sort_by_key(|p| (p.0, -p.1));
    let start = (0, d);
    let end = (d, 0);
    let mut out = Vec::new();
    let mut cur = vec![start];
    fn go(pts: &[Pt], end: Pt, len: usize, cur: &mut Vec<Pt>, out: &mut Vec<Vec<Pt>>) {
        let last = *cur.last().unwrap();
        if cur.len() == len + 1 {
            if last == end {
                out.push(cur.clone());
            }
            return;
        }
        for &p in pts {
            if lambda_less(last, p) && (p == end || cur.len() < len) {
                if p == end && cur.len() != len {
                    continue;
                }
                cur.push(p);
                go(pts, end, len, cur, out);
                cur.pop();
            }
        }
    }
    go(&pts, end, len, &mut cur, &mut out);
    out
}

/// The two boundary paths from (0,d) to (d,0): the positive multiplicity
/// terminates at the hypotenuse (clockwise), the negative one at the path
/// along the two legs (counterclockwise).
fn is_legs_path(g: &[Pt], d: i64) -> bool {
    // (0,d) → (0,d-1) → … → (0,0) → (1,0) → … → (d,0)
    let want: Vec<Pt> = (0..=d).rev().map(|y| (0, y)).chain((1..=d).map(|x| (x, 0))).collect();
    g == want.as_slice()
}

fn is_hypotenuse_path(g: &[Pt], d: i64) -> bool {
    // along the hypotenuse (0,d) → (1,d-1) → … → (d,0)
    let want: Vec<Pt> = (0..=d).map(|x| (x, d - x)).collect();
    g == want.as_slice()
}

fn lambda_increasing(g: &[Pt]) -> bool {
    g.windows(2).all(|w| lambda_less(w[0], w[1]))
}

/// μ± of Mikhalkin's recursion: at the first turn of the given handedness,
/// either cut the corner (weight 2·area) or flip it, if the flip stays in Δ
/// and keeps the path λ-increasing.
fn mu(g: &[Pt], d: i64, sign: i64) -> u64 {
    let boundary = if sign > 0 { is_hypotenuse_path(g, d) } else { is_legs_path(g, d) };
    if boundary {
        return 1;
    }
    let turn = (1..g.len() - 1).find(|&j| sign * cross(g[j - 1], g[j], g[j + 1]) > 0);
    let Some(j) = turn else { return 0 };
    let area2 = (cross(g[j - 1], g[j], g[j + 1])).unsigned_abs();
    let mut cut: Vec<Pt> = g.to_vec();
    cut.remove(j);
    let mut total = area2 * mu(&cut, d, sign);
    let flipped = (g[j - 1].0 + g[j + 1].0 - g[j].0, g[j - 1].1 + g[j + 1].1 - g[j].1);
    let mut flip = g.to_vec();
    flip[j] = flipped;
    if in_triangle(flipped, d) && lambda_increasing(&flip) {
        total += mu(&flip, d, sign);
    }
    total
}

pub fn lattice_path_count(d: i64) -> u64 {
    let n = (3 * d - 1) as usize;
    paths(d, n).iter().map(|g| mu(g, d, 1) * mu(g, d, -1)).sum()
}
