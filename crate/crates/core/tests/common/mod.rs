//! Naive reference implementations on dense boolean matrices.
#![allow(dead_code)]

use hyperchain::TransitionGraph;

pub type Mat = Vec<Vec<bool>>;

pub fn adjacency(g: &TransitionGraph) -> Mat {
    let n = g.len();
    (0..n).map(|i| (0..n).map(|j| g.has_edge(i, j)).collect()).collect()
}

pub fn identity(n: usize) -> Mat {
    (0..n).map(|i| (0..n).map(|j| i == j).collect()).collect()
}

pub fn mul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).any(|k| a[i][k] && b[k][j])).collect())
        .collect()
}

pub fn or(a: &Mat, b: &Mat) -> Mat {
    a.iter()
        .zip(b)
        .map(|(r, s)| r.iter().zip(s).map(|(x, y)| *x || *y).collect())
        .collect()
}

pub fn is_full(a: &Mat) -> bool {
    a.iter().all(|r| r.iter().all(|&x| x))
}

/// `A, A², …, A^k`.
pub fn powers(a: &Mat, k: usize) -> Vec<Mat> {
    let mut out = Vec::with_capacity(k);
    let mut p = a.clone();
    for _ in 0..k {
        out.push(p.clone());
        p = mul(&p, a);
    }
    out
}

/// Reachability in at least one step.
#[allow(clippy::needless_range_loop)]
pub fn plus_closure(a: &Mat) -> Mat {
    let n = a.len();
    let mut r = a.clone();
    for k in 0..n {
        for i in 0..n {
            if r[i][k] {
                for j in 0..n {
                    if r[k][j] {
                        r[i][j] = true;
                    }
                }
            }
        }
    }
    r
}

pub fn transitive(a: &Mat) -> bool {
    is_full(&plus_closure(a))
}

pub fn recurrent(a: &Mat) -> Vec<bool> {
    let r = plus_closure(a);
    (0..a.len()).map(|i| r[i][i]).collect()
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Gcd of the lengths of closed walks through `v` of length at most `n² + n`.
pub fn period_at(a: &Mat, v: usize) -> usize {
    let n = a.len();
    powers(a, n * n + n)
        .iter()
        .enumerate()
        .filter(|(_, p)| p[v][v])
        .fold(0, |g, (k, _)| gcd(g, k + 1))
}

/// Smallest `m` with `A^m` all true, scanning to `n² − 2n + 2`.
pub fn minimal_mixing(a: &Mat) -> Option<usize> {
    let n = a.len();
    let bound = if n <= 1 { 1 } else { n * n - 2 * n + 2 };
    powers(a, bound).iter().position(is_full).map(|i| i + 1)
}

/// Once `A^m` is all true every vertex has a successor, so all later powers are too.
pub fn mixing(a: &Mat) -> bool {
    minimal_mixing(a).is_some()
}

pub fn tensor_square(a: &Mat) -> Mat {
    let n = a.len();
    let mut t = vec![vec![false; n * n]; n * n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    t[i * n + j][k * n + l] = a[i][k] && a[j][l];
                }
            }
        }
    }
    t
}

/// Smallest `m <= cap` with every vertex reachable from `u` in exactly `m` steps.
pub fn exact_length(a: &Mat, u: &[usize], cap: usize) -> Option<usize> {
    let n = a.len();
    let mut cur: Vec<bool> = (0..n).map(|i| u.contains(&i)).collect();
    for m in 1..=cap {
        cur = (0..n).map(|j| (0..n).any(|i| cur[i] && a[i][j])).collect();
        if cur.iter().all(|&x| x) {
            return Some(m);
        }
    }
    None
}
