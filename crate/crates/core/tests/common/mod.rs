//! Brute-force oracles and fixtures shared by the integration tests.
//!
//! Everything here works on plain `Vec<Vec<bool>>` copies of a matrix and
//! enumerates every configuration, so it shares no code path with the
//! checkers it is compared against.

#![allow(dead_code)]

use rand::Rng;
use scff_core::{BinaryMatrix, EdgeColouring, Hypergraph};

/// Column sets of a matrix as row-index vectors.
pub fn columns(m: &BinaryMatrix) -> Vec<Vec<bool>> {
    (0..m.cols()).map(|j| (0..m.rows()).map(|i| m.get(i, j)).collect()).collect()
}

fn covered(col: &[bool], others: &[&[bool]]) -> bool {
    col.iter().enumerate().all(|(i, &b)| !b || others.iter().any(|o| o[i]))
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in start..n {
            cur.push(x);
            go(x + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        go(0, n, k, &mut Vec::new(), &mut out);
    }
    out
}

/// Every `d + 1` columns carry a `(d+1) x (d+1)` permutation matrix among
/// their rows: each chosen column has a row where it alone is 1.
pub fn permutation_cff(m: &BinaryMatrix, d: usize) -> bool {
    let cols = columns(m);
    subsets(m.cols(), d + 1)
        .iter()
        .all(|set| set.iter().all(|&c| (0..m.rows()).any(|i| cols[c][i] && set.iter().all(|&o| o == c || !cols[o][i]))))
}

/// No column is covered by the union of `d` others.
pub fn covering_cff(m: &BinaryMatrix, d: usize) -> bool {
    let cols = columns(m);
    (0..m.cols()).all(|i0| {
        let rest: Vec<usize> = (0..m.cols()).filter(|&c| c != i0).collect();
        subsets(rest.len(), d.min(rest.len())).iter().all(|pick| {
            let others: Vec<&[bool]> = pick.iter().map(|&p| cols[rest[p]].as_slice()).collect();
            !covered(&cols[i0], &others)
        })
    })
}

/// Sets of edges of size `1..=r` (or all sizes up to `m` when `r > m`).
fn edge_sets(h: &Hypergraph, r: usize) -> Vec<Vec<usize>> {
    (1..=r.min(h.m())).flat_map(|l| subsets(h.m(), l)).collect()
}

fn union(h: &Hypergraph, set: &[usize]) -> Vec<usize> {
    let mut u: Vec<usize> = set.iter().flat_map(|&e| h.edge(e).iter().copied()).collect();
    u.sort_unstable();
    u.dedup();
    u
}

/// Every `I` inside the union of at most `r` edges and every `i0` outside
/// `I`: column `i0` is not covered by the columns of `I`.
pub fn naive_scff(m: &BinaryMatrix, h: &Hypergraph, r: usize) -> bool {
    let cols = columns(m);
    edge_sets(h, r).iter().all(|set| {
        let u = union(h, set);
        (0..1u64 << u.len()).all(|mask| {
            let i: Vec<usize> = (0..u.len()).filter(|&b| mask >> b & 1 == 1).map(|b| u[b]).collect();
            let others: Vec<&[bool]> = i.iter().map(|&c| cols[c].as_slice()).collect();
            (0..m.cols()).filter(|c| !i.contains(c)).all(|i0| !covered(&cols[i0], &others))
        })
    })
}

/// Every `i0` outside the union `S` of at most `r` edges escapes the columns of `S`.
pub fn naive_ecff(m: &BinaryMatrix, h: &Hypergraph, r: usize) -> bool {
    let cols = columns(m);
    edge_sets(h, r).iter().all(|set| {
        let u = union(h, set);
        let others: Vec<&[bool]> = u.iter().map(|&c| cols[c].as_slice()).collect();
        (0..m.cols()).filter(|c| !u.contains(c)).all(|i0| !covered(&cols[i0], &others))
    })
}

/// Smallest number of edges whose union holds every defective, by trying all
/// edge sets in order of size. `None` when no edge set covers them.
pub fn naive_cover(h: &Hypergraph, defectives: &[usize]) -> Option<usize> {
    if defectives.is_empty() {
        return Some(0);
    }
    (1..=h.m()).find(|&l| {
        subsets(h.m(), l).iter().any(|set| {
            let u = union(h, set);
            defectives.iter().all(|v| u.contains(v))
        })
    })
}

pub fn random_matrix<R: Rng>(rng: &mut R, t: usize, n: usize, p: f64) -> BinaryMatrix {
    let bits: Vec<Vec<bool>> = (0..t).map(|_| (0..n).map(|_| rng.gen_bool(p)).collect()).collect();
    BinaryMatrix::from_fn(t, n, |i, j| bits[i][j]).unwrap()
}

/// `m` distinct nonempty random edges over `n` vertices.
pub fn random_hypergraph<R: Rng>(rng: &mut R, n: usize, m: usize) -> Hypergraph {
    let mut edges: Vec<Vec<usize>> = Vec::with_capacity(m);
    while edges.len() < m {
        let e: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.4)).collect();
        if !e.is_empty() && !edges.contains(&e) {
            edges.push(e);
        }
    }
    Hypergraph::new(n, edges).unwrap()
}

/// Two-period school with 18 students and 12 courses of 3. Courses 1 to 6
/// take consecutive triples; courses 7 to 12 mix them (student 18 takes two
/// afternoon courses and student 11 none).
pub fn two_period_school() -> Hypergraph {
    let one_based: [[usize; 3]; 12] = [
        [1, 2, 3],
        [4, 5, 6],
        [7, 8, 9],
        [10, 11, 12],
        [13, 14, 15],
        [16, 17, 18],
        [1, 2, 4],
        [3, 5, 8],
        [6, 7, 9],
        [10, 12, 18],
        [14, 16, 17],
        [13, 15, 18],
    ];
    let edges = one_based.iter().map(|e| e.iter().map(|v| v - 1).collect()).collect();
    Hypergraph::new(18, edges).unwrap()
}

/// The hand-made strong colouring of [`two_period_school`] into six pairs.
pub fn curated_colouring() -> EdgeColouring {
    let classes = [[1, 4], [2, 5], [3, 6], [7, 10], [8, 11], [9, 12]];
    EdgeColouring::from_classes(12, classes.iter().map(|c| c.iter().map(|e| e - 1).collect()).collect(), true).unwrap()
}
