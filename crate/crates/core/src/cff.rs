//! Classical d-cover-free families.
//!
//! A `t x n` matrix is a d-CFF when no column is covered by the union of any
//! `d` other columns. The constructions here are used on their own and as
//! ingredients of the structure-aware designs in [`crate::scff`].
//!
//! Column orders are fixed so outputs are reproducible: Sperner columns are
//! subsets in colexicographic order, polynomial columns follow
//! [`gf::enum_polys`], hypercube columns are mixed-radix tuples with the last
//! coordinate fastest.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::binmat::BinaryMatrix;
use crate::error::{Error, Result};
use crate::gf::{self, Field};

/// How a [`CffMatrix`] was obtained.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "construction", rename_all = "snake_case")]
pub enum Provenance {
    RowOnes,
    Identity,
    Sperner {
        t: usize,
        a: usize,
    },
    Polynomial {
        q: u32,
        k: usize,
        blocks: usize,
    },
    Kronecker {
        left: Box<Provenance>,
        right: Box<Provenance>,
    },
    Dsum {
        a1: Box<Provenance>,
        a2: Box<Provenance>,
        b: Box<Provenance>,
    },
    Hypercube {
        dims: Vec<usize>,
    },
    Explicit {
        name: String,
    },
    /// Distinct `a`-subsets of `[t]` searched for a grid of 3x3 blocks.
    GridBlocks {
        t: usize,
        a: usize,
    },
}

impl Provenance {
    pub fn name(&self) -> &'static str {
        match self {
            Provenance::RowOnes => "row_ones",
            Provenance::Identity => "identity",
            Provenance::Sperner { .. } => "sperner",
            Provenance::Polynomial { .. } => "polynomial",
            Provenance::Kronecker { .. } => "kronecker",
            Provenance::Dsum { .. } => "dsum",
            Provenance::Hypercube { .. } => "hypercube",
            Provenance::Explicit { .. } => "explicit",
            Provenance::GridBlocks { .. } => "grid_blocks",
        }
    }
}

/// A test matrix together with the cover-free strength it is claimed to have.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CffMatrix {
    pub matrix: BinaryMatrix,
    pub d: usize,
    pub provenance: Provenance,
}

impl CffMatrix {
    pub fn rows(&self) -> usize {
        self.matrix.rows()
    }

    pub fn cols(&self) -> usize {
        self.matrix.cols()
    }

    /// Keep the first `n` columns; the strength is unchanged.
    pub fn truncate(&self, n: usize) -> Result<CffMatrix> {
        Ok(CffMatrix { matrix: self.matrix.truncate_cols(n)?, d: self.d, provenance: self.provenance.clone() })
    }
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: u128 = 1;
    for i in 0..k {
        r = match r.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    r
}

/// Smallest `t >= 1` with `C(t, floor(t/2)) >= m`.
pub fn sperner_t(m: usize) -> usize {
    let m = m.max(1) as u128;
    (1..).find(|&t| binomial(t, t / 2) >= m).expect("binomials grow without bound")
}

const MAX_SPERNER_T: usize = 127;

/// The first `m` `a`-subsets of `{0..t}` in colexicographic order, as bit masks.
pub fn colex_subsets(t: usize, a: usize, m: usize) -> Result<Vec<u128>> {
    if t > MAX_SPERNER_T {
        return Err(Error::InvalidParameter(format!("ground set size {t} exceeds {MAX_SPERNER_T}")));
    }
    if a == 0 || a > t {
        return Err(Error::InvalidParameter(format!("subset size {a} must lie in 1..={t}")));
    }
    if binomial(t, a) < m as u128 {
        return Err(Error::InvalidParameter(format!("C({t},{a}) = {} < {m}", binomial(t, a))));
    }
    let mut out = Vec::with_capacity(m);
    let mut s: u128 = if a == 128 { u128::MAX } else { (1u128 << a) - 1 };
    while out.len() < m {
        out.push(s);
        if out.len() == m {
            break;
        }
        // Gosper's hack: next larger integer with the same popcount is the colex successor
        let c = s & s.wrapping_neg();
        let r = s + c;
        s = (((r ^ s) >> 2) / c) | r;
    }
    Ok(out)
}

/// `t x m` matrix whose columns are the first `m` `a`-subsets of `[t]` in colex order.
pub fn sperner_cff_param(t: usize, a: usize, m: usize) -> Result<CffMatrix> {
    if m == 0 {
        return Err(Error::InvalidDimension("sperner family with 0 columns".into()));
    }
    let sets = colex_subsets(t, a, m)?;
    let matrix = BinaryMatrix::from_fn(t, m, |i, j| sets[j] >> i & 1 == 1)?;
    Ok(CffMatrix { matrix, d: 1, provenance: Provenance::Sperner { t, a } })
}

/// Optimal 1-CFF on `m` items: all `floor(t/2)`-subsets with `t = sperner_t(m)`.
pub fn sperner_cff(m: usize) -> Result<CffMatrix> {
    let t = sperner_t(m);
    sperner_cff_param(t, (t / 2).max(1), m)
}

/// Rows `(x, y)` for the first `blocks` evaluation points `x`, columns the first
/// `n` polynomials of degree at most `k`; entry 1 iff `f(x) = y`.
fn poly_matrix(f: &Field, k: usize, blocks: usize, n: usize) -> Result<BinaryMatrix> {
    let q = f.order() as usize;
    let mut m = BinaryMatrix::zeros(blocks * q, n)?;
    for j in 0..n {
        let p = gf::poly_at(f, k, j);
        for x in 0..blocks {
            m.set(x * q + p.eval(f, x as u32) as usize, j, true);
        }
    }
    Ok(m)
}

/// The full polynomial d-CFF(q^2, q^(k+1)).
pub fn poly_cff(f: &Field, k: usize, d: usize) -> Result<CffMatrix> {
    let q = f.order() as usize;
    if k == 0 {
        return Err(Error::InvalidParameter("polynomial construction needs k >= 1".into()));
    }
    if d * k > q - 1 {
        return Err(Error::InvalidParameter(format!("d*k = {} exceeds q-1 = {}", d * k, q - 1)));
    }
    let n = gf::poly_count(f.order(), k)?;
    if n > gf::MAX_POLYS {
        return Err(Error::Overflow(format!("{n} columns")));
    }
    Ok(CffMatrix {
        matrix: poly_matrix(f, k, q, n)?,
        d,
        provenance: Provenance::Polynomial { q: f.order(), k, blocks: q },
    })
}

/// The first `d'k + 1` row blocks of the polynomial construction, a
/// d'-CFF((d'k+1)q, q^(k+1)).
pub fn poly_cff_restricted(f: &Field, k: usize, d_prime: usize) -> Result<CffMatrix> {
    let n = gf::poly_count(f.order(), k)?;
    poly_cff_restricted_cols(f, k, d_prime, n)
}

/// As [`poly_cff_restricted`] but materializing only the first `n` columns.
pub fn poly_cff_restricted_cols(f: &Field, k: usize, d_prime: usize, n: usize) -> Result<CffMatrix> {
    let q = f.order() as usize;
    if k == 0 {
        return Err(Error::InvalidParameter("polynomial construction needs k >= 1".into()));
    }
    let blocks = d_prime * k + 1;
    if blocks > q {
        return Err(Error::InvalidParameter(format!("{blocks} row blocks requested but q = {q}")));
    }
    let total = gf::poly_count(f.order(), k)?;
    if n == 0 || n > total || n > gf::MAX_POLYS {
        return Err(Error::InvalidDimension(format!("{n} of {total} polynomial columns")));
    }
    Ok(CffMatrix {
        matrix: poly_matrix(f, k, blocks, n)?,
        d: d_prime,
        provenance: Provenance::Polynomial { q: f.order(), k, blocks },
    })
}

/// Product construction: `a ⊗ b` keeps strength `d`.
pub fn kron_cff(a: &CffMatrix, b: &CffMatrix) -> Result<CffMatrix> {
    if a.d != b.d {
        return Err(Error::InvalidParameter(format!("kronecker of strengths {} and {}", a.d, b.d)));
    }
    Ok(CffMatrix {
        matrix: a.matrix.kronecker(&b.matrix)?,
        d: a.d,
        provenance: Provenance::Kronecker {
            left: Box::new(a.provenance.clone()),
            right: Box::new(b.provenance.clone()),
        },
    })
}

/// d-sum: `b ⊗ a1` stacked over `a2 ⊗ R_{n1}`, a d-CFF(s t1 + t2, n1 n2).
pub fn dsum_cff(a1: &CffMatrix, a2: &CffMatrix, b: &CffMatrix) -> Result<CffMatrix> {
    let d = a1.d;
    if d < 2 || a2.d != d || b.d + 1 != d {
        return Err(Error::InvalidParameter(format!(
            "d-sum needs a1.d = a2.d = d >= 2 and b.d = d-1, got {}, {}, {}",
            a1.d, a2.d, b.d
        )));
    }
    if b.cols() != a2.cols() {
        return Err(Error::DimensionMismatch(format!("b has {} columns but a2 has {}", b.cols(), a2.cols())));
    }
    let top = b.matrix.kronecker(&a1.matrix)?;
    let bottom = a2.matrix.kronecker(&BinaryMatrix::row_ones(a1.cols())?)?;
    Ok(CffMatrix {
        matrix: BinaryMatrix::vstack(&[&top, &bottom])?,
        d,
        provenance: Provenance::Dsum {
            a1: Box::new(a1.provenance.clone()),
            a2: Box::new(a2.provenance.clone()),
            b: Box::new(b.provenance.clone()),
        },
    })
}

/// Column index of the mixed-radix tuple `x` (last coordinate fastest).
pub fn mixed_radix_index(dims: &[usize], x: &[usize]) -> usize {
    x.iter().zip(dims).fold(0, |acc, (&xi, &ni)| acc * ni + xi)
}

/// Inverse of [`mixed_radix_index`].
pub fn mixed_radix_tuple(dims: &[usize], mut idx: usize) -> Vec<usize> {
    let mut x = vec![0; dims.len()];
    for (slot, &n) in x.iter_mut().zip(dims).rev() {
        *slot = idx % n;
        idx /= n;
    }
    x
}

/// Hypercube design: items at lattice points, test `(v, a)` pools every
/// point whose coordinate `v` equals `a`. A 1-CFF(n_1+...+n_k, n_1*...*n_k).
pub fn hypercube_cff(dims: &[usize]) -> Result<CffMatrix> {
    if dims.is_empty() {
        return Err(Error::InvalidParameter("hypercube needs at least one dimension".into()));
    }
    if let Some(&bad) = dims.iter().find(|&&n| n < 2) {
        return Err(Error::InvalidParameter(format!("hypercube side {bad} must be at least 2")));
    }
    let rows: usize = dims.iter().sum();
    let cols = dims
        .iter()
        .try_fold(1usize, |acc, &n| acc.checked_mul(n))
        .ok_or_else(|| Error::Overflow(format!("hypercube {dims:?}")))?;
    let offsets: Vec<usize> = dims
        .iter()
        .scan(0, |acc, &n| {
            let o = *acc;
            *acc += n;
            Some(o)
        })
        .collect();
    let mut m = BinaryMatrix::zeros(rows, cols)?;
    for j in 0..cols {
        for (v, xv) in mixed_radix_tuple(dims, j).into_iter().enumerate() {
            m.set(offsets[v] + xv, j, true);
        }
    }
    Ok(CffMatrix { matrix: m, d: 1, provenance: Provenance::Hypercube { dims: dims.to_vec() } })
}

pub fn identity_cff(m: usize) -> Result<CffMatrix> {
    Ok(CffMatrix { matrix: BinaryMatrix::identity(m)?, d: m.saturating_sub(1), provenance: Provenance::Identity })
}

const EXPLICIT_2CFF_9_12: [&str; 9] = [
    "100100100100",
    "100010010010",
    "100001001001",
    "010100001010",
    "010010100001",
    "010001010100",
    "001100010001",
    "001010001100",
    "001001100010",
];

const EXPLICIT_1CFF_6_12: [&str; 6] =
    ["111111000000", "111100110000", "100011001110", "010010101101", "001001011011", "000100110111"];

fn parse_rows(rows: &[&str]) -> BinaryMatrix {
    let v: Vec<Vec<u8>> = rows.iter().map(|r| r.bytes().map(|b| b - b'0').collect()).collect();
    BinaryMatrix::from_rows(&v).expect("well-formed constant")
}

/// A 2-CFF(9,12) with columns `B_1 = {1,2,3}, B_2 = {4,5,6}, ..., B_12 = {3,5,7}`.
pub fn explicit_2cff_9_12() -> CffMatrix {
    CffMatrix {
        matrix: parse_rows(&EXPLICIT_2CFF_9_12),
        d: 2,
        provenance: Provenance::Explicit { name: "2-CFF(9,12)".into() },
    }
}

/// A 1-CFF(6,12) whose columns are twelve distinct 3-subsets of a 6-set.
pub fn explicit_1cff_6_12() -> CffMatrix {
    CffMatrix {
        matrix: parse_rows(&EXPLICIT_1CFF_6_12),
        d: 1,
        provenance: Provenance::Explicit { name: "1-CFF(6,12)".into() },
    }
}

// ---------------------------------------------------------------------------
// Ingredient registry

/// Largest field order tried by [`best_cff`].
pub const REGISTRY_MAX_Q: u32 = 64;
/// Largest polynomial degree bound tried by [`best_cff`].
pub const REGISTRY_MAX_K: usize = 4;

#[derive(Clone, Debug)]
enum Plan {
    Identity { n: usize },
    Explicit,
    Poly { q: u32, k: usize, d: usize },
    Kron { a: Box<Plan>, b: Box<Plan> },
    Dsum { a1: Box<Plan>, a2: Box<Plan>, b: Box<Plan> },
    Best { d: usize, n: usize },
}

#[derive(Clone, Debug)]
struct Candidate {
    rows: usize,
    cols: usize,
    name: &'static str,
    plan: Plan,
}

fn prime_powers_upto(limit: u32) -> Vec<u32> {
    (2..=limit).filter(|&q| gf::prime_power(q as u64).is_some()).collect()
}

/// Single-construction candidates of strength `d >= 2`, excluding identity.
fn base_candidates(d: usize) -> Vec<Candidate> {
    let mut out = Vec::new();
    if d == 2 {
        out.push(Candidate { rows: 9, cols: 12, name: "explicit", plan: Plan::Explicit });
    }
    for q in prime_powers_upto(REGISTRY_MAX_Q) {
        for k in 1..=REGISTRY_MAX_K {
            let blocks = d * k + 1;
            if blocks > q as usize {
                continue;
            }
            let cols = match gf::poly_count(q, k) {
                Ok(c) => c,
                Err(_) => continue,
            };
            out.push(Candidate { rows: blocks * q as usize, cols, name: "polynomial", plan: Plan::Poly { q, k, d } });
        }
    }
    out
}

/// Row-count planner for [`best_cff`], memoized on `(d, m)`.
#[derive(Default)]
struct Planner {
    memo: HashMap<(usize, usize), Candidate>,
}

impl Planner {
    fn best(&mut self, d: usize, m: usize) -> Candidate {
        if let Some(c) = self.memo.get(&(d, m)) {
            return c.clone();
        }
        let c = self.search(d, m);
        self.memo.insert((d, m), c.clone());
        c
    }

    fn search(&mut self, d: usize, m: usize) -> Candidate {
        let best_marker = |rows| Candidate { rows, cols: m, name: "", plan: Plan::Best { d, n: m } };
        if d == 0 {
            return best_marker(1);
        }
        if d == 1 {
            return best_marker(sperner_t(m));
        }
        let mut cands = vec![Candidate { rows: m, cols: m, name: "identity", plan: Plan::Identity { n: m } }];
        let bases = base_candidates(d);
        cands.extend(bases.iter().filter(|c| c.cols >= m).cloned());
        // compositions only help when every factor is too narrow on its own
        let narrow: Vec<&Candidate> = bases.iter().filter(|c| c.cols < m).collect();
        for a in &narrow {
            if let Some(b) = narrow.iter().filter(|b| a.cols.saturating_mul(b.cols) >= m).min_by_key(|b| b.rows) {
                cands.push(Candidate {
                    rows: a.rows * b.rows,
                    cols: a.cols * b.cols,
                    name: "kronecker",
                    plan: Plan::Kron { a: Box::new(a.plan.clone()), b: Box::new(b.plan.clone()) },
                });
            }
        }
        for a1 in &narrow {
            for a2 in &narrow {
                if a1.cols.saturating_mul(a2.cols) < m {
                    continue;
                }
                let inner = self.best(d - 1, a2.cols);
                cands.push(Candidate {
                    rows: inner.rows * a1.rows + a2.rows,
                    cols: a1.cols * a2.cols,
                    name: "dsum",
                    plan: Plan::Dsum {
                        a1: Box::new(a1.plan.clone()),
                        a2: Box::new(a2.plan.clone()),
                        b: Box::new(Plan::Best { d: d - 1, n: a2.cols }),
                    },
                });
            }
        }
        // stable: equal (rows, name) keeps enumeration order
        cands.sort_by(|x, y| (x.rows, x.name).cmp(&(y.rows, y.name)));
        cands.swap_remove(0)
    }
}

fn realize(plan: &Plan, cols: usize) -> Result<CffMatrix> {
    match plan {
        Plan::Identity { n } => identity_cff(*n)?.truncate(cols),
        Plan::Explicit => explicit_2cff_9_12().truncate(cols),
        Plan::Poly { q, k, d } => poly_cff_restricted_cols(&Field::new(*q)?, *k, *d, cols),
        Plan::Best { d, n } => best_cff(*d, (*n).min(cols)),
        Plan::Kron { a, b } => {
            let b = realize(b, plan_cols(b))?;
            let a = realize(a, cols.div_ceil(b.cols()))?;
            kron_cff(&a, &b)?.truncate(cols)
        }
        Plan::Dsum { a1, a2, b } => {
            let a1 = realize(a1, plan_cols(a1))?;
            let n2 = cols.div_ceil(a1.cols());
            let a2 = realize(a2, n2)?;
            let b = realize(b, n2)?;
            dsum_cff(&a1, &a2, &b)?.truncate(cols)
        }
    }
}

fn plan_cols(plan: &Plan) -> usize {
    match plan {
        Plan::Identity { n } | Plan::Best { n, .. } => *n,
        Plan::Explicit => 12,
        Plan::Poly { q, k, .. } => gf::poly_count(*q, *k).unwrap_or(usize::MAX),
        Plan::Kron { a, b } => plan_cols(a) * plan_cols(b),
        Plan::Dsum { a1, a2, .. } => plan_cols(a1) * plan_cols(a2),
    }
}

/// Fewest-row d-CFF on `m` items available from the built-in constructions.
///
/// `d = 0` is the all-ones row and `d = 1` the Sperner family. For `d >= 2`
/// the candidates are restricted polynomial families (`q <= 64`, `k <= 4`), the
/// explicit 2-CFF(9,12), their Kronecker products and d-sums, and the identity;
/// ties go to the smaller `(rows, construction name)`.
pub fn best_cff(d: usize, m: usize) -> Result<CffMatrix> {
    if m == 0 {
        return Err(Error::InvalidDimension("best_cff on 0 items".into()));
    }
    match d {
        0 => Ok(CffMatrix { matrix: BinaryMatrix::row_ones(m)?, d: 0, provenance: Provenance::RowOnes }),
        1 => sperner_cff(m),
        _ => {
            let c = Planner::default().best(d, m);
            let mut out = realize(&c.plan, m)?;
            out.d = d;
            Ok(out)
        }
    }
}

/// Row count of [`best_cff`] without building the matrix.
pub fn best_cff_rows(d: usize, m: usize) -> usize {
    Planner::default().best(d, m.max(1)).rows
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cols_of(m: &BinaryMatrix) -> Vec<Vec<usize>> {
        (0..m.cols()).map(|j| m.column(j).iter_ones().collect()).collect()
    }

    #[test]
    fn sperner_t_values() {
        assert_eq!(sperner_t(1), 1);
        assert_eq!(sperner_t(2), 2);
        assert_eq!(sperner_t(6), 4);
        assert_eq!(sperner_t(10), 5);
        assert_eq!(sperner_t(30), 7);
        assert_eq!(sperner_t(484), 12);
    }

    #[test]
    fn colex_order() {
        let s = colex_subsets(4, 2, 6).unwrap();
        assert_eq!(s, vec![0b0011, 0b0101, 0b0110, 0b1001, 0b1010, 0b1100]);
        assert!(colex_subsets(4, 2, 7).is_err());
        assert!(colex_subsets(4, 0, 1).is_err());
    }

    #[test]
    fn sperner_small_cases() {
        let s6 = sperner_cff(6).unwrap();
        assert_eq!(s6.rows(), 4);
        let mut cols = cols_of(&s6.matrix);
        cols.sort();
        assert_eq!(cols, vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
        assert_eq!(sperner_cff(2).unwrap().matrix, BinaryMatrix::identity(2).unwrap());
        assert_eq!(sperner_cff_param(10, 1, 10).unwrap().matrix, BinaryMatrix::identity(10).unwrap());
        assert_eq!(sperner_cff(1).unwrap().matrix, BinaryMatrix::row_ones(1).unwrap());
        assert!(sperner_cff_param(5, 2, 11).is_err());
    }

    #[test]
    fn sperner_columns_pairwise_incomparable() {
        for m in [3, 7, 20, 35, 70] {
            let s = sperner_cff(m).unwrap();
            let c = s.matrix.columns();
            for i in 0..m {
                for j in 0..m {
                    if i != j {
                        assert!(!c[i].is_subset(&c[j]));
                    }
                }
            }
        }
    }

    #[test]
    fn poly_structure() {
        let f = Field::new(5).unwrap();
        let p = poly_cff(&f, 1, 4).unwrap();
        assert_eq!((p.rows(), p.cols()), (25, 25));
        for j in 0..25 {
            assert_eq!(p.matrix.col_weight(j), 5);
            // one 1 per column inside each row block
            for x in 0..5 {
                assert_eq!((0..5).filter(|y| p.matrix.get(x * 5 + y, j)).count(), 1);
            }
        }
        for i in 0..25 {
            assert_eq!(p.matrix.row_weight(i), 5);
        }
        assert!(poly_cff(&f, 1, 5).is_err());
        assert!(poly_cff(&f, 0, 1).is_err());
        let f3 = Field::new(3).unwrap();
        let p = poly_cff(&f3, 2, 1).unwrap();
        for i in 0..9 {
            assert_eq!(p.matrix.row_weight(i), 9);
        }
    }

    #[test]
    fn poly_restrictions() {
        let f = Field::new(5).unwrap();
        let r1 = poly_cff_restricted(&f, 1, 1).unwrap();
        assert_eq!((r1.rows(), r1.cols()), (10, 25));
        let r2 = poly_cff_restricted(&f, 1, 2).unwrap();
        assert_eq!((r2.rows(), r2.cols()), (15, 25));
        let r4 = poly_cff_restricted(&f, 1, 4).unwrap();
        assert_eq!(r4.matrix, poly_cff(&f, 1, 4).unwrap().matrix);
        assert!(poly_cff_restricted(&f, 1, 5).is_err());
        assert_eq!(r2.matrix.truncate_rows(10).unwrap(), r1.matrix);
    }

    #[test]
    fn hypercube_dims() {
        let h = hypercube_cff(&[5, 5]).unwrap();
        assert_eq!((h.rows(), h.cols()), (10, 25));
        let h = hypercube_cff(&[3, 3, 3]).unwrap();
        assert_eq!((h.rows(), h.cols()), (9, 27));
        assert_eq!(hypercube_cff(&[2]).unwrap().matrix, BinaryMatrix::identity(2).unwrap());
        assert!(hypercube_cff(&[1, 3]).is_err());
        assert_eq!(mixed_radix_tuple(&[2, 3], 5), vec![1, 2]);
        assert_eq!(mixed_radix_index(&[2, 3], &[1, 2]), 5);
    }

    #[test]
    fn kron_and_dsum_dimensions() {
        let a = explicit_2cff_9_12();
        let b = explicit_1cff_6_12();
        let k = kron_cff(&a, &a).unwrap();
        assert_eq!((k.rows(), k.cols(), k.d), (81, 144, 2));
        assert!(kron_cff(&a, &b).is_err());
        let ds = dsum_cff(&a, &a, &b).unwrap();
        assert_eq!((ds.rows(), ds.cols()), (63, 144));
        assert!(dsum_cff(&a, &a, &a).is_err());
        let i2 = identity_cff(2).unwrap();
        let i2_1 = CffMatrix { d: 1, ..i2.clone() };
        assert!(matches!(dsum_cff(&a, &a, &i2_1), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn explicit_columns() {
        let a = explicit_2cff_9_12();
        let c = cols_of(&a.matrix);
        assert_eq!(c[0], vec![0, 1, 2]);
        assert_eq!(c[1], vec![3, 4, 5]);
        assert_eq!(c[11], vec![2, 4, 6]);
        let b = explicit_1cff_6_12();
        let mut cb = cols_of(&b.matrix);
        assert!(cb.iter().all(|s| s.len() == 3));
        cb.dedup();
        assert_eq!(cb.len(), 12);
    }

    #[test]
    fn registry_choices() {
        let r0 = best_cff(0, 7).unwrap();
        assert_eq!(r0.matrix, BinaryMatrix::row_ones(7).unwrap());
        assert_eq!(best_cff(1, 484).unwrap().rows(), 12);
        let b = best_cff(2, 121).unwrap();
        assert_eq!((b.rows(), b.cols()), (25, 121));
        assert_eq!(b.provenance, Provenance::Polynomial { q: 5, k: 2, blocks: 5 });
        assert_eq!(best_cff(2, 125).unwrap().rows(), 25);
        assert_eq!(best_cff(2, 12).unwrap().provenance.name(), "explicit");
        assert_eq!(best_cff(2, 2).unwrap().matrix, BinaryMatrix::identity(2).unwrap());
        assert_eq!(best_cff(1, 2).unwrap().matrix, BinaryMatrix::identity(2).unwrap());
        assert_eq!(best_cff(3, 1).unwrap().rows(), 1);
        for (d, m) in [(2, 30), (2, 500), (3, 40), (2, 5000), (4, 300)] {
            let c = best_cff(d, m).unwrap();
            assert_eq!(c.cols(), m);
            assert_eq!(c.rows(), best_cff_rows(d, m));
            assert!(c.rows() <= m);
        }
    }
}
