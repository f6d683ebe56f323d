//! Property checkers for d-CFF, (S,r)-CFF and (S,r)-ECFF matrices.
//!
//! Everything reduces to one test on column bitsets: item `i0` is covered by
//! a set `I` when `col(i0) & !OR(col(I))` is zero.
//!
//! For the structured properties only maximal sets need checking. Given edges
//! `U` with union `S`, shrinking `I` below `S \ {i0}` can only enlarge the set
//! difference, so one check per `(U, i0)` suffices. With `once` the rows
//! touched by some vertex of `S` and `twice` the rows touched by at least two,
//! `i0 ∈ S` survives iff `col(i0) & once & !twice` is nonzero, and `i0 ∉ S`
//! survives iff `col(i0) & !once` is nonzero.

use std::ops::ControlFlow;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::binmat::BinaryMatrix;
use crate::bits::Bits;
use crate::cff::binomial;
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;

/// Default number of elementary checks above which [`CheckMode::Auto`] samples.
pub const DEFAULT_WORK_BUDGET: u64 = 100_000_000;
/// Trials drawn when [`CheckMode::Auto`] falls back to sampling.
pub const AUTO_TRIALS: u64 = 100_000;
/// Environment variable overriding [`DEFAULT_WORK_BUDGET`].
pub const WORK_BUDGET_VAR: &str = "SCFF_WORK_BUDGET";

/// The exhaustive/sampled cutoff, from `SCFF_WORK_BUDGET` when set.
pub fn work_budget() -> u64 {
    std::env::var(WORK_BUDGET_VAR).ok().and_then(|s| s.trim().parse().ok()).unwrap_or(DEFAULT_WORK_BUDGET)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum CheckMode {
    Exhaustive,
    Sampled {
        seed: u64,
        trials: u64,
    },
    /// Exhaustive within [`work_budget`], otherwise sampled with seed 0.
    Auto,
}

impl CheckMode {
    fn resolve(self, work: u128) -> CheckMode {
        match self {
            CheckMode::Auto if work <= work_budget() as u128 => CheckMode::Exhaustive,
            CheckMode::Auto => CheckMode::Sampled { seed: 0, trials: AUTO_TRIALS },
            other => other,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Property {
    Dcff(usize),
    Scff(usize),
    Ecff(usize),
}

/// A violating configuration: `item` is covered by the union of `columns`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub item: usize,
    pub columns: Vec<usize>,
    /// The edges whose union the columns were drawn from (structured properties).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub edges: Vec<usize>,
}

impl Witness {
    /// Re-evaluates the covering condition directly on the matrix.
    pub fn is_violation(&self, m: &BinaryMatrix) -> bool {
        if self.item >= m.cols() || self.columns.iter().any(|&c| c == self.item || c >= m.cols()) {
            return false;
        }
        let mut union = Bits::zeros(m.rows());
        for &c in &self.columns {
            union.or_assign(m.column(c));
        }
        m.column(self.item).is_subset(&union)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub property: Property,
    pub holds: bool,
    pub witness: Option<Witness>,
    pub checks_performed: u64,
    pub mode: CheckMode,
}

/// Lexicographic `k`-subsets of `0..n`, stopping at the first `Break`.
pub fn for_each_combination<B>(n: usize, k: usize, mut f: impl FnMut(&[usize]) -> ControlFlow<B>) -> ControlFlow<B> {
    if k > n {
        return ControlFlow::Continue(());
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx)?;
        let Some(pos) = (0..k).rev().find(|&p| idx[p] < n - k + p) else {
            return ControlFlow::Continue(());
        };
        idx[pos] += 1;
        for p in pos + 1..k {
            idx[p] = idx[p - 1] + 1;
        }
    }
}

fn is_d_cff_exhaustive(cols: &[Bits], d: usize, checks: &mut u64) -> Option<Witness> {
    fn search(
        cols: &[Bits],
        i0: usize,
        rest: &Bits,
        start: usize,
        left: usize,
        chosen: &mut Vec<usize>,
        checks: &mut u64,
    ) -> bool {
        if left == 0 {
            return false;
        }
        for j in start..cols.len() {
            // columns missing the residual cannot help cover it
            if j == i0 || !cols[j].intersects(rest) {
                continue;
            }
            *checks += 1;
            let mut next = rest.clone();
            next.and_not_assign(&cols[j]);
            chosen.push(j);
            if next.is_zero() || search(cols, i0, &next, j + 1, left - 1, chosen, checks) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    for i0 in 0..cols.len() {
        *checks += 1;
        let mut chosen = Vec::with_capacity(d);
        if cols[i0].is_zero() || search(cols, i0, &cols[i0], 0, d, &mut chosen, checks) {
            // pad with the lowest unused columns so the witness names exactly d others
            for j in 0..cols.len() {
                if chosen.len() == d {
                    break;
                }
                if j != i0 && !chosen.contains(&j) {
                    chosen.push(j);
                }
            }
            chosen.sort_unstable();
            return Some(Witness { item: i0, columns: chosen, edges: Vec::new() });
        }
    }
    None
}

/// No column is covered by the union of any `d` others.
pub fn is_d_cff(m: &BinaryMatrix, d: usize, mode: CheckMode) -> Result<VerifyReport> {
    let n = m.cols();
    if d + 1 > n {
        return Err(Error::InvalidParameter(format!("strength {d} needs at least {} columns, matrix has {n}", d + 1)));
    }
    let cols = m.columns();
    let work = (n as u128).saturating_mul(binomial(n - 1, d));
    let mode = mode.resolve(work);
    let mut checks = 0u64;
    let witness = match mode {
        CheckMode::Sampled { seed, trials } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut found = None;
            for _ in 0..trials {
                checks += 1;
                let picked = sample(&mut rng, n, d + 1).into_vec();
                let (i0, others) = (picked[0], &picked[1..]);
                let w = Witness { item: i0, columns: sorted(others), edges: Vec::new() };
                if w.is_violation(m) {
                    found = Some(w);
                    break;
                }
            }
            found
        }
        _ => is_d_cff_exhaustive(cols, d, &mut checks),
    };
    Ok(VerifyReport { property: Property::Dcff(d), holds: witness.is_none(), witness, checks_performed: checks, mode })
}

fn sorted(v: &[usize]) -> Vec<usize> {
    let mut v = v.to_vec();
    v.sort_unstable();
    v
}

/// Rows hit by at least one / at least two vertices of `vertices`.
fn once_twice(cols: &[Bits], vertices: &Bits, rows: usize) -> (Bits, Bits) {
    let mut once = Bits::zeros(rows);
    let mut twice = Bits::zeros(rows);
    for v in vertices.iter_ones() {
        let mut both = once.clone();
        both.and_assign(&cols[v]);
        twice.or_assign(&both);
        once.or_assign(&cols[v]);
    }
    (once, twice)
}

fn survives(col: &Bits, inside: bool, once: &Bits, twice: &Bits) -> bool {
    let words = col.words().iter().zip(once.words()).zip(twice.words());
    if inside {
        words.map(|((c, o), t)| c & o & !t).any(|w| w != 0)
    } else {
        words.map(|((c, o), _)| c & !o).any(|w| w != 0)
    }
}

/// Checks every item against the maximal set for edges `edges`; `outside_only`
/// restricts to items off the union (the ECFF condition).
fn check_edge_set(
    m: &BinaryMatrix,
    h: &Hypergraph,
    edges: &[usize],
    outside_only: bool,
    items: impl Iterator<Item = usize>,
    checks: &mut u64,
) -> Option<Witness> {
    let cols = m.columns();
    let union = h.union_bits(edges);
    let (once, twice) = once_twice(cols, &union, m.rows());
    for i0 in items {
        let inside = union.get(i0);
        if inside && outside_only {
            continue;
        }
        *checks += 1;
        if !survives(&cols[i0], inside, &once, &twice) {
            let columns = union.iter_ones().filter(|&v| v != i0).collect();
            return Some(Witness { item: i0, columns, edges: edges.to_vec() });
        }
    }
    None
}

fn check_dims(m: &BinaryMatrix, h: &Hypergraph, r: usize) -> Result<()> {
    if m.cols() != h.n() {
        return Err(Error::DimensionMismatch(format!(
            "matrix has {} columns, hypergraph {} vertices",
            m.cols(),
            h.n()
        )));
    }
    if r > h.m() {
        return Err(Error::InvalidParameter(format!("cover bound {r} exceeds the {} edges", h.m())));
    }
    Ok(())
}

fn sample_edges(rng: &mut ChaCha8Rng, m: usize, r: usize) -> Vec<usize> {
    sorted(&sample(rng, m, r).into_vec())
}

/// `(S, r)`-CFF: for every `r` edges, every item outside any subset `I` of
/// their union is not covered by `I`.
pub fn is_scff(m: &BinaryMatrix, h: &Hypergraph, r: usize, mode: CheckMode) -> Result<VerifyReport> {
    check_dims(m, h, r)?;
    let work = binomial(h.m(), r).saturating_mul(h.n() as u128);
    let mode = mode.resolve(work);
    let mut checks = 0u64;
    let witness = match mode {
        CheckMode::Sampled { seed, trials } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..trials).find_map(|_| {
                let edges = sample_edges(&mut rng, h.m(), r);
                let i0 = rng.gen_range(0..h.n());
                check_edge_set(m, h, &edges, false, std::iter::once(i0), &mut checks)
            })
        }
        _ => match for_each_combination(h.m(), r, |edges| {
            match check_edge_set(m, h, edges, false, 0..h.n(), &mut checks) {
                Some(w) => ControlFlow::Break(w),
                None => ControlFlow::Continue(()),
            }
        }) {
            ControlFlow::Break(w) => Some(w),
            ControlFlow::Continue(()) => None,
        },
    };
    Ok(VerifyReport { property: Property::Scff(r), holds: witness.is_none(), witness, checks_performed: checks, mode })
}

/// `(S, r)`-ECFF: for every `ℓ <= r` edges, no item off their union is covered
/// by the union.
pub fn is_ecff(m: &BinaryMatrix, h: &Hypergraph, r: usize, mode: CheckMode) -> Result<VerifyReport> {
    check_dims(m, h, r)?;
    let work = (1..=r).fold(0u128, |acc, l| acc.saturating_add(binomial(h.m(), l))).saturating_mul(h.n() as u128);
    let mode = mode.resolve(work);
    let mut checks = 0u64;
    let witness = match mode {
        CheckMode::Sampled { seed, trials } if r > 0 => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..trials).find_map(|_| {
                let l = rng.gen_range(1..=r);
                let edges = sample_edges(&mut rng, h.m(), l);
                let i0 = rng.gen_range(0..h.n());
                check_edge_set(m, h, &edges, true, std::iter::once(i0), &mut checks)
            })
        }
        CheckMode::Sampled { .. } => None,
        _ => (1..=r).find_map(|l| {
            match for_each_combination(h.m(), l, |edges| {
                match check_edge_set(m, h, edges, true, 0..h.n(), &mut checks) {
                    Some(w) => ControlFlow::Break(w),
                    None => ControlFlow::Continue(()),
                }
            }) {
                ControlFlow::Break(w) => Some(w),
                ControlFlow::Continue(()) => None,
            }
        }),
    };
    Ok(VerifyReport { property: Property::Ecff(r), holds: witness.is_none(), witness, checks_performed: checks, mode })
}

/// Dispatches on `property`; `h` is required for the structured properties.
pub fn check(m: &BinaryMatrix, h: Option<&Hypergraph>, property: Property, mode: CheckMode) -> Result<VerifyReport> {
    let need = || h.ok_or_else(|| Error::InvalidParameter("structured properties need a hypergraph".into()));
    match property {
        Property::Dcff(d) => is_d_cff(m, d, mode),
        Property::Scff(r) => is_scff(m, need()?, r, mode),
        Property::Ecff(r) => is_ecff(m, need()?, r, mode),
    }
}
