//! Seeded scenario sweeps: plant defectives inside at most `r` edges, run the
//! tests, decode, and tally how often the decoders are exact.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bits::Bits;
use crate::decode::{decode_edges, decode_vertices, simulate_outcomes, Status};
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::scff::StructuredDesign;

/// Draws `1..=r` distinct edges and a uniformly random nonempty subset of
/// their union. Returns the sorted defective items and the chosen edges.
pub fn sample_scenario<R: Rng>(h: &Hypergraph, r: usize, rng: &mut R) -> (Vec<usize>, Vec<usize>) {
    let r = r.min(h.m());
    if r == 0 {
        return (Vec::new(), Vec::new());
    }
    let l = rng.gen_range(1..=r);
    let mut edges = sample(rng, h.m(), l).into_vec();
    edges.sort_unstable();
    let pool: Vec<usize> = h.union_bits(&edges).iter_ones().collect();
    loop {
        let picked: Vec<usize> = pool.iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
        if !picked.is_empty() {
            return (picked, edges);
        }
    }
}

/// Outcome of decoding one defective set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScenarioResult {
    /// Item statuses are boolean and equal to the planted set.
    pub exact: bool,
    /// Non-defective items decoded as defective.
    pub false_positives: usize,
    /// Defective items decoded as clear.
    pub false_negatives: usize,
    /// Edges decoded as defective cover every defective item.
    pub edges_cover: bool,
}

/// Simulates, decodes vertices and edges, and compares with `defectives`.
pub fn run_scenario(design: &StructuredDesign, defectives: &[usize]) -> Result<ScenarioResult> {
    let m = &design.matrix;
    let h = &design.hypergraph;
    let y = simulate_outcomes(m, defectives)?;
    let x = decode_vertices(m, &y)?;
    let z = decode_edges(h, m, &y, &x)?;
    let planted = Bits::from_indices(h.n(), defectives.iter().copied());
    let mut false_positives = 0;
    let mut false_negatives = 0;
    let mut exact = true;
    for (j, &s) in x.0.iter().enumerate() {
        let truth = planted.get(j);
        match s {
            Status::Defective if !truth => false_positives += 1,
            Status::Clear if truth => false_negatives += 1,
            Status::Unknown => {}
            _ => continue,
        }
        exact = false;
    }
    let flagged: Vec<usize> = z.indices_with(Status::Defective);
    let covered = h.union_bits(&flagged);
    Ok(ScenarioResult { exact, false_positives, false_negatives, edges_cover: planted.is_subset(&covered) })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulationSummary {
    pub scenarios: u64,
    pub r: usize,
    pub seed: u64,
    pub exact_recovery_rate: f64,
    /// Share of non-defective item decisions that came out defective.
    pub false_positive_rate: f64,
    /// Share of defective items decoded as clear.
    pub false_negative_rate: f64,
    /// Share of scenarios whose defective-edge set covers the defectives.
    pub edge_cover_rate: f64,
    pub tests_used: usize,
    pub tests_individual: usize,
}

/// Runs `scenarios` seeded draws of [`sample_scenario`] against `design`.
pub fn simulate(design: &StructuredDesign, scenarios: u64, r: usize, seed: u64) -> Result<SimulationSummary> {
    if scenarios == 0 {
        return Err(Error::InvalidParameter("at least one scenario is required".into()));
    }
    let h = &design.hypergraph;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut exact, mut cover) = (0u64, 0u64);
    let (mut fp, mut fneg, mut neg_items, mut pos_items) = (0u64, 0u64, 0u64, 0u64);
    for _ in 0..scenarios {
        let (defectives, _) = sample_scenario(h, r, &mut rng);
        let res = run_scenario(design, &defectives)?;
        exact += res.exact as u64;
        cover += res.edges_cover as u64;
        fp += res.false_positives as u64;
        fneg += res.false_negatives as u64;
        pos_items += defectives.len() as u64;
        neg_items += (h.n() - defectives.len()) as u64;
    }
    let rate = |a: u64, b: u64| if b == 0 { 0.0 } else { a as f64 / b as f64 };
    Ok(SimulationSummary {
        scenarios,
        r,
        seed,
        exact_recovery_rate: rate(exact, scenarios),
        false_positive_rate: rate(fp, neg_items),
        false_negative_rate: rate(fneg, pos_items),
        edge_cover_rate: rate(cover, scenarios),
        tests_used: design.rows(),
        tests_individual: h.n(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::gen_disjoint;
    use crate::scff::sperner_scff;

    #[test]
    fn scenarios_stay_inside_r_edges() {
        let h = gen_disjoint(8, 4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let (d, edges) = sample_scenario(&h, 2, &mut rng);
            assert!(!d.is_empty() && (1..=2).contains(&edges.len()));
            let u = h.union_bits(&edges);
            assert!(d.iter().all(|&v| u.get(v)));
        }
        assert_eq!(sample_scenario(&h, 0, &mut rng).0, Vec::<usize>::new());
    }

    #[test]
    fn sperner_design_is_exact_for_one_edge() {
        let (_, scff) = sperner_scff(&gen_disjoint(10, 5).unwrap()).unwrap();
        let s = simulate(&scff, 300, 1, 9).unwrap();
        assert_eq!(s.exact_recovery_rate, 1.0);
        assert_eq!((s.false_positive_rate, s.false_negative_rate), (0.0, 0.0));
        assert_eq!((s.tests_used, s.tests_individual), (10, 50));
        assert_eq!(s, simulate(&scff, 300, 1, 9).unwrap());
    }
}
