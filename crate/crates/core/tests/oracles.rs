mod common;

use common::{naive_cover, naive_ecff, naive_scff, permutation_cff, random_hypergraph, random_matrix};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use scff_core::cff::{explicit_2cff_9_12, sperner_cff};
use scff_core::decode::{decode_edges, decode_vertices, simulate_outcomes};
use scff_core::hypergraph::{gen_disjoint, min_defect_cover};
use scff_core::scff::{colouring_scff_r, colouring_scff_r1, kron_scff_with, sperner_scff};
use scff_core::verify::{is_d_cff, is_ecff, is_scff};
use scff_core::{CheckMode, DefectCover, Status, StructuredDesign};

const EX: CheckMode = CheckMode::Exhaustive;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config(512))]

    #[test]
    fn covering_check_matches_permutation_submatrices(seed: u64, t in 1usize..=8, n in 2usize..=10, d in 1usize..=3, p in 0.2f64..0.8) {
        prop_assume!(d < n);
        let m = random_matrix(&mut ChaCha8Rng::seed_from_u64(seed), t, n, p);
        let report = is_d_cff(&m, d, EX).unwrap();
        prop_assert_eq!(report.holds, permutation_cff(&m, d));
        prop_assert_eq!(report.holds, common::covering_cff(&m, d));
        if let Some(w) = report.witness {
            prop_assert!(w.is_violation(&m));
        }
    }

    #[test]
    fn maximal_sets_suffice_for_structured_checks(seed: u64, n in 2usize..=8, m in 1usize..=4, t in 1usize..=8, r in 1usize..=4, p in 0.2f64..0.8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        prop_assume!(r <= m && m < (1 << n) - 1);
        let h = random_hypergraph(&mut rng, n, m);
        let mat = random_matrix(&mut rng, t, n, p);
        let s = is_scff(&mat, &h, r, EX).unwrap();
        prop_assert_eq!(s.holds, naive_scff(&mat, &h, r));
        if let Some(w) = s.witness {
            prop_assert!(w.is_violation(&mat));
        }
        let e = is_ecff(&mat, &h, r, EX).unwrap();
        prop_assert_eq!(e.holds, naive_ecff(&mat, &h, r));
        if let Some(w) = e.witness {
            prop_assert!(w.is_violation(&mat));
        }
    }

    #[test]
    fn sampling_never_invents_violations(seed: u64, n in 3usize..=8, t in 2usize..=8, trials in 1u64..200) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = random_hypergraph(&mut rng, n, 3);
        let mat = random_matrix(&mut rng, t, n, 0.4);
        let exhaustive = is_scff(&mat, &h, 2, EX).unwrap().holds;
        let sampled = is_scff(&mat, &h, 2, CheckMode::Sampled { seed, trials }).unwrap();
        if exhaustive {
            prop_assert!(sampled.holds);
        }
        if let Some(w) = sampled.witness {
            prop_assert!(w.is_violation(&mat));
        }
    }

    #[test]
    fn cover_search_matches_enumeration(seed: u64, n in 2usize..=8, m in 1usize..=5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        prop_assume!(m < (1 << n) - 1);
        let h = random_hypergraph(&mut rng, n, m);
        let covered = h.union_bits(&(0..m).collect::<Vec<_>>());
        let defectives: Vec<usize> = covered.iter_ones().filter(|_| rand::Rng::gen_bool(&mut rng, 0.5)).collect();
        let want = naive_cover(&h, &defectives).unwrap();
        match min_defect_cover(&h, &defectives, 4).unwrap() {
            DefectCover::Exact(c) => prop_assert_eq!(c, want),
            DefectCover::AboveCap { greedy_upper_bound } => prop_assert!(want > 4 && greedy_upper_bound >= want),
        }
    }

    #[test]
    fn decoding_is_conservative(seed: u64, t in 1usize..=12, n in 1usize..=14) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mat = random_matrix(&mut rng, t, n, 0.35);
        let defectives: Vec<usize> = (0..n).filter(|_| rand::Rng::gen_bool(&mut rng, 0.3)).collect();
        let y = simulate_outcomes(&mat, &defectives).unwrap();
        let x = decode_vertices(&mat, &y).unwrap();
        for (j, s) in x.0.iter().enumerate() {
            match s {
                Status::Clear => prop_assert!(!defectives.contains(&j)),
                Status::Defective => prop_assert!(defectives.contains(&j)),
                Status::Unknown => {}
            }
        }
        // one more defective never clears a positive test
        let mut more = defectives.clone();
        more.push(rand::Rng::gen_range(&mut rng, 0..n));
        let y2 = simulate_outcomes(&mat, &more).unwrap();
        prop_assert!(y.0.iter().zip(&y2.0).all(|(&a, &b)| !a || b));
    }
}

/// Small designs of both kinds with their hypergraphs.
fn small_designs() -> Vec<StructuredDesign> {
    let mut out = Vec::new();
    let h = gen_disjoint(12, 3).unwrap();
    let (e, s) = kron_scff_with(&h, &explicit_2cff_9_12()).unwrap();
    out.extend([e, s]);
    let h = gen_disjoint(6, 4).unwrap();
    let (e, s) = sperner_scff(&h).unwrap();
    out.extend([e, s]);
    let h = gen_disjoint(5, 2).unwrap();
    let (e, s) = kron_scff_with(&h, &sperner_cff(5).unwrap()).unwrap();
    out.extend([e, s]);
    let h = common::two_period_school();
    let (e, s) = colouring_scff_r1(&h).unwrap();
    out.extend([e, s]);
    out.push(colouring_scff_r(&h, 2).unwrap());
    out
}

proptest! {
    #![proptest_config(config(256))]

    #[test]
    fn designs_decode_within_their_cover_bound(pick in 0usize..9, seed: u64) {
        let designs = small_designs();
        let d = &designs[pick];
        let h = &d.hypergraph;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (defectives, _) = scff_core::harness::sample_scenario(h, d.r + 1, &mut rng);
        let cover = naive_cover(h, &defectives).unwrap();
        let y = simulate_outcomes(&d.matrix, &defectives).unwrap();
        let x = decode_vertices(&d.matrix, &y).unwrap();
        let z = decode_edges(h, &d.matrix, &y, &x).unwrap();
        if cover <= d.r && d.kind == scff_core::DesignKind::Scff {
            prop_assert!(x.is_boolean());
            prop_assert_eq!(x.indices_with(Status::Defective), defectives.clone());
        }
        if cover <= d.r && d.kind == scff_core::DesignKind::Ecff {
            let flagged = h.union_bits(&z.indices_with(Status::Defective));
            prop_assert!(defectives.iter().all(|&v| flagged.get(v)));
        }
        for (j, s) in x.0.iter().enumerate() {
            match s {
                Status::Clear => prop_assert!(!defectives.contains(&j)),
                Status::Defective => prop_assert!(defectives.contains(&j)),
                Status::Unknown => {}
            }
        }
    }
}
