mod common;

use common::{curated_colouring, naive_ecff, naive_scff, permutation_cff, two_period_school};
use scff_core::cff::{
    best_cff, dsum_cff, explicit_1cff_6_12, explicit_2cff_9_12, hypercube_cff, identity_cff, kron_cff, poly_cff,
    poly_cff_restricted, sperner_cff,
};
use scff_core::hypergraph::{gen_disjoint, gen_grid, gen_school, grid_strong_colouring};
use scff_core::scff::{
    colouring_scff_r, colouring_scff_r1, colouring_scff_r_with, grid_scff, hypercube_scff, kron_scff_mixed_with,
    kron_scff_with, poly_scff, sperner_scff, sperner_scff_limited, Part,
};
use scff_core::verify::{is_d_cff, is_ecff, is_scff};
use scff_core::{CheckMode, DesignKind, Field, Hypergraph};

const EX: CheckMode = CheckMode::Exhaustive;

#[test]
fn nine_by_twelve_is_two_but_not_three_cover_free() {
    let a = explicit_2cff_9_12();
    assert_eq!((a.rows(), a.cols(), a.d), (9, 12, 2));
    assert!(is_d_cff(&a.matrix, 2, EX).unwrap().holds);
    assert!(permutation_cff(&a.matrix, 2));
    let r3 = is_d_cff(&a.matrix, 3, EX).unwrap();
    assert!(!r3.holds);
    let w = r3.witness.unwrap();
    assert_eq!(w.columns.len(), 3);
    assert!(w.is_violation(&a.matrix));
    assert!(!permutation_cff(&a.matrix, 3));
}

#[test]
fn six_by_twelve_is_one_cover_free() {
    let b = explicit_1cff_6_12();
    assert!(is_d_cff(&b.matrix, 1, EX).unwrap().holds);
    assert!(permutation_cff(&b.matrix, 1));
}

#[test]
fn twelve_edges_of_three_with_both_products() {
    let h = gen_disjoint(12, 3).unwrap();
    let (ecff, scff) = kron_scff_with(&h, &explicit_2cff_9_12()).unwrap();
    let mixed = kron_scff_mixed_with(&h, &explicit_2cff_9_12(), &explicit_1cff_6_12()).unwrap();
    for d in [&scff, &mixed] {
        assert_eq!((d.rows(), d.cols()), (27, 36));
        assert!(is_scff(&d.matrix, &h, 2, EX).unwrap().holds);
        assert!(naive_scff(&d.matrix, &h, 2));
    }
    assert_eq!(ecff.rows(), 9);
    assert!(is_ecff(&ecff.matrix, &h, 2, EX).unwrap().holds);
    assert!(naive_ecff(&ecff.matrix, &h, 2));
}

#[test]
fn sperner_row_counts_for_unlimited_pools() {
    let table = [
        (10, [10, 15, 25, 35]),
        (20, [11, 16, 26, 36]),
        (30, [12, 17, 27, 37]),
        (40, [13, 18, 28, 38]),
        (50, [13, 18, 28, 38]),
        (60, [13, 18, 28, 38]),
    ];
    for (m, rows) in table {
        for (d, want) in [5, 10, 20, 30].into_iter().zip(rows) {
            let (ecff, scff) = sperner_scff(&gen_disjoint(m, d).unwrap()).unwrap();
            assert_eq!(scff.rows(), want, "m = {m}, d = {d}");
            assert_eq!(ecff.rows() + d, want);
        }
    }
}

#[test]
fn limited_pools_keep_the_guarantee() {
    for (m, d, l) in [(10, 5, 10), (20, 5, 10), (10, 10, 20), (30, 5, 20), (10, 5, 3), (20, 10, 5)] {
        let h = gen_disjoint(m, d).unwrap();
        let design = sperner_scff_limited(&h, l).unwrap();
        assert!(design.matrix.max_row_weight() <= l, "m = {m}, d = {d}, L = {l}");
        assert!(is_scff(&design.matrix, &h, 1, EX).unwrap().holds, "m = {m}, d = {d}, L = {l}");
    }
}

#[test]
fn polynomial_family_over_five() {
    let f = Field::new(5).unwrap();
    let c = poly_cff(&f, 1, 4).unwrap();
    assert_eq!((c.rows(), c.cols()), (25, 25));
    assert!(is_d_cff(&c.matrix, 4, EX).unwrap().holds);
    for (d, rows) in [(1, 10), (2, 15)] {
        let r = poly_cff_restricted(&f, 1, d).unwrap();
        assert_eq!(r.rows(), rows);
        assert!(is_d_cff(&r.matrix, d, EX).unwrap().holds);
    }
    let p = poly_scff(&f, 1, None).unwrap();
    assert_eq!(p.scff.hypergraph.m(), 5);
    assert!(is_scff(&p.scff.matrix, &p.scff.hypergraph, 1, EX).unwrap().holds);
    let e = p.ecff.unwrap();
    assert!(is_ecff(&e.matrix, &e.hypergraph, 5, EX).unwrap().holds);
    assert!(naive_ecff(&e.matrix, &e.hypergraph, 5));
}

#[test]
fn polynomial_classes_over_three() {
    let f = Field::new(3).unwrap();
    let p = poly_scff(&f, 1, None).unwrap();
    assert_eq!((p.scff.rows(), p.scff.cols()), (6, 9));
    assert!(naive_scff(&p.scff.matrix, &p.scff.hypergraph, 1));
    let e = p.ecff.unwrap();
    assert!(is_ecff(&e.matrix, &e.hypergraph, 3, EX).unwrap().holds);
}

#[test]
fn hypercube_designs() {
    for (n, k, rows) in [(5, 2, 10), (3, 3, 9)] {
        let d = hypercube_scff(n, k).unwrap();
        assert_eq!((d.all_lines.rows(), d.all_lines.cols()), (rows, n.pow(k as u32)));
        assert!(is_scff(&d.all_lines.matrix, &d.all_lines.hypergraph, 1, EX).unwrap().holds);
        for axis in &d.axes {
            assert!(is_scff(&axis.matrix, &axis.hypergraph, 1, EX).unwrap().holds);
        }
    }
    assert!(is_d_cff(&hypercube_cff(&[4, 3]).unwrap().matrix, 1, EX).unwrap().holds);
    let d = hypercube_scff(4, 2).unwrap();
    for e in &d.line_ecff {
        assert_eq!(e.kind, DesignKind::Ecff);
        assert!(is_ecff(&e.matrix, &e.hypergraph, 4, EX).unwrap().holds);
    }
}

#[test]
fn small_school_has_fourteen_period_aligned_tests() {
    let h = gen_school(2, 6, 3, 0).unwrap();
    let (ecff, scff) = colouring_scff_r1(&h).unwrap();
    assert_eq!((ecff.rows(), scff.rows()), (8, 14));
    assert!(is_scff(&scff.matrix, &h, 1, EX).unwrap().holds);
    assert!(naive_scff(&scff.matrix, &h, 1));
    assert!(is_ecff(&ecff.matrix, &h, 1, EX).unwrap().holds);
    for period in 0..2 {
        let rows: Vec<usize> = (0..scff.rows()).filter(|&i| scff.row_origin[i].class == Some(period)).collect();
        assert_eq!(rows.len(), 7);
        for &i in &rows {
            // a period's tests only pool through that period's courses
            for v in scff.matrix.row_ones_positions(i) {
                assert!(h.edges()[period * 6..period * 6 + 6].iter().any(|e| e.contains(&v)));
            }
        }
    }
}

#[test]
fn large_school_counts() {
    let h = gen_school(4, 30, 30, 7).unwrap();
    assert_eq!((h.n(), h.m()), (900, 120));
    assert!(h.degrees().iter().all(|&d| d == 4));
    let (ecff, scff) = colouring_scff_r1(&h).unwrap();
    assert_eq!((ecff.rows(), scff.rows()), (28, 148));
    assert!(is_scff(&scff.matrix, &h, 1, EX).unwrap().holds);
    assert!(is_ecff(&ecff.matrix, &h, 1, EX).unwrap().holds);
}

#[test]
fn curated_colouring_gives_forty_eight_tests() {
    let h = two_period_school();
    let c = curated_colouring();
    assert!(c.is_strong(&h));
    let d = colouring_scff_r_with(&h, 2, &c).unwrap();
    assert_eq!(d.rows(), 48);
    assert!(is_scff(&d.matrix, &h, 2, EX).unwrap().holds);
    assert!(naive_scff(&d.matrix, &h, 2));
}

#[test]
fn greedy_strong_colouring_designs_on_small_random_hypergraphs() {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    let mut built = 0;
    while built < 12 {
        let h = common::random_hypergraph(&mut rng, 10, 5);
        if !h.spans() {
            continue;
        }
        built += 1;
        let d = colouring_scff_r(&h, 2).unwrap();
        assert!(is_scff(&d.matrix, &h, 2, EX).unwrap().holds);
        assert!(naive_scff(&d.matrix, &h, 2));
    }
}

#[test]
fn grid_design_on_small_grids() {
    for side in [12, 18] {
        let h = gen_grid(side, 3).unwrap();
        let d = grid_scff(&h).unwrap();
        let classes = grid_strong_colouring(&h).unwrap();
        assert!(classes.is_strong(&h));
        let edge_rows = d.row_origin.iter().filter(|o| o.part == Part::EdgeCode).count();
        let item_rows = d.rows() - edge_rows;
        assert_eq!(item_rows % 9, 0);
        assert!(is_scff(&d.matrix, &h, 2, EX).unwrap().holds, "side {side}");
    }
}

#[test]
fn grid_design_on_the_stadium() {
    let h = gen_grid(66, 3).unwrap();
    assert_eq!((h.n(), h.m()), (4356, 4096));
    let c = grid_strong_colouring(&h).unwrap();
    assert_eq!(c.num_colours(), 36);
    assert!(c.classes().iter().all(|cl| cl.len() <= 121));
    let d = grid_scff(&h).unwrap();
    assert_eq!(d.rows(), 1008);
}

#[test]
fn products_keep_strength() {
    let two = [explicit_2cff_9_12(), identity_cff(3).unwrap(), best_cff(2, 5).unwrap()];
    for a in &two {
        for b in &two {
            let c = kron_cff(a, b).unwrap();
            assert!(is_d_cff(&c.matrix, 2, EX).unwrap().holds);
        }
    }
    let ones = [sperner_cff(12).unwrap(), sperner_cff(3).unwrap(), sperner_cff(5).unwrap()];
    for a1 in &two {
        for a2 in &two {
            for b in ones.iter().filter(|b| b.cols() == a2.cols()) {
                let c = dsum_cff(a1, a2, b).unwrap();
                assert_eq!(c.rows(), b.rows() * a1.rows() + a2.rows());
                assert!(is_d_cff(&c.matrix, 2, EX).unwrap().holds);
            }
        }
    }
}

#[test]
fn registry_picks_verified_families() {
    for d in 1..=3 {
        for m in [2, 5, 12, 20, 40] {
            let c = best_cff(d, m).unwrap();
            assert_eq!(c.cols(), m);
            assert!(c.rows() <= m);
            assert!(is_d_cff(&c.matrix, d.min(m - 1), CheckMode::Auto).unwrap().holds, "d = {d}, m = {m}");
        }
    }
    assert_eq!(best_cff(2, 121).unwrap().rows(), 25);
}

#[test]
fn constructions_reject_bad_input() {
    let mixed = Hypergraph::new(5, vec![vec![0, 1], vec![2, 3, 4]]).unwrap();
    assert!(kron_scff_with(&mixed, &explicit_2cff_9_12()).is_err());
    let overlapping = Hypergraph::new(3, vec![vec![0, 1], vec![1, 2]]).unwrap();
    assert!(sperner_scff(&overlapping).is_err());
    assert!(grid_scff(&gen_grid(10, 3).unwrap()).is_err());
    assert!(grid_scff(&gen_disjoint(4, 9).unwrap()).is_err());
    assert!(Field::new(6).is_err());
}
