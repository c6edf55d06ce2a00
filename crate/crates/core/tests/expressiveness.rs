mod common;

use common::{clique_sum, random_graph, rng, vs};
use discrim_core::{
    bound_sign_count, contains_xor, decomposable_dim, dim_fg, sign_count_bound, sign_of, xor_scan,
    CategoricalDomain, UndirectedGraph,
};
use num_bigint::BigUint;
use rand::Rng;

#[test]
fn rank_agrees_with_clique_tree_formula_on_chordal_graphs() {
    let mut r = rng(41);
    let mut checked = 0;
    while checked < 40 {
        let n = r.gen_range(1..=5);
        let g = random_graph(&mut r, n, 0.5);
        let d = CategoricalDomain::new((0..n).map(|_| r.gen_range(1..=3)).collect()).unwrap();
        match decomposable_dim(&g, &d).unwrap() {
            Some(k) => {
                assert_eq!(dim_fg(&g, &d).unwrap(), k);
                checked += 1;
            }
            None => assert!(!g.is_decomposable()),
        }
    }
}

#[test]
fn dimension_is_monotone_in_edges() {
    let mut r = rng(42);
    for _ in 0..30 {
        let n = r.gen_range(2..=4);
        let g = random_graph(&mut r, n, 0.4);
        let d = CategoricalDomain::new((0..n).map(|_| r.gen_range(2..=3)).collect()).unwrap();
        let base = dim_fg(&g, &d).unwrap();
        for (i, j) in g.non_adjacent_pairs() {
            assert!(dim_fg(&g.with_edge(i, j).unwrap(), &d).unwrap() >= base);
        }
        assert!(base <= d.size());
        assert_eq!(dim_fg(&UndirectedGraph::complete(n), &d).unwrap(), d.size());
    }
}

#[test]
fn bound_never_exceeds_all_labelings() {
    for cells in 1..12 {
        for dim in 0..=cells {
            let b = sign_count_bound(cells, dim);
            assert!(b <= BigUint::from(1u64) << cells);
        }
        assert_eq!(sign_count_bound(cells, cells), BigUint::from(1u64) << cells);
    }
    let d = CategoricalDomain::binary(4).unwrap();
    assert_eq!(
        bound_sign_count(&UndirectedGraph::cycle(4), &d).unwrap(),
        BigUint::from(45638u32)
    );
}

#[test]
fn markov_decisions_have_no_xor_across_missing_edges() {
    let mut r = rng(43);
    let g = UndirectedGraph::cycle(4);
    let d = CategoricalDomain::binary(4).unwrap();
    for _ in 0..100 {
        let phi = sign_of(&clique_sum(&mut r, &g, &d, 1.0));
        assert!(contains_xor(&phi, &vs(&[0, 2])).unwrap().is_none());
        assert!(contains_xor(&phi, &vs(&[1, 3])).unwrap().is_none());
        for (a, w) in xor_scan(&phi, 4).unwrap() {
            assert!(g.is_complete(&a), "{a}");
            assert!(w.verify(&phi));
        }
    }
}
