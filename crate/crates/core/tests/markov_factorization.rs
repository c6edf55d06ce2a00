mod common;

use common::{clique_sum, int_clique_sum, random_basepoint, random_graph, rng, vs};
use discrim_core::{
    markov_membership, markov_membership_exhaustive, markov_violations, mobius_decompose,
    mobius_decompose_with, reconstruct, BasePoint, CategoricalDomain, DecomposeOptions,
    TabularFunction, UndirectedGraph,
};
use rand::Rng;

fn graphs4() -> Vec<(&'static str, UndirectedGraph)> {
    vec![
        ("cycle", UndirectedGraph::cycle(4)),
        ("path", UndirectedGraph::path(4)),
        ("star", UndirectedGraph::star(4)),
        ("complete", UndirectedGraph::complete(4)),
    ]
}

fn mixed_domain(r: &mut impl Rng, n: usize) -> CategoricalDomain {
    CategoricalDomain::new((0..n).map(|_| r.gen_range(2..=3)).collect()).unwrap()
}

#[test]
fn clique_sums_round_trip() {
    let mut r = rng(5);
    for (name, g) in graphs4() {
        for _ in 0..50 {
            let d = mixed_domain(&mut r, 4);
            let f = clique_sum(&mut r, &g, &d, 3.0);
            assert!(markov_membership(&f, &g, &1e-9).unwrap(), "{name}");
            let x0 = random_basepoint(&mut r, &d);
            let fac = mobius_decompose(&f, &x0).unwrap();
            assert!(fac.incomplete_support(&g, &1e-9).is_empty(), "{name}");
            assert!(reconstruct(&fac).unwrap().approx_eq(&f, &1e-12), "{name}");
        }
    }
}

#[test]
fn integer_round_trip_is_exact() {
    let mut r = rng(6);
    for (_, g) in graphs4() {
        for _ in 0..50 {
            let d = mixed_domain(&mut r, 4);
            let f = int_clique_sum(&mut r, &g, &d, 20);
            assert!(markov_violations(&f, &g, &0).unwrap().is_empty());
            let fac = mobius_decompose(&f, &random_basepoint(&mut r, &d)).unwrap();
            assert!(fac.incomplete_support(&g, &0).is_empty());
            assert_eq!(reconstruct(&fac).unwrap(), f);
            // Terms vanish on the base slice.
            for (a, term) in fac.terms() {
                if a.is_empty() {
                    continue;
                }
                let zero_at: Vec<usize> = a.iter().map(|i| fac.basepoint().values()[i]).collect();
                for (k, v) in term.values().iter().enumerate() {
                    let xa = term.domain().unindex(k).unwrap();
                    if xa.values().iter().zip(&zero_at).any(|(p, q)| p == q) {
                        assert_eq!(*v, 0);
                    }
                }
            }
        }
    }
}

#[test]
fn restricted_decomposition_matches_full() {
    let mut r = rng(7);
    for (_, g) in graphs4() {
        let d = mixed_domain(&mut r, 4);
        let f = int_clique_sum(&mut r, &g, &d, 9);
        let x0 = BasePoint::origin(&d);
        let full = mobius_decompose_with(
            &f,
            &x0,
            &DecomposeOptions {
                prune: Some(0),
                restrict_to: None,
            },
        )
        .unwrap();
        let restricted = mobius_decompose_with(
            &f,
            &x0,
            &DecomposeOptions {
                prune: Some(0),
                restrict_to: Some(&g),
            },
        )
        .unwrap();
        assert_eq!(full.terms(), restricted.terms());
    }
}

#[test]
fn interaction_outside_cliques_is_detected() {
    let d = CategoricalDomain::binary(3).unwrap();
    let g = UndirectedGraph::path(3);
    let f = TabularFunction::from_fn(d, |x| (x[0] * x[2]) as i64);
    let v = markov_violations(&f, &g, &0).unwrap();
    assert_eq!(v.len(), 1);
    assert_eq!((v[0].i, v[0].j, v[0].max_abs), (0, 2, 1));
    let fac = mobius_decompose(&f, &BasePoint::origin(f.domain())).unwrap();
    assert_eq!(fac.incomplete_support(&g, &0), vec![vs(&[0, 2])]);
}

#[test]
fn pairwise_and_separation_modes_agree() {
    // Pairwise and global Markov conditions coincide for positive laws;
    // for log-odds they coincide as statements about second differences.
    let mut r = rng(8);
    for _ in 0..60 {
        let n = r.gen_range(2..=4);
        let g = random_graph(&mut r, n, 0.5);
        let h = random_graph(&mut r, n, 0.5);
        let d = CategoricalDomain::new((0..n).map(|_| r.gen_range(2..=3)).collect()).unwrap();
        let f = int_clique_sum(&mut r, &h, &d, 5);
        assert_eq!(
            markov_membership(&f, &g, &0).unwrap(),
            markov_membership_exhaustive(&f, &g, &0).unwrap()
        );
    }
}
