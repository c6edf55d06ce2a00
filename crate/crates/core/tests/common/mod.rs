#![allow(dead_code)]

use discrim_core::{
    BasePoint, CategoricalDomain, TabularFunction, UndirectedGraph, VariableSubset,
};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn vs(v: &[usize]) -> VariableSubset {
    VariableSubset::new(v.iter().copied()).unwrap()
}

/// Every assignment of `cards`, last variable fastest.
pub fn all_assignments(cards: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for &c in cards {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..c).map(move |v| {
                    let mut q = p.clone();
                    q.push(v);
                    q
                })
            })
            .collect();
    }
    out
}

pub fn random_domain(r: &mut impl Rng, max_cards: &[usize]) -> CategoricalDomain {
    let n = r.gen_range(1..=max_cards.len());
    CategoricalDomain::new(max_cards[..n].iter().map(|&m| r.gen_range(1..=m)).collect()).unwrap()
}

pub fn random_int_table(
    r: &mut impl Rng,
    d: &CategoricalDomain,
    bound: i64,
) -> TabularFunction<i64> {
    TabularFunction::new(
        d.clone(),
        (0..d.size()).map(|_| r.gen_range(-bound..=bound)).collect(),
    )
    .unwrap()
}

pub fn random_subset(r: &mut impl Rng, n: usize) -> VariableSubset {
    VariableSubset::new((0..n).filter(|_| r.gen_bool(0.5))).unwrap()
}

pub fn random_basepoint(r: &mut impl Rng, d: &CategoricalDomain) -> BasePoint {
    BasePoint::new(
        d,
        d.cardinalities()
            .iter()
            .map(|&c| r.gen_range(0..c))
            .collect(),
    )
    .unwrap()
}

/// `x` with the coordinates in `a` replaced by those of `x0`.
pub fn shifted(x: &[usize], a: &VariableSubset, x0: &[usize]) -> Vec<usize> {
    let mut y = x.to_vec();
    for i in a.iter() {
        y[i] = x0[i];
    }
    y
}

/// Sum of independent random terms, one per maximal clique, evaluated
/// directly from per-clique lookup maps.
pub fn clique_sum(
    r: &mut impl Rng,
    g: &UndirectedGraph,
    d: &CategoricalDomain,
    scale: f64,
) -> TabularFunction<f64> {
    let cards = d.cardinalities();
    let terms: Vec<(Vec<usize>, std::collections::HashMap<Vec<usize>, f64>)> = g
        .maximal_cliques()
        .into_iter()
        .map(|c| {
            let members = c.as_slice().to_vec();
            let sub_cards: Vec<usize> = members.iter().map(|&i| cards[i]).collect();
            let table = all_assignments(&sub_cards)
                .into_iter()
                .map(|k| (k, r.gen_range(-scale..scale)))
                .collect();
            (members, table)
        })
        .collect();
    TabularFunction::from_fn(d.clone(), |x| {
        terms
            .iter()
            .map(|(m, t)| t[&m.iter().map(|&i| x[i]).collect::<Vec<_>>()])
            .sum()
    })
}

/// Same as [`clique_sum`] with integer terms.
pub fn int_clique_sum(
    r: &mut impl Rng,
    g: &UndirectedGraph,
    d: &CategoricalDomain,
    bound: i64,
) -> TabularFunction<i64> {
    let cards = d.cardinalities();
    let terms: Vec<(Vec<usize>, std::collections::HashMap<Vec<usize>, i64>)> = g
        .maximal_cliques()
        .into_iter()
        .map(|c| {
            let members = c.as_slice().to_vec();
            let sub_cards: Vec<usize> = members.iter().map(|&i| cards[i]).collect();
            let table = all_assignments(&sub_cards)
                .into_iter()
                .map(|k| (k, r.gen_range(-bound..=bound)))
                .collect();
            (members, table)
        })
        .collect();
    TabularFunction::from_fn(d.clone(), |x| {
        terms
            .iter()
            .map(|(m, t)| t[&m.iter().map(|&i| x[i]).collect::<Vec<_>>()])
            .sum()
    })
}

pub fn random_graph(r: &mut impl Rng, n: usize, p: f64) -> UndirectedGraph {
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .filter(|_| r.gen_bool(p))
        .collect();
    UndirectedGraph::new(n, edges).unwrap()
}
