//! Expressiveness of Markov classifiers: decision functions, XOR patterns,
//! the dimension of the Markov function space and the resulting bound on the
//! number of representable decisions.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::domain::{advance, CategoricalDomain, VariableSubset};
use crate::error::{Error, Result};
use crate::graph::UndirectedGraph;
use crate::rank::exact_rank;
use crate::scalar::Scalar;
use crate::table::TabularFunction;

/// Search-space cap for [`contains_xor`].
pub const XOR_SEARCH_LIMIT: u128 = 100_000_000;
/// Cell cap for [`dim_fg`].
pub const DIM_CELL_LIMIT: u128 = 1_000_000;
/// Cap on `cells × indicator columns` for [`dim_fg`].
pub const DIM_ENTRY_LIMIT: u128 = 100_000_000;

/// A binary decision `φ: X → {-1, +1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecisionFunction {
    domain: CategoricalDomain,
    signs: Vec<i8>,
}

impl DecisionFunction {
    pub fn new(domain: CategoricalDomain, signs: Vec<i8>) -> Result<Self> {
        if signs.len() != domain.size() {
            return Err(Error::Dimension {
                expected: domain.size(),
                got: signs.len(),
            });
        }
        if let Some(cell) = signs.iter().position(|&s| s != 1 && s != -1) {
            return Err(Error::Format(format!(
                "decision value at cell {cell} is not ±1"
            )));
        }
        Ok(DecisionFunction { domain, signs })
    }

    pub fn from_fn(domain: CategoricalDomain, mut f: impl FnMut(&[usize]) -> i8) -> Result<Self> {
        let mut signs = Vec::with_capacity(domain.size());
        domain.for_each_cell(|_, x| signs.push(f(x)));
        Self::new(domain, signs)
    }

    pub fn domain(&self) -> &CategoricalDomain {
        &self.domain
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn get(&self, x: &[usize]) -> Result<i8> {
        Ok(self.signs[self.domain.flat_index(x)?])
    }
}

/// Entrywise sign with `sign(0) = +1`.
pub fn sign_of<T: Scalar>(f: &TabularFunction<T>) -> DecisionFunction {
    DecisionFunction {
        domain: f.domain().clone(),
        signs: f
            .values()
            .iter()
            .map(|v| if *v >= T::zero() { 1 } else { -1 })
            .collect(),
    }
}

/// Location of an `A`-XOR: on the slice `x_{-A} = context`, restricted to
/// the grid `∏_{i∈A} {dots[i], ddots[i]}`, `φ = ∏_{i∈A} (-1)^{[x_i = dots[i]]}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XorWitness {
    pub vars: VariableSubset,
    /// Values of the variables outside `vars`, in increasing variable order.
    pub context: Vec<usize>,
    /// Per member of `vars`, the category counted as a sign flip.
    pub dots: Vec<usize>,
    /// Per member of `vars`, the other category.
    pub ddots: Vec<usize>,
}

impl XorWitness {
    /// Full assignment at the grid corner selected by `mask` (bit `k` set:
    /// member `k` takes its `dots` value).
    pub fn corner(&self, n: usize, mask: u64) -> Vec<usize> {
        let mut x = vec![0; n];
        for (i, &v) in self.vars.complement(n).iter().zip(&self.context) {
            x[i] = v;
        }
        for (k, i) in self.vars.iter().enumerate() {
            x[i] = if mask >> k & 1 == 1 {
                self.dots[k]
            } else {
                self.ddots[k]
            };
        }
        x
    }

    /// Re-checks the parity pattern on every corner of the grid.
    pub fn verify(&self, phi: &DecisionFunction) -> bool {
        let n = phi.domain().n();
        if self.context.len() + self.vars.len() != n
            || self.dots.len() != self.vars.len()
            || self.ddots.len() != self.vars.len()
            || self.dots.iter().zip(&self.ddots).any(|(a, b)| a == b)
        {
            return false;
        }
        (0u64..1 << self.vars.len()).all(|mask| {
            let expected = if mask.count_ones() % 2 == 0 { 1 } else { -1 };
            phi.get(&self.corner(n, mask)).ok() == Some(expected)
        })
    }
}

/// Exhaustive search for an `A`-XOR in `phi`.
///
/// Contexts are scanned in flat-index order and the per-variable ordered
/// category pairs lexicographically; the first witness found is returned.
pub fn contains_xor(phi: &DecisionFunction, a: &VariableSubset) -> Result<Option<XorWitness>> {
    let domain = phi.domain();
    domain.check_subset(a)?;
    if a.is_empty() {
        return Err(Error::Subset("XOR search needs a non-empty subset".into()));
    }
    let n = domain.n();
    let rest = a.complement(n);
    let cards = domain.cardinalities();
    let rest_cards: Vec<usize> = rest.iter().map(|i| cards[i]).collect();

    let search: u128 = rest_cards.iter().map(|&c| c as u128).product::<u128>()
        * a.iter()
            .map(|i| (cards[i] * (cards[i] - 1)) as u128)
            .product::<u128>();
    if search > XOR_SEARCH_LIMIT {
        return Err(Error::Guard {
            what: "XOR search space",
            size: search,
            limit: XOR_SEARCH_LIMIT,
        });
    }
    if search == 0 {
        return Ok(None);
    }

    // Ordered pairs (dot, ddot) with dot != ddot, lexicographic.
    let pairs: Vec<Vec<(usize, usize)>> = a
        .iter()
        .map(|i| {
            let c = cards[i];
            (0..c)
                .flat_map(|p| (0..c).map(move |q| (p, q)))
                .filter(|(p, q)| p != q)
                .collect()
        })
        .collect();
    let pair_counts: Vec<usize> = pairs.iter().map(Vec::len).collect();
    let strides = domain.strides();
    let members = a.as_slice();
    let k = members.len();

    let mut context = vec![0usize; rest.len()];
    loop {
        let base: usize = rest.iter().zip(&context).map(|(i, v)| v * strides[i]).sum();
        let mut choice = vec![0usize; k];
        loop {
            let hit = (0u64..1 << k).all(|mask| {
                let idx = base
                    + members
                        .iter()
                        .enumerate()
                        .map(|(b, &i)| {
                            let (dot, ddot) = pairs[b][choice[b]];
                            (if mask >> b & 1 == 1 { dot } else { ddot }) * strides[i]
                        })
                        .sum::<usize>();
                let expected = if mask.count_ones() % 2 == 0 { 1 } else { -1 };
                phi.signs[idx] == expected
            });
            if hit {
                return Ok(Some(XorWitness {
                    vars: a.clone(),
                    context: context.clone(),
                    dots: (0..k).map(|b| pairs[b][choice[b]].0).collect(),
                    ddots: (0..k).map(|b| pairs[b][choice[b]].1).collect(),
                }));
            }
            if !advance(&mut choice, &pair_counts) {
                break;
            }
        }
        if !advance(&mut context, &rest_cards) {
            return Ok(None);
        }
    }
}

/// Every subset of size `1..=max_order` containing an XOR, ordered by size
/// and then lexicographically, each with its witness.
///
/// The result is downward closed; a violation is reported as
/// [`Error::Inconsistent`].
pub fn xor_scan(
    phi: &DecisionFunction,
    max_order: usize,
) -> Result<Vec<(VariableSubset, XorWitness)>> {
    let n = phi.domain().n();
    if max_order > n {
        return Err(Error::Subset(format!(
            "max order {max_order} exceeds {n} variables"
        )));
    }
    if n >= 64 {
        return Err(Error::Guard {
            what: "variables for XOR scan",
            size: n as u128,
            limit: 63,
        });
    }
    let mut candidates: Vec<VariableSubset> = (1u64..1 << n)
        .filter(|m| (m.count_ones() as usize) <= max_order)
        .map(|m| VariableSubset::from_mask(m, n))
        .collect();
    candidates.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));

    let mut found = Vec::new();
    for a in candidates {
        if let Some(w) = contains_xor(phi, &a)? {
            found.push((a, w));
        }
    }
    for (a, _) in &found {
        for i in a.iter() {
            let sub = a.difference(&VariableSubset::singleton(i));
            if !sub.is_empty() && !found.iter().any(|(b, _)| *b == sub) {
                return Err(Error::Inconsistent(format!(
                    "XOR set contains {a} but not its subset {sub}"
                )));
            }
        }
    }
    Ok(found)
}

fn check_graph_domain(g: &UndirectedGraph, domain: &CategoricalDomain) -> Result<()> {
    if g.n() != domain.n() {
        return Err(Error::Dimension {
            expected: domain.n(),
            got: g.n(),
        });
    }
    Ok(())
}

/// Indicator vectors of clique configurations: one row per clique `A` and
/// per `x_A`, one column per cell of the domain.
pub fn clique_indicator_rows(
    g: &UndirectedGraph,
    domain: &CategoricalDomain,
) -> Result<Vec<Vec<i64>>> {
    check_graph_domain(g, domain)?;
    let cliques = g.maximal_cliques();
    let cells = domain.size() as u128;
    let mut columns: u128 = 0;
    for c in &cliques {
        columns += domain.marginal(c)?.size() as u128;
    }
    if cells > DIM_CELL_LIMIT {
        return Err(Error::Guard {
            what: "cells",
            size: cells,
            limit: DIM_CELL_LIMIT,
        });
    }
    if cells * columns > DIM_ENTRY_LIMIT {
        return Err(Error::Guard {
            what: "indicator matrix entries",
            size: cells * columns,
            limit: DIM_ENTRY_LIMIT,
        });
    }
    let mut rows = Vec::with_capacity(columns as usize);
    for c in &cliques {
        let mdom = domain.marginal(c)?;
        let mut block = vec![vec![0i64; domain.size()]; mdom.size()];
        domain.for_each_cell(|idx, x| block[domain.project_index(x, c, &mdom)][idx] = 1);
        rows.extend(block);
    }
    Ok(rows)
}

/// Exact dimension of the space of clique-sum functions on `g`: the rank of
/// the clique-configuration indicator matrix.
pub fn dim_fg(g: &UndirectedGraph, domain: &CategoricalDomain) -> Result<usize> {
    Ok(exact_rank(&clique_indicator_rows(g, domain)?))
}

/// Dimension for a decomposable graph from a clique ordering:
/// `Σ_k |X_{C_k}| - Σ_{k≥2} |X_{S_k}|`. `None` when `g` is not chordal.
pub fn decomposable_dim(g: &UndirectedGraph, domain: &CategoricalDomain) -> Result<Option<usize>> {
    check_graph_domain(g, domain)?;
    let Some(ordering) = g.clique_ordering() else {
        return Ok(None);
    };
    let mut dim = 0usize;
    for (k, (c, s)) in ordering.iter().enumerate() {
        dim += domain.marginal(c)?.size();
        if k > 0 {
            dim -= domain.marginal(s)?.size();
        }
    }
    Ok(Some(dim))
}

/// `2 Σ_{k=0}^{d-1} C(N-1, k)` with `N = |X|`.
pub fn sign_count_bound(cells: usize, dim: usize) -> BigUint {
    if cells == 0 || dim == 0 {
        return BigUint::zero();
    }
    let m = cells - 1;
    let mut binom = BigUint::one();
    let mut sum = BigUint::zero();
    for k in 0..dim.min(m + 1) {
        sum += &binom;
        binom = binom * BigUint::from(m - k) / BigUint::from(k + 1);
    }
    sum * 2u32
}

/// Upper bound on the number of decision functions representable by
/// Markov classifiers on `g`.
pub fn bound_sign_count(g: &UndirectedGraph, domain: &CategoricalDomain) -> Result<BigUint> {
    Ok(sign_count_bound(domain.size(), dim_fg(g, domain)?))
}
