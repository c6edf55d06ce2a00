//! Clique factorization of functions that are Markov with respect to a graph.
//!
//! A function satisfies `Δ_i Δ_j f ≡ 0` for every non-adjacent pair `i, j`
//! exactly when it is a sum of terms `g_A(x_A)` over complete subsets `A`.
//! [`mobius_decompose`] produces those terms through Möbius inversion of
//! `V_A(x_A) = f(x_A, x⁰_{-A})`; [`reconstruct`] sums them back.

use std::collections::BTreeMap;

use crate::diff::{second_difference, BasePoint};
use crate::domain::{CategoricalDomain, VariableSubset};
use crate::error::{Error, Result};
use crate::graph::UndirectedGraph;
use crate::scalar::Scalar;
use crate::table::TabularFunction;

/// Largest `n` for which all `2^n` subsets are enumerated.
pub const MAX_SUBSET_VARIABLES: usize = 20;

/// `f = Σ_A g_A(x_A)`, with each `g_A` stored as a table over `X_A`.
#[derive(Clone, Debug, PartialEq)]
pub struct CliqueFactorization<T> {
    domain: CategoricalDomain,
    terms: BTreeMap<VariableSubset, TabularFunction<T>>,
    basepoint: BasePoint,
}

impl<T: Scalar> CliqueFactorization<T> {
    /// Checks that every term is shaped like the marginal domain of its key.
    pub fn new(
        domain: CategoricalDomain,
        terms: BTreeMap<VariableSubset, TabularFunction<T>>,
        basepoint: BasePoint,
    ) -> Result<Self> {
        basepoint.check(&domain)?;
        for (a, g) in &terms {
            let expected = domain.marginal(a)?;
            if !expected.same_shape(g.domain()) {
                return Err(Error::Domain(format!(
                    "term {a} has shape {:?}, expected {:?}",
                    g.domain().cardinalities(),
                    expected.cardinalities()
                )));
            }
        }
        Ok(CliqueFactorization {
            domain,
            terms,
            basepoint,
        })
    }

    pub fn domain(&self) -> &CategoricalDomain {
        &self.domain
    }

    pub fn terms(&self) -> &BTreeMap<VariableSubset, TabularFunction<T>> {
        &self.terms
    }

    pub fn term(&self, a: &VariableSubset) -> Option<&TabularFunction<T>> {
        self.terms.get(a)
    }

    pub fn basepoint(&self) -> &BasePoint {
        &self.basepoint
    }

    /// Drops terms whose largest magnitude is at most `threshold`.
    pub fn pruned(mut self, threshold: &T) -> Self {
        self.terms.retain(|_, g| g.max_abs() > *threshold);
        self
    }

    /// Keys of terms that are not identically zero within `tol` but whose
    /// variables are not complete in `graph`.
    pub fn incomplete_support(&self, graph: &UndirectedGraph, tol: &T) -> Vec<VariableSubset> {
        self.terms
            .iter()
            .filter(|(a, g)| !graph.is_complete(a) && g.max_abs() > *tol)
            .map(|(a, _)| a.clone())
            .collect()
    }
}

/// A non-adjacent pair whose second difference does not vanish.
#[derive(Clone, Debug, PartialEq)]
pub struct PairViolation<T> {
    pub i: usize,
    pub j: usize,
    pub max_abs: T,
}

fn check_graph<T: Scalar>(f: &TabularFunction<T>, g: &UndirectedGraph) -> Result<()> {
    if f.domain().n() != g.n() {
        return Err(Error::Dimension {
            expected: f.domain().n(),
            got: g.n(),
        });
    }
    Ok(())
}

/// `max |Δ_i Δ_j f|` for every non-adjacent pair, centred at the origin.
pub fn pairwise_second_differences<T: Scalar>(
    f: &TabularFunction<T>,
    g: &UndirectedGraph,
) -> Result<Vec<PairViolation<T>>> {
    check_graph(f, g)?;
    let x0 = BasePoint::origin(f.domain());
    g.non_adjacent_pairs()
        .into_iter()
        .map(|(i, j)| {
            let d = second_difference(
                f,
                &VariableSubset::singleton(i),
                &VariableSubset::singleton(j),
                &x0,
            )?;
            Ok(PairViolation {
                i,
                j,
                max_abs: d.max_abs(),
            })
        })
        .collect()
}

/// Non-adjacent pairs with `max |Δ_i Δ_j f| > tol`.
pub fn markov_violations<T: Scalar>(
    f: &TabularFunction<T>,
    g: &UndirectedGraph,
    tol: &T,
) -> Result<Vec<PairViolation<T>>> {
    Ok(pairwise_second_differences(f, g)?
        .into_iter()
        .filter(|v| v.max_abs > *tol)
        .collect())
}

/// Whether `Δ_i Δ_j f ≡ 0` within `tol` for every non-adjacent pair, i.e.
/// whether `f` belongs to the Markov function space of `g`.
pub fn markov_membership<T: Scalar>(
    f: &TabularFunction<T>,
    g: &UndirectedGraph,
    tol: &T,
) -> Result<bool> {
    Ok(markov_violations(f, g, tol)?.is_empty())
}

/// Cross-check of [`markov_membership`]: tests `Δ_A Δ_B f ≡ 0` for every
/// pair of disjoint non-empty `A, B` separated by the rest of the nodes.
/// Cost is `O(3^n)` second differences, so `n` is capped at 10.
pub fn markov_membership_exhaustive<T: Scalar>(
    f: &TabularFunction<T>,
    g: &UndirectedGraph,
    tol: &T,
) -> Result<bool> {
    check_graph(f, g)?;
    let n = g.n();
    if n > 10 {
        return Err(Error::Guard {
            what: "variables for exhaustive separation check",
            size: n as u128,
            limit: 10,
        });
    }
    let x0 = BasePoint::origin(f.domain());
    for ma in 1u64..1 << n {
        for mb in 1u64..1 << n {
            if ma & mb != 0 || ma > mb {
                continue;
            }
            let a = VariableSubset::from_mask(ma, n);
            let b = VariableSubset::from_mask(mb, n);
            let rest = a.union(&b).complement(n);
            if !g.separates(&a, &b, &rest)? {
                continue;
            }
            if second_difference(f, &a, &b, &x0)?.max_abs() > *tol {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// How [`mobius_decompose_with`] chooses and filters terms.
#[derive(Clone, Debug)]
pub struct DecomposeOptions<'g, T> {
    /// Drop terms with `max |g_A| <= threshold`.
    pub prune: Option<T>,
    /// Only compute terms for subsets of the maximal cliques of this graph.
    /// Valid when the caller knows `f` is Markov with respect to it, since
    /// every other term is then zero.
    pub restrict_to: Option<&'g UndirectedGraph>,
}

impl<T> Default for DecomposeOptions<'_, T> {
    fn default() -> Self {
        DecomposeOptions {
            prune: None,
            restrict_to: None,
        }
    }
}

/// Möbius decomposition over all `2^n` subsets, without pruning.
pub fn mobius_decompose<T: Scalar>(
    f: &TabularFunction<T>,
    x0: &BasePoint,
) -> Result<CliqueFactorization<T>> {
    mobius_decompose_with(f, x0, &DecomposeOptions::default())
}

/// `g_A(x_A) = Σ_{B ⊆ A} (-1)^{|A∖B|} f(x_B, x⁰_{-B})`.
pub fn mobius_decompose_with<T: Scalar>(
    f: &TabularFunction<T>,
    x0: &BasePoint,
    opts: &DecomposeOptions<'_, T>,
) -> Result<CliqueFactorization<T>> {
    let domain = f.domain();
    x0.check(domain)?;
    let n = domain.n();
    let subsets: Vec<VariableSubset> = match opts.restrict_to {
        Some(g) => {
            check_graph(f, g)?;
            let mut all: Vec<VariableSubset> = g
                .maximal_cliques()
                .iter()
                .flat_map(|c| c.subsets().collect::<Vec<_>>())
                .collect();
            all.push(VariableSubset::empty());
            all.sort();
            all.dedup();
            all
        }
        None => {
            if n > MAX_SUBSET_VARIABLES {
                return Err(Error::Guard {
                    what: "variables for subset enumeration",
                    size: n as u128,
                    limit: MAX_SUBSET_VARIABLES as u128,
                });
            }
            (0u64..1 << n)
                .map(|m| VariableSubset::from_mask(m, n))
                .collect()
        }
    };

    let strides = domain.strides();
    let base: Vec<usize> = x0.values().to_vec();
    let base_offset: usize = base.iter().zip(strides).map(|(v, s)| v * s).sum();

    let mut terms = BTreeMap::new();
    for a in subsets {
        let adom = domain.marginal(&a)?;
        let members = a.as_slice();
        let k = members.len();
        let g = TabularFunction::from_fn(adom, |xa| {
            let mut acc = T::zero();
            // B ranges over subsets of A; cell is x_B on B and x⁰ elsewhere.
            for mb in 0u64..1 << k {
                let mut idx = base_offset;
                for (bit, (&i, &v)) in members.iter().zip(xa).enumerate() {
                    if mb >> bit & 1 == 1 {
                        idx = idx + v * strides[i] - base[i] * strides[i];
                    }
                }
                let value = f.at(idx).clone();
                if (k - mb.count_ones() as usize).is_multiple_of(2) {
                    acc = acc + value;
                } else {
                    acc = acc - value;
                }
            }
            acc
        });
        terms.insert(a, g);
    }

    let fac = CliqueFactorization {
        domain: domain.clone(),
        terms,
        basepoint: x0.clone(),
    };
    Ok(match &opts.prune {
        Some(t) => fac.pruned(t),
        None => fac,
    })
}

/// Pointwise sum of every term broadcast over the full domain.
pub fn reconstruct<T: Scalar>(fac: &CliqueFactorization<T>) -> Result<TabularFunction<T>> {
    let domain = fac.domain();
    let mut values = vec![T::zero(); domain.size()];
    let marginals: Vec<(&VariableSubset, CategoricalDomain, &TabularFunction<T>)> = fac
        .terms
        .iter()
        .map(|(a, g)| Ok((a, domain.marginal(a)?, g)))
        .collect::<Result<_>>()?;
    domain.for_each_cell(|idx, x| {
        for (a, mdom, g) in &marginals {
            let j = domain.project_index(x, a, mdom);
            values[idx] = values[idx].clone() + g.at(j).clone();
        }
    });
    TabularFunction::new(domain.clone(), values)
}
