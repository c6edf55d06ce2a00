//! Finite product domains, assignments and variable subsets.
//!
//! Cells are laid out row-major with the last variable varying fastest:
//! `index = Σ x[i] * stride[i]`, `stride[n-1] = 1`,
//! `stride[i] = stride[i+1] * card[i+1]`. Serialized tables depend on this
//! order, so it never changes.

use std::fmt;
use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The product space of `n` categorical variables.
///
/// Variables with a single category are allowed; they are vacuous.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CategoricalDomain {
    cards: Vec<usize>,
    strides: Vec<usize>,
    size: usize,
    labels: Option<Vec<Vec<String>>>,
}

impl CategoricalDomain {
    pub fn new(cardinalities: Vec<usize>) -> Result<Self> {
        if cardinalities.is_empty() {
            return Err(Error::Domain("a domain needs at least one variable".into()));
        }
        Self::build(cardinalities, None)
    }

    /// Domain with category names for each variable; `labels[i].len()` must
    /// equal `cardinalities[i]`.
    pub fn with_labels(cardinalities: Vec<usize>, labels: Vec<Vec<String>>) -> Result<Self> {
        if cardinalities.is_empty() {
            return Err(Error::Domain("a domain needs at least one variable".into()));
        }
        if labels.len() != cardinalities.len() {
            return Err(Error::Dimension {
                expected: cardinalities.len(),
                got: labels.len(),
            });
        }
        for (i, (l, &c)) in labels.iter().zip(&cardinalities).enumerate() {
            if l.len() != c {
                return Err(Error::Domain(format!(
                    "variable {i} has {c} categories but {} labels",
                    l.len()
                )));
            }
        }
        Self::build(cardinalities, Some(labels))
    }

    /// Shorthand for a domain of `n` binary variables.
    pub fn binary(n: usize) -> Result<Self> {
        Self::new(vec![2; n])
    }

    fn build(cards: Vec<usize>, labels: Option<Vec<Vec<String>>>) -> Result<Self> {
        if let Some(i) = cards.iter().position(|&c| c == 0) {
            return Err(Error::Domain(format!("variable {i} has zero categories")));
        }
        let mut strides = vec![1usize; cards.len()];
        let mut size = 1usize;
        for i in (0..cards.len()).rev() {
            strides[i] = size;
            size = size
                .checked_mul(cards[i])
                .ok_or_else(|| Error::Domain("domain size overflows the index range".into()))?;
        }
        Ok(CategoricalDomain {
            cards,
            strides,
            size,
            labels,
        })
    }

    /// Number of variables.
    pub fn n(&self) -> usize {
        self.cards.len()
    }

    pub fn cardinalities(&self) -> &[usize] {
        &self.cards
    }

    pub fn cardinality(&self, i: usize) -> usize {
        self.cards[i]
    }

    pub fn strides(&self) -> &[usize] {
        &self.strides
    }

    /// Total number of cells, `∏ card[i]`.
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn labels(&self) -> Option<&[Vec<String>]> {
        self.labels.as_deref()
    }

    /// Same cardinalities; labels are ignored.
    pub fn same_shape(&self, other: &CategoricalDomain) -> bool {
        self.cards == other.cards
    }

    pub fn check_assignment(&self, x: &[usize]) -> Result<()> {
        if x.len() != self.n() {
            return Err(Error::Dimension {
                expected: self.n(),
                got: x.len(),
            });
        }
        for (i, (&v, &c)) in x.iter().zip(&self.cards).enumerate() {
            if v >= c {
                return Err(Error::Index {
                    variable: i,
                    value: v,
                    cardinality: c,
                });
            }
        }
        Ok(())
    }

    pub fn check_subset(&self, a: &VariableSubset) -> Result<()> {
        match a.iter().find(|&i| i >= self.n()) {
            Some(i) => Err(Error::Subset(format!(
                "index {i} out of range for {} variables",
                self.n()
            ))),
            None => Ok(()),
        }
    }

    pub fn flat_index(&self, x: &[usize]) -> Result<usize> {
        self.check_assignment(x)?;
        Ok(self.flat_index_unchecked(x))
    }

    pub(crate) fn flat_index_unchecked(&self, x: &[usize]) -> usize {
        x.iter().zip(&self.strides).map(|(v, s)| v * s).sum()
    }

    /// Inverse of [`flat_index`](Self::flat_index).
    pub fn unindex(&self, index: usize) -> Result<Assignment> {
        if index >= self.size {
            return Err(Error::Index {
                variable: 0,
                value: index,
                cardinality: self.size,
            });
        }
        let mut rest = index;
        let values = self
            .strides
            .iter()
            .map(|s| {
                let v = rest / s;
                rest %= s;
                v
            })
            .collect();
        Ok(Assignment(values))
    }

    /// Domain of the variables in `a`, in subset order. The empty subset
    /// gives the zero-variable domain with a single cell.
    pub fn marginal(&self, a: &VariableSubset) -> Result<CategoricalDomain> {
        self.check_subset(a)?;
        let cards = a.iter().map(|i| self.cards[i]).collect();
        let labels = self
            .labels
            .as_ref()
            .map(|l| a.iter().map(|i| l[i].clone()).collect());
        Self::build(cards, labels)
    }

    /// Index of `x_A` inside the marginal domain of `a`.
    pub(crate) fn project_index(
        &self,
        x: &[usize],
        a: &VariableSubset,
        marginal: &CategoricalDomain,
    ) -> usize {
        a.iter()
            .zip(marginal.strides())
            .map(|(i, s)| x[i] * s)
            .sum()
    }

    /// Walks every cell in flat order, yielding `(flat index, assignment)`.
    pub fn for_each_cell(&self, mut visit: impl FnMut(usize, &[usize])) {
        let mut x = vec![0usize; self.n()];
        for idx in 0..self.size {
            visit(idx, &x);
            advance(&mut x, &self.cards);
        }
    }

    /// Iterator over all assignments in flat order.
    pub fn cells(&self) -> Cells<'_> {
        Cells {
            domain: self,
            next: (self.size > 0).then(|| vec![0; self.n()]),
        }
    }
}

/// Odometer step, last coordinate fastest. Returns `false` on wrap-around.
pub(crate) fn advance(x: &mut [usize], cards: &[usize]) -> bool {
    for i in (0..x.len()).rev() {
        x[i] += 1;
        if x[i] < cards[i] {
            return true;
        }
        x[i] = 0;
    }
    false
}

pub struct Cells<'a> {
    domain: &'a CategoricalDomain,
    next: Option<Vec<usize>>,
}

impl Iterator for Cells<'_> {
    type Item = Assignment;

    fn next(&mut self) -> Option<Assignment> {
        let current = self.next.take()?;
        let mut following = current.clone();
        if advance(&mut following, &self.domain.cards) {
            self.next = Some(following);
        }
        Some(Assignment(current))
    }
}

/// One category index per variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Assignment(Vec<usize>);

impl Assignment {
    pub fn new(values: Vec<usize>) -> Self {
        Assignment(values)
    }

    pub fn zeros(n: usize) -> Self {
        Assignment(vec![0; n])
    }

    pub fn values(&self) -> &[usize] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<usize> {
        self.0
    }

    /// The coordinates in `a`, in subset order.
    pub fn project(&self, a: &VariableSubset) -> Vec<usize> {
        a.iter().map(|i| self.0[i]).collect()
    }
}

impl Deref for Assignment {
    type Target = [usize];

    fn deref(&self) -> &[usize] {
        &self.0
    }
}

impl From<Vec<usize>> for Assignment {
    fn from(v: Vec<usize>) -> Self {
        Assignment(v)
    }
}

/// A sorted, duplicate-free set of variable indices.
///
/// The derived ordering compares sorted member lists lexicographically,
/// which is the order cliques are reported and swept in.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct VariableSubset(Vec<usize>);

impl VariableSubset {
    /// Sorts `indices`; duplicates are rejected.
    pub fn new(indices: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut v: Vec<usize> = indices.into_iter().collect();
        v.sort_unstable();
        if v.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Subset(format!("duplicate index in {v:?}")));
        }
        Ok(VariableSubset(v))
    }

    pub fn empty() -> Self {
        VariableSubset(Vec::new())
    }

    pub fn singleton(i: usize) -> Self {
        VariableSubset(vec![i])
    }

    /// `{0, …, n-1}`.
    pub fn full(n: usize) -> Self {
        VariableSubset((0..n).collect())
    }

    /// Subset whose members are the set bits of `mask`.
    pub fn from_mask(mask: u64, n: usize) -> Self {
        VariableSubset((0..n).filter(|&i| mask >> i & 1 == 1).collect())
    }

    pub fn to_mask(&self) -> u64 {
        self.0.iter().fold(0u64, |m, &i| m | 1 << i)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    /// Position of variable `i` inside the subset.
    pub fn position(&self, i: usize) -> Option<usize> {
        self.0.binary_search(&i).ok()
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut v: Vec<usize> = self.0.iter().chain(&other.0).copied().collect();
        v.sort_unstable();
        v.dedup();
        VariableSubset(v)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        VariableSubset(self.iter().filter(|&i| other.contains(i)).collect())
    }

    pub fn difference(&self, other: &Self) -> Self {
        VariableSubset(self.iter().filter(|&i| !other.contains(i)).collect())
    }

    /// `{0, …, n-1} \ self`.
    pub fn complement(&self, n: usize) -> Self {
        VariableSubset((0..n).filter(|&i| !self.contains(i)).collect())
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.iter().all(|i| other.contains(i))
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.iter().all(|i| !other.contains(i))
    }

    /// All subsets in mask order (`∅` first, `self` last).
    pub fn subsets(&self) -> impl Iterator<Item = VariableSubset> + '_ {
        let k = self.len();
        (0u64..1 << k).map(move |m| {
            VariableSubset(
                (0..k)
                    .filter(|&b| m >> b & 1 == 1)
                    .map(|b| self.0[b])
                    .collect(),
            )
        })
    }
}

impl TryFrom<Vec<usize>> for VariableSubset {
    type Error = Error;

    fn try_from(v: Vec<usize>) -> Result<Self> {
        VariableSubset::new(v)
    }
}

impl From<VariableSubset> for Vec<usize> {
    fn from(s: VariableSubset) -> Self {
        s.0
    }
}

impl fmt::Display for VariableSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}
