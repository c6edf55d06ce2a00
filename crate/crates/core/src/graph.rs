//! Undirected graphs over predictor indices, and DAG moralization.

use std::collections::VecDeque;

use crate::domain::VariableSubset;
use crate::error::{Error, Result};

/// Simple undirected graph on nodes `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UndirectedGraph {
    adj: Vec<Vec<bool>>,
}

impl UndirectedGraph {
    /// Duplicate edges are merged; self-loops and out-of-range endpoints
    /// are rejected.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut g = Self::edgeless(n);
        for (a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::Graph(format!(
                    "edge ({a},{b}) has an endpoint >= {n}"
                )));
            }
            if a == b {
                return Err(Error::Graph(format!("self-loop at node {a}")));
            }
            g.adj[a][b] = true;
            g.adj[b][a] = true;
        }
        Ok(g)
    }

    pub fn edgeless(n: usize) -> Self {
        UndirectedGraph {
            adj: vec![vec![false; n]; n],
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Self::edgeless(n);
        for a in 0..n {
            for b in 0..n {
                g.adj[a][b] = a != b;
            }
        }
        g
    }

    /// `0 – 1 – … – (n-1)`.
    pub fn path(n: usize) -> Self {
        Self::new(n, (1..n).map(|i| (i - 1, i))).expect("valid path")
    }

    /// Path closed into a ring; needs `n >= 3`.
    pub fn cycle(n: usize) -> Self {
        Self::new(n, (0..n).map(|i| (i, (i + 1) % n))).expect("valid cycle")
    }

    /// Node 0 joined to every other node.
    pub fn star(n: usize) -> Self {
        Self::new(n, (1..n).map(|i| (0, i))).expect("valid star")
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a][b]
    }

    /// Edges `(a, b)` with `a < b`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.n();
        (0..n)
            .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
            .filter(|&(a, b)| self.adj[a][b])
            .collect()
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[v]
            .iter()
            .enumerate()
            .filter(|(_, &e)| e)
            .map(|(u, _)| u)
    }

    /// Copy with one more edge.
    pub fn with_edge(&self, a: usize, b: usize) -> Result<Self> {
        let mut g = Self::new(self.n(), [(a, b)])?;
        for (u, v) in self.edges() {
            g.adj[u][v] = true;
            g.adj[v][u] = true;
        }
        Ok(g)
    }

    /// Pairs `i < j` that are not adjacent.
    pub fn non_adjacent_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.n();
        (0..n)
            .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
            .filter(|&(a, b)| !self.adj[a][b])
            .collect()
    }

    fn check_subset(&self, a: &VariableSubset) -> Result<()> {
        match a.iter().find(|&i| i >= self.n()) {
            Some(i) => Err(Error::Subset(format!(
                "node {i} out of range for {} nodes",
                self.n()
            ))),
            None => Ok(()),
        }
    }

    /// Subgraph induced by `a`, relabelled `0..|a|` in subset order.
    pub fn induced(&self, a: &VariableSubset) -> Result<UndirectedGraph> {
        self.check_subset(a)?;
        let nodes = a.as_slice();
        Ok(UndirectedGraph {
            adj: nodes
                .iter()
                .map(|&u| nodes.iter().map(|&v| self.adj[u][v]).collect())
                .collect(),
        })
    }

    /// Every pair in `a` is adjacent. Trivially true for `|a| <= 1`.
    pub fn is_complete(&self, a: &VariableSubset) -> bool {
        let v = a.as_slice();
        v.iter().enumerate().all(|(k, &x)| {
            v[k + 1..]
                .iter()
                .all(|&y| x < self.n() && y < self.n() && self.adj[x][y])
        })
    }

    /// Maximal cliques, each sorted, listed in lexicographic order.
    /// Isolated nodes come out as singletons.
    pub fn maximal_cliques(&self) -> Vec<VariableSubset> {
        if self.n() == 0 {
            return Vec::new();
        }
        let mut out = Vec::new();
        let mut r = Vec::new();
        let p: Vec<usize> = (0..self.n()).collect();
        self.bron_kerbosch(&mut r, p, Vec::new(), &mut out);
        let mut cliques: Vec<VariableSubset> = out
            .into_iter()
            .map(|c| VariableSubset::new(c).expect("clique members are distinct"))
            .collect();
        cliques.sort();
        cliques
    }

    fn bron_kerbosch(
        &self,
        r: &mut Vec<usize>,
        p: Vec<usize>,
        x: Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if p.is_empty() {
            if x.is_empty() {
                out.push(r.clone());
            }
            return;
        }
        // Pivot maximizing |P ∩ N(u)| over P ∪ X.
        let pivot = p
            .iter()
            .chain(&x)
            .copied()
            .max_by_key(|&u| {
                (
                    p.iter().filter(|&&v| self.adj[u][v]).count(),
                    std::cmp::Reverse(u),
                )
            })
            .expect("P is non-empty");
        let candidates: Vec<usize> = p.iter().copied().filter(|&v| !self.adj[pivot][v]).collect();
        let mut p = p;
        let mut x = x;
        for v in candidates {
            let np = p.iter().copied().filter(|&u| self.adj[v][u]).collect();
            let nx = x.iter().copied().filter(|&u| self.adj[v][u]).collect();
            r.push(v);
            self.bron_kerbosch(r, np, nx, out);
            r.pop();
            p.retain(|&u| u != v);
            x.push(v);
        }
    }

    /// Whether every path from `a` to `b` passes through `d`. The three
    /// sets must be pairwise disjoint.
    pub fn separates(
        &self,
        a: &VariableSubset,
        b: &VariableSubset,
        d: &VariableSubset,
    ) -> Result<bool> {
        for s in [a, b, d] {
            self.check_subset(s)?;
        }
        if !a.is_disjoint(b) || !a.is_disjoint(d) || !b.is_disjoint(d) {
            return Err(Error::Subset(format!(
                "{a}, {b} and {d} are not pairwise disjoint"
            )));
        }
        let mut seen = vec![false; self.n()];
        let mut queue: VecDeque<usize> = a.iter().collect();
        for v in a.iter() {
            seen[v] = true;
        }
        while let Some(u) = queue.pop_front() {
            if b.contains(u) {
                return Ok(false);
            }
            for w in self.neighbors(u) {
                if !seen[w] && !d.contains(w) {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        Ok(true)
    }

    /// Maximum cardinality search order; ties go to the smallest index.
    fn mcs_order(&self) -> Vec<usize> {
        let n = self.n();
        let mut weight = vec![0usize; n];
        let mut done = vec![false; n];
        let mut order = Vec::with_capacity(n);
        for _ in 0..n {
            let v = (0..n)
                .filter(|&v| !done[v])
                .max_by_key(|&v| (weight[v], std::cmp::Reverse(v)))
                .expect("unvisited node remains");
            done[v] = true;
            order.push(v);
            for u in self.neighbors(v) {
                if !done[u] {
                    weight[u] += 1;
                }
            }
        }
        order
    }

    /// Cliques in an order with the running intersection property, each
    /// paired with its separator `C_k ∩ (C_1 ∪ … ∪ C_{k-1})`. `None` when
    /// the graph is not chordal.
    pub fn clique_ordering(&self) -> Option<Vec<(VariableSubset, VariableSubset)>> {
        let order = self.mcs_order();
        let mut rank = vec![0usize; self.n()];
        for (k, &v) in order.iter().enumerate() {
            rank[v] = k;
        }
        let mut candidates: Vec<VariableSubset> = Vec::with_capacity(order.len());
        for &v in &order {
            let earlier: Vec<usize> = self.neighbors(v).filter(|&u| rank[u] < rank[v]).collect();
            let earlier_set = VariableSubset::new(earlier).expect("distinct");
            if !self.is_complete(&earlier_set) {
                return None;
            }
            candidates.push(earlier_set.union(&VariableSubset::singleton(v)));
        }
        let cliques: Vec<&VariableSubset> = candidates
            .iter()
            .enumerate()
            .filter(|(k, c)| {
                !candidates
                    .iter()
                    .enumerate()
                    .any(|(j, o)| j != *k && c.is_subset_of(o) && (c.len() < o.len() || j < *k))
            })
            .map(|(_, c)| c)
            .collect();
        let mut seen = VariableSubset::empty();
        let mut out = Vec::with_capacity(cliques.len());
        for c in cliques {
            out.push((c.clone(), c.intersection(&seen)));
            seen = seen.union(c);
        }
        Some(out)
    }

    /// Chordality, which for undirected graphs is equivalent to
    /// decomposability.
    pub fn is_decomposable(&self) -> bool {
        self.clique_ordering().is_some()
    }

    /// A proper decomposition `(A, B, D)`: a partition of the nodes with `D`
    /// complete and separating `A` from `B`. `None` when the graph is not
    /// chordal or is a single clique.
    pub fn decomposition(&self) -> Option<Decomposition> {
        let ordering = self.clique_ordering()?;
        let (last, sep) = ordering.last()?.clone();
        if ordering.len() < 2 {
            return None;
        }
        let all = VariableSubset::full(self.n());
        let b = last.difference(&sep);
        let a = all.difference(&last);
        Some(Decomposition { a, b, d: sep })
    }
}

/// Witness that a graph splits into `G_{A∪D}` and `G_{B∪D}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub a: VariableSubset,
    pub b: VariableSubset,
    pub d: VariableSubset,
}

/// Directed acyclic graph given by parent lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dag {
    parents: Vec<VariableSubset>,
}

impl Dag {
    /// Rejects out-of-range parents and cycles.
    pub fn new(parents: Vec<Vec<usize>>) -> Result<Self> {
        let n = parents.len();
        let parents: Vec<VariableSubset> = parents
            .into_iter()
            .enumerate()
            .map(|(v, ps)| {
                if let Some(&p) = ps.iter().find(|&&p| p >= n || p == v) {
                    return Err(Error::Graph(format!("node {v} has invalid parent {p}")));
                }
                VariableSubset::new(ps)
                    .map_err(|_| Error::Graph(format!("node {v} repeats a parent")))
            })
            .collect::<Result<_>>()?;
        // Kahn's algorithm.
        let mut indegree: Vec<usize> = parents.iter().map(|p| p.len()).collect();
        let mut ready: Vec<usize> = (0..n).filter(|&v| indegree[v] == 0).collect();
        let mut visited = 0;
        while let Some(u) = ready.pop() {
            visited += 1;
            for (v, ps) in parents.iter().enumerate() {
                if ps.contains(u) {
                    indegree[v] -= 1;
                    if indegree[v] == 0 {
                        ready.push(v);
                    }
                }
            }
        }
        if visited != n {
            return Err(Error::Graph("parent lists contain a directed cycle".into()));
        }
        Ok(Dag { parents })
    }

    pub fn n(&self) -> usize {
        self.parents.len()
    }

    pub fn parents(&self, v: usize) -> &VariableSubset {
        &self.parents[v]
    }

    /// Drops arc directions and marries every pair of co-parents.
    pub fn moralize(&self) -> UndirectedGraph {
        let mut edges = Vec::new();
        for (v, ps) in self.parents.iter().enumerate() {
            let ps = ps.as_slice();
            edges.extend(ps.iter().map(|&p| (p, v)));
            for (k, &p) in ps.iter().enumerate() {
                edges.extend(ps[k + 1..].iter().map(|&q| (p, q)));
            }
        }
        UndirectedGraph::new(self.n(), edges).expect("DAG endpoints are valid")
    }
}
