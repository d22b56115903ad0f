//! Exact k-linkage decisions on finite simple graphs.
//!
//! A graph is k-linked when every selection of k disjoint terminal pairs can
//! be joined by k pairwise vertex-disjoint paths. Both the path search and
//! the pairing sweep are exact; a node budget turns infeasibly large searches
//! into an explicit "undecided" error instead of a wrong answer.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Finite simple graph on vertices `0..vertex_count`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GraphWire", into = "GraphWire")]
pub struct Graph {
    vertex_count: usize,
    edges: BTreeSet<(usize, usize)>,
}

#[derive(Clone, Serialize, Deserialize)]
struct GraphWire {
    vertices: usize,
    edges: Vec<(usize, usize)>,
}

impl TryFrom<GraphWire> for Graph {
    type Error = Error;
    fn try_from(w: GraphWire) -> Result<Graph> {
        Graph::new(w.vertices, &w.edges)
    }
}

impl From<Graph> for GraphWire {
    fn from(g: Graph) -> GraphWire {
        GraphWire {
            vertices: g.vertex_count,
            edges: g.edges.into_iter().collect(),
        }
    }
}

impl Graph {
    pub fn new(vertex_count: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if vertex_count == 0 {
            return Err(Error::invalid("graph needs at least one vertex"));
        }
        let mut set = BTreeSet::new();
        for &(a, b) in edges {
            if a == b {
                return Err(Error::invalid(format!("loop at vertex {a}")));
            }
            if a >= vertex_count || b >= vertex_count {
                return Err(Error::invalid(format!(
                    "edge ({a},{b}) out of range for {vertex_count} vertices"
                )));
            }
            set.insert((a.min(b), a.max(b)));
        }
        Ok(Graph {
            vertex_count,
            edges: set,
        })
    }

    pub fn complete(n: usize) -> Result<Self> {
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                edges.push((i, j));
            }
        }
        Graph::new(n, &edges)
    }

    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::invalid("cycle needs at least 3 vertices"));
        }
        let edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::new(n, &edges)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a.min(b), a.max(b)))
    }

    pub fn with_edge(&self, a: usize, b: usize) -> Result<Graph> {
        let mut edges: Vec<(usize, usize)> = self.edges.iter().copied().collect();
        edges.push((a, b));
        Graph::new(self.vertex_count, &edges)
    }

    /// Sorted adjacency lists.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertex_count];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }
}

/// Selection of k terminal pairs with all 2k terminals distinct.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pairing {
    pub pairs: Vec<(usize, usize)>,
}

impl Pairing {
    pub fn new(pairs: Vec<(usize, usize)>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for &(s, t) in &pairs {
            for v in [s, t] {
                if !seen.insert(v) {
                    return Err(Error::invalid(format!(
                        "terminal {v} appears twice in the pairing"
                    )));
                }
            }
        }
        if pairs.is_empty() {
            return Err(Error::invalid("pairing needs at least one pair"));
        }
        Ok(Pairing { pairs })
    }

    fn validate_for(&self, g: &Graph) -> Result<()> {
        for &(s, t) in &self.pairs {
            if s >= g.vertex_count() || t >= g.vertex_count() {
                return Err(Error::invalid(format!(
                    "terminal pair ({s},{t}) out of range"
                )));
            }
        }
        Ok(())
    }

    pub fn terminals(&self) -> Vec<usize> {
        self.pairs.iter().flat_map(|&(s, t)| [s, t]).collect()
    }
}

/// Outcome of a linkage decision.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LinkageResult {
    pub linked: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_paths: Option<Vec<Vec<usize>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failing_pairing: Option<Pairing>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

/// Budgets that keep the exponential searches explicit about giving up.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct SearchBudget {
    /// Backtrack nodes allowed per disjoint-path search.
    pub node_budget: u64,
    /// Pairing count above which `is_k_linked` attaches a warning.
    pub pairing_cap: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            node_budget: 10_000_000,
            pairing_cap: 1_000_000,
        }
    }
}

struct PathSearch<'a> {
    adj: &'a [Vec<usize>],
    pairs: &'a [(usize, usize)],
    /// Vertices unavailable as interior path vertices (all terminals).
    terminal: Vec<bool>,
    used: Vec<bool>,
    paths: Vec<Vec<usize>>,
    nodes: u64,
    budget: u64,
}

impl<'a> PathSearch<'a> {
    /// Every remaining pair must stay connectable in the residual graph.
    fn prune(&self, pair_idx: usize, cur: usize) -> bool {
        for (j, &(s, t)) in self.pairs.iter().enumerate().skip(pair_idx) {
            let from = if j == pair_idx { cur } else { s };
            if !self.reachable(from, t) {
                return true;
            }
        }
        false
    }

    /// BFS from `from` to `to` through vertices that are neither used nor
    /// reserved terminals (the endpoints themselves are allowed).
    fn reachable(&self, from: usize, to: usize) -> bool {
        if from == to {
            return true;
        }
        let n = self.adj.len();
        let mut seen = vec![false; n];
        let mut queue = std::collections::VecDeque::new();
        seen[from] = true;
        queue.push_back(from);
        while let Some(v) = queue.pop_front() {
            for &w in &self.adj[v] {
                if w == to {
                    return true;
                }
                if !seen[w] && !self.used[w] && !self.terminal[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        false
    }

    fn extend(&mut self, pair_idx: usize, cur: usize) -> Result<bool> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::Undecided(format!(
                "path search exceeded {} backtrack nodes",
                self.budget
            )));
        }
        if self.prune(pair_idx, cur) {
            return Ok(false);
        }
        let (_, t) = self.pairs[pair_idx];
        // Neighbors in ascending order keep the found witness deterministic.
        for i in 0..self.adj[cur].len() {
            let w = self.adj[cur][i];
            if w == t {
                self.paths[pair_idx].push(w);
                if pair_idx + 1 == self.pairs.len() {
                    return Ok(true);
                }
                let (s_next, _) = self.pairs[pair_idx + 1];
                self.paths[pair_idx + 1].push(s_next);
                if self.extend(pair_idx + 1, s_next)? {
                    return Ok(true);
                }
                self.paths[pair_idx + 1].pop();
                self.paths[pair_idx].pop();
                continue;
            }
            if self.used[w] || self.terminal[w] {
                continue;
            }
            self.used[w] = true;
            self.paths[pair_idx].push(w);
            if self.extend(pair_idx, w)? {
                return Ok(true);
            }
            self.paths[pair_idx].pop();
            self.used[w] = false;
        }
        Ok(false)
    }
}

/// Find k pairwise vertex-disjoint paths joining the pairing, if any exist.
/// The decision is exact; running out of budget is an `Undecided` error, not
/// a "no".
pub fn find_disjoint_paths(
    g: &Graph,
    pairing: &Pairing,
    budget: &SearchBudget,
) -> Result<Option<Vec<Vec<usize>>>> {
    pairing.validate_for(g)?;
    let adj = g.adjacency();
    let mut terminal = vec![false; g.vertex_count()];
    for v in pairing.terminals() {
        terminal[v] = true;
    }
    let mut search = PathSearch {
        adj: &adj,
        pairs: &pairing.pairs,
        terminal,
        used: vec![false; g.vertex_count()],
        paths: vec![Vec::new(); pairing.pairs.len()],
        nodes: 0,
        budget: budget.node_budget,
    };
    let (s0, _) = pairing.pairs[0];
    search.paths[0].push(s0);
    if search.extend(0, s0)? {
        let paths = search.paths;
        verify_witness(g, pairing, &paths)?;
        Ok(Some(paths))
    } else {
        Ok(None)
    }
}

/// Internal guard: witness paths must be vertex-disjoint and walk real edges.
fn verify_witness(g: &Graph, pairing: &Pairing, paths: &[Vec<usize>]) -> Result<()> {
    let mut seen = BTreeSet::new();
    for (path, &(s, t)) in paths.iter().zip(&pairing.pairs) {
        if path.first() != Some(&s) || path.last() != Some(&t) || path.len() < 2 {
            return Err(Error::numerical("internal: malformed witness path"));
        }
        for w in path.windows(2) {
            if !g.has_edge(w[0], w[1]) {
                return Err(Error::numerical("internal: witness uses a non-edge"));
            }
        }
        for &v in path {
            if !seen.insert(v) {
                return Err(Error::numerical("internal: witness paths share a vertex"));
            }
        }
    }
    Ok(())
}

/// Number of ways to choose k disjoint unordered pairs from n vertices:
/// C(n, 2k) * (2k-1)!!, saturating.
fn pairing_count(n: usize, k: usize) -> u128 {
    let mut count: u128 = 1;
    // C(n, 2k)
    for i in 0..2 * k {
        count = count.saturating_mul((n - i) as u128);
    }
    for i in 1..=2 * k {
        count /= i as u128;
    }
    // (2k-1)!!
    let mut m = 1u128;
    let mut odd = 1u128;
    while odd < 2 * k as u128 {
        m = m.saturating_mul(odd);
        odd += 2;
    }
    count.saturating_mul(m)
}

/// All canonical pairings (pairs `(a, b)` with `a < b`, listed by ascending
/// first element) in lexicographic order.
fn all_pairings(n: usize, k: usize) -> Vec<Pairing> {
    fn descend(
        n: usize,
        k: usize,
        start: usize,
        used: &mut [bool],
        stack: &mut Vec<(usize, usize)>,
        out: &mut Vec<Pairing>,
    ) {
        if stack.len() == k {
            out.push(Pairing {
                pairs: stack.clone(),
            });
            return;
        }
        for a in start..n {
            if used[a] {
                continue;
            }
            used[a] = true;
            for b in a + 1..n {
                if used[b] {
                    continue;
                }
                used[b] = true;
                stack.push((a, b));
                descend(n, k, a + 1, used, stack, out);
                stack.pop();
                used[b] = false;
            }
            used[a] = false;
        }
    }
    let mut out = Vec::new();
    descend(n, k, 0, &mut vec![false; n], &mut Vec::new(), &mut out);
    out
}

/// Decide whether `g` is k-linked by checking every canonical pairing.
/// Returns the lexicographically smallest failing pairing when not linked.
pub fn is_k_linked(g: &Graph, k: usize, budget: &SearchBudget) -> Result<LinkageResult> {
    if k == 0 {
        return Err(Error::invalid("k must be positive"));
    }
    if 2 * k > g.vertex_count() {
        return Err(Error::invalid(format!(
            "need at least 2k = {} vertices, got {}",
            2 * k,
            g.vertex_count()
        )));
    }

    let total = pairing_count(g.vertex_count(), k);
    let warning = (total > budget.pairing_cap as u128).then(|| {
        format!(
            "pairing count {total} exceeds the cap {}; the sweep may take long",
            budget.pairing_cap
        )
    });

    let pairings = all_pairings(g.vertex_count(), k);
    debug_assert_eq!(pairings.len() as u128, total);

    // Check pairings in chunks: parallel inside a chunk, sequential across
    // chunks, and resolve each chunk in order so the first failure (or the
    // first undecided pairing before any failure) is deterministic.
    const CHUNK: usize = 1024;
    for chunk in pairings.chunks(CHUNK) {
        let results: Vec<Result<bool>> = chunk
            .par_iter()
            .map(|p| find_disjoint_paths(g, p, budget).map(|r| r.is_some()))
            .collect();
        for (p, res) in chunk.iter().zip(results) {
            match res {
                Ok(true) => {}
                Ok(false) => {
                    return Ok(LinkageResult {
                        linked: false,
                        witness_paths: None,
                        failing_pairing: Some(p.clone()),
                        warning,
                    });
                }
                Err(e) => return Err(e),
            }
        }
    }
    Ok(LinkageResult {
        linked: true,
        witness_paths: None,
        failing_pairing: None,
        warning,
    })
}
