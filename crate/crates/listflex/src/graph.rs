//! Graph, list, and request data model, plus the structural predicates the
//! coloring procedures branch on: degeneracy, weak degeneracy, maximum average
//! degree, and the low-degree discharging witness.
//!
//! Vertices are dense 1-indexed integers; colors are arbitrary positive
//! integers with no contiguity assumption.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use itertools::Itertools;
use num_traits::Zero;
use thiserror::Error;

use crate::rational::{ratio_u, Rational};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("vertex {0} out of range 1..={1}")]
    InvalidVertex(usize, usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
}

/// Undirected simple graph on vertices `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adj: Vec<Vec<usize>>, // adj[0] unused; neighbor lists sorted ascending
    m: usize,
}

impl Graph {
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut adj = vec![Vec::new(); n + 1];
        let mut seen = BTreeSet::new();
        for &(u, v) in edges {
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            for w in [u, v] {
                if w == 0 || w > n {
                    return Err(GraphError::InvalidVertex(w, n));
                }
            }
            let key = (u.min(v), u.max(v));
            if !seen.insert(key) {
                return Err(GraphError::DuplicateEdge(key.0, key.1));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in adj.iter_mut() {
            list.sort_unstable();
        }
        Ok(Graph { n, adj, m: seen.len() })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.m
    }

    pub fn vertices(&self) -> impl Iterator<Item = usize> {
        1..=self.n
    }

    /// Edges as ordered pairs `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.m);
        for u in 1..=self.n {
            for &v in &self.adj[u] {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![false; self.n + 1];
        let mut queue = VecDeque::from([1usize]);
        seen[1] = true;
        let mut count = 1;
        while let Some(u) = queue.pop_front() {
            for &v in &self.adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    queue.push_back(v);
                }
            }
        }
        count == self.n
    }

    /// Induced subgraph on `verts` (relabeled `1..=k` in the given order),
    /// together with the map position -> original vertex.
    pub fn induced(&self, verts: &[usize]) -> (Graph, Vec<usize>) {
        let mut index = vec![0usize; self.n + 1];
        for (i, &v) in verts.iter().enumerate() {
            index[v] = i + 1;
        }
        let mut edges = Vec::new();
        for (i, &v) in verts.iter().enumerate() {
            for &w in &self.adj[v] {
                if index[w] > i + 1 {
                    edges.push((i + 1, index[w]));
                }
            }
        }
        let g = Graph::new(verts.len(), &edges).expect("induced subgraph is valid");
        (g, verts.to_vec())
    }

    pub fn average_degree(&self) -> Option<Rational> {
        if self.n == 0 {
            None
        } else {
            Some(ratio_u(2 * self.m as u64, self.n as u64))
        }
    }

    pub fn complete(n: usize) -> Graph {
        let edges: Vec<_> = (1..=n).tuple_combinations().collect();
        Graph::new(n, &edges).unwrap()
    }

    pub fn path(n: usize) -> Graph {
        let edges: Vec<_> = (1..n).map(|i| (i, i + 1)).collect();
        Graph::new(n, &edges).unwrap()
    }

    pub fn cycle(n: usize) -> Graph {
        assert!(n >= 3);
        let mut edges: Vec<_> = (1..n).map(|i| (i, i + 1)).collect();
        edges.push((1, n));
        Graph::new(n, &edges).unwrap()
    }
}

/// Per-vertex finite color sets over the positive-integer color universe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ListAssignment {
    lists: Vec<Vec<u32>>, // lists[0] unused; each sorted, deduped, nonempty
}

impl ListAssignment {
    /// `lists[i]` is the list of vertex `i + 1`. Every list must be nonempty
    /// and colors must be positive.
    pub fn new(lists: Vec<Vec<u32>>) -> Result<Self, GraphError> {
        let mut stored = Vec::with_capacity(lists.len() + 1);
        stored.push(Vec::new());
        for (i, mut list) in lists.into_iter().enumerate() {
            list.sort_unstable();
            list.dedup();
            if list.is_empty() || list[0] == 0 {
                return Err(GraphError::InvalidVertex(i + 1, 0));
            }
            stored.push(list);
        }
        Ok(ListAssignment { lists: stored })
    }

    pub fn uniform(n: usize, colors: &[u32]) -> Self {
        ListAssignment::new(vec![colors.to_vec(); n]).unwrap()
    }

    pub fn n(&self) -> usize {
        self.lists.len() - 1
    }

    pub fn list(&self, v: usize) -> &[u32] {
        &self.lists[v]
    }

    pub fn contains(&self, v: usize, c: u32) -> bool {
        self.lists[v].binary_search(&c).is_ok()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        (1..self.lists.len()).flat_map(move |v| self.lists[v].iter().map(move |&c| (v, c)))
    }
}

/// Partial preferred-color map with `r(v) ∈ L(v)` on its domain.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct Request {
    pub entries: BTreeMap<usize, u32>,
}

impl Request {
    pub fn new(entries: BTreeMap<usize, u32>) -> Self {
        Request { entries }
    }

    pub fn from_pairs(pairs: &[(usize, u32)]) -> Self {
        Request { entries: pairs.iter().copied().collect() }
    }

    pub fn domain_size(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn validate(&self, g: &Graph, lists: &ListAssignment) -> Result<(), GraphError> {
        for (&v, &c) in &self.entries {
            if v == 0 || v > g.n() {
                return Err(GraphError::InvalidVertex(v, g.n()));
            }
            if !lists.contains(v, c) {
                return Err(GraphError::InvalidVertex(v, g.n()));
            }
        }
        Ok(())
    }
}

/// Nonnegative weights on (vertex, color) pairs with `c ∈ L(v)`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct WeightedRequest {
    pub weights: BTreeMap<(usize, u32), Rational>,
}

impl WeightedRequest {
    pub fn new(weights: BTreeMap<(usize, u32), Rational>) -> Self {
        WeightedRequest { weights }
    }

    /// `w(G, L)`: the sum of all weights.
    pub fn total(&self) -> Rational {
        let mut sum = Rational::zero();
        for w in self.weights.values() {
            sum += w;
        }
        sum
    }

    pub fn weight(&self, v: usize, c: u32) -> Rational {
        self.weights.get(&(v, c)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn validate(&self, g: &Graph, lists: &ListAssignment) -> Result<(), GraphError> {
        for (&(v, c), w) in &self.weights {
            if v == 0 || v > g.n() || !lists.contains(v, c) {
                return Err(GraphError::InvalidVertex(v, g.n()));
            }
            if w < &Rational::zero() {
                return Err(GraphError::InvalidVertex(v, g.n()));
            }
        }
        Ok(())
    }
}

/// Total coloring of `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Coloring {
    colors: Vec<u32>, // colors[0] = 0 sentinel
}

impl Coloring {
    pub fn new(colors_by_vertex: Vec<u32>) -> Self {
        let mut colors = Vec::with_capacity(colors_by_vertex.len() + 1);
        colors.push(0);
        colors.extend(colors_by_vertex);
        Coloring { colors }
    }

    pub fn n(&self) -> usize {
        self.colors.len() - 1
    }

    pub fn get(&self, v: usize) -> u32 {
        self.colors[v]
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.colors[1..]
    }

    pub fn is_proper(&self, g: &Graph) -> bool {
        g.edges().iter().all(|&(u, v)| self.colors[u] != self.colors[v])
    }

    pub fn in_lists(&self, lists: &ListAssignment) -> bool {
        (1..self.colors.len()).all(|v| lists.contains(v, self.colors[v]))
    }

    /// Number of request vertices whose preference is honored.
    pub fn matches_request(&self, r: &Request) -> usize {
        r.entries.iter().filter(|&(&v, &c)| self.colors[v] == c).count()
    }

    /// Collected weight `Σ_v w(v, φ(v))`.
    pub fn matched_weight(&self, w: &WeightedRequest) -> Rational {
        let mut sum = Rational::zero();
        for (&(v, c), wt) in &w.weights {
            if self.colors[v] == c {
                sum += wt;
            }
        }
        sum
    }
}

/// One step of the weak-degeneracy reduction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WeakReductionStep {
    /// A vertex of degree at most `d`.
    SingleVertex(usize),
    /// `d + 1` vertices, all of degree exactly `d + 1`, inducing a connected
    /// subgraph. Sorted ascending.
    ConnectedBlock(Vec<usize>),
}

impl WeakReductionStep {
    pub fn vertices(&self) -> Vec<usize> {
        match self {
            WeakReductionStep::SingleVertex(v) => vec![*v],
            WeakReductionStep::ConnectedBlock(p) => p.clone(),
        }
    }
}

/// Exact degeneracy together with an elimination ordering in which every
/// vertex has at most `d` earlier neighbors (the reverse of repeated
/// minimum-degree removal, lowest index first on ties).
pub fn degeneracy(g: &Graph) -> (usize, Vec<usize>) {
    let n = g.n();
    let mut deg: Vec<usize> = (0..=n).map(|v| if v == 0 { 0 } else { g.degree(v) }).collect();
    let mut alive = vec![true; n + 1];
    let mut removal = Vec::with_capacity(n);
    let mut d = 0;
    for _ in 0..n {
        let v = (1..=n)
            .filter(|&v| alive[v])
            .min_by_key(|&v| (deg[v], v))
            .expect("vertex remains");
        d = d.max(deg[v]);
        alive[v] = false;
        removal.push(v);
        for &w in g.neighbors(v) {
            if alive[w] {
                deg[w] -= 1;
            }
        }
    }
    removal.reverse();
    (d, removal)
}

fn live_degree(g: &Graph, alive: &[bool], v: usize) -> usize {
    g.neighbors(v).iter().filter(|&&w| alive[w]).count()
}

fn block_connected(g: &Graph, block: &[usize]) -> bool {
    if block.is_empty() {
        return true;
    }
    let inside = |v: usize| block.contains(&v);
    let mut seen = vec![block[0]];
    let mut queue = VecDeque::from([block[0]]);
    while let Some(u) = queue.pop_front() {
        for &w in g.neighbors(u) {
            if inside(w) && !seen.contains(&w) {
                seen.push(w);
                queue.push_back(w);
            }
        }
    }
    seen.len() == block.len()
}

/// Canonical weak-reduction step on the subgraph induced by `alive`: the
/// lowest-index vertex of degree at most `d` if one exists, otherwise the
/// lexicographically smallest connected set of `d + 1` vertices of degree
/// exactly `d + 1`.
pub fn find_weak_reduction_in(g: &Graph, alive: &[bool], d: usize) -> Option<WeakReductionStep> {
    if let Some(v) = (1..=g.n()).find(|&v| alive[v] && live_degree(g, alive, v) <= d) {
        return Some(WeakReductionStep::SingleVertex(v));
    }
    let candidates: Vec<usize> = (1..=g.n())
        .filter(|&v| alive[v] && live_degree(g, alive, v) == d + 1)
        .collect();
    if candidates.len() < d + 1 {
        return None;
    }
    for block in candidates.iter().copied().combinations(d + 1) {
        // Edges inside the block are alive by construction of `candidates`.
        if block_connected(g, &block) {
            return Some(WeakReductionStep::ConnectedBlock(block));
        }
    }
    None
}

pub fn find_weak_reduction(g: &Graph, d: usize) -> Option<WeakReductionStep> {
    let alive = vec![true; g.n() + 1];
    find_weak_reduction_in(g, &alive, d)
}

/// Full canonical peel sequence, or `None` if the greedy gets stuck.
pub fn weak_peel_sequence(g: &Graph, d: usize) -> Option<Vec<WeakReductionStep>> {
    let mut alive = vec![true; g.n() + 1];
    let mut remaining = g.n();
    let mut steps = Vec::new();
    while remaining > 0 {
        let step = find_weak_reduction_in(g, &alive, d)?;
        for v in step.vertices() {
            alive[v] = false;
            remaining -= 1;
        }
        steps.push(step);
    }
    Some(steps)
}

/// Operational weak degeneracy: the canonical greedy peel empties the graph.
pub fn is_weakly_degenerate(g: &Graph, d: usize) -> bool {
    weak_peel_sequence(g, d).is_some()
}

/// Witness returned by [`sparsity_witness`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SparsityWitness {
    /// Vertex of degree at most `d`.
    LowDegree(usize),
    /// Vertex of degree exactly `d + 1` with at most one neighbor of degree
    /// greater than `d + 1`.
    SoftVertex(usize),
}

/// Finds a low-degree or soft vertex. When neither exists the graph must have
/// average degree at least `d + 1 + 2/(d + 4)`; this is checked exactly and a
/// violation panics, since it would contradict the discharging argument.
pub fn sparsity_witness(g: &Graph, d: usize) -> Option<SparsityWitness> {
    if let Some(v) = g.vertices().find(|&v| g.degree(v) <= d) {
        return Some(SparsityWitness::LowDegree(v));
    }
    for v in g.vertices() {
        if g.degree(v) == d + 1 {
            let big = g.neighbors(v).iter().filter(|&&w| g.degree(w) > d + 1).count();
            if big <= 1 {
                return Some(SparsityWitness::SoftVertex(v));
            }
        }
    }
    if let Some(avg) = g.average_degree() {
        let threshold = ratio_u(d as u64 + 1, 1) + ratio_u(2, d as u64 + 4);
        assert!(
            avg >= threshold,
            "no witness found although average degree {avg} < {threshold}"
        );
    }
    None
}

/// Exact maximum average degree `max_H 2|E(H)|/|V(H)|` by brute-force subset
/// enumeration. Intended for small graphs; the flow-based route must agree
/// with this on the overlap.
pub fn max_average_degree_enumerated(g: &Graph) -> Result<Rational, GraphError> {
    let n = g.n();
    if n == 0 {
        return Err(GraphError::EmptyGraph);
    }
    assert!(n < 25, "subset enumeration limited to small graphs");
    let mut best = Rational::zero();
    for mask in 1u32..(1 << n) {
        let verts: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| i + 1).collect();
        let mut edges = 0u64;
        for (i, &u) in verts.iter().enumerate() {
            for &v in &verts[i + 1..] {
                if g.has_edge(u, v) {
                    edges += 1;
                }
            }
        }
        let density = ratio_u(2 * edges, verts.len() as u64);
        if density > best {
            best = density;
        }
    }
    Ok(best)
}

/// Exact maximum average degree via binary search on the density threshold
/// with an exact max-flow feasibility test.
///
/// The densest-subgraph value `ρ* = max |E(S)|/|S|` is a fraction with
/// denominator at most `n`, so shrinking the search interval below `1/n²`
/// pins it down uniquely; `mad = 2ρ*`.
pub fn max_average_degree(g: &Graph) -> Result<Rational, GraphError> {
    let n = g.n();
    if n == 0 {
        return Err(GraphError::EmptyGraph);
    }
    if g.edge_count() == 0 {
        return Ok(Rational::zero());
    }
    // Invariant: lo < ρ* <= hi.
    let mut lo = ratio_u(1, 4);
    let mut hi = ratio_u(n as u64, 1);
    let gap = ratio_u(1, (n * n) as u64 + 1);
    while (&hi - &lo) > gap {
        let mid = (&lo + &hi) / ratio_u(2, 1);
        if dense_subgraph_exists(g, &mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // Unique fraction with denominator <= n in (lo, hi].
    for q in 1..=n as u64 {
        let p = (&hi * ratio_u(q, 1)).floor();
        let candidate = p / ratio_u(q, 1);
        if candidate > lo {
            return Ok(candidate * ratio_u(2, 1));
        }
    }
    unreachable!("density interval always contains a small-denominator fraction");
}

/// Decides whether some nonempty `S` has `|E(S)|/|S| > threshold`, by a
/// min-cut computation on the classic densest-subgraph network: cutting
/// `S ∪ {source}` costs `n·m + 2g|S| - 2|E(S)|`, so the min cut drops below
/// `n·m` exactly when the density threshold is exceeded.
fn dense_subgraph_exists(g: &Graph, threshold: &Rational) -> bool {
    let n = g.n() as i128;
    let m = g.edge_count() as i128;
    let a: i128 = threshold.numer().try_into().expect("threshold numerator fits i128");
    let b: i128 = threshold.denom().try_into().expect("threshold denominator fits i128");
    // All capacities scaled by b to stay integral.
    let source = 0usize;
    let sink = g.n() + 1;
    let mut net = FlowNetwork::new(g.n() + 2);
    for v in 1..=g.n() {
        net.add_edge(source, v, m * b);
        let cap = m * b + 2 * a - (g.degree(v) as i128) * b;
        assert!(cap >= 0, "vertex-to-sink capacity must be nonnegative");
        net.add_edge(v, sink, cap);
    }
    for (u, v) in g.edges() {
        net.add_edge(u, v, b);
        net.add_edge(v, u, b);
    }
    let max_flow = net.max_flow(source, sink);
    max_flow < n * m * b
}

/// Dinic max-flow over exact integer capacities.
struct FlowNetwork {
    heads: Vec<usize>,
    caps: Vec<i128>,
    next: Vec<Vec<usize>>, // per-node list of edge indices
    level: Vec<i32>,
    iter: Vec<usize>,
}

impl FlowNetwork {
    fn new(n: usize) -> Self {
        FlowNetwork {
            heads: Vec::new(),
            caps: Vec::new(),
            next: vec![Vec::new(); n],
            level: vec![0; n],
            iter: vec![0; n],
        }
    }

    fn add_edge(&mut self, from: usize, to: usize, cap: i128) {
        let id = self.heads.len();
        self.heads.push(to);
        self.caps.push(cap);
        self.next[from].push(id);
        self.heads.push(from);
        self.caps.push(0);
        self.next[to].push(id + 1);
    }

    fn bfs(&mut self, s: usize, t: usize) -> bool {
        self.level.fill(-1);
        self.level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &e in &self.next[u] {
                let v = self.heads[e];
                if self.caps[e] > 0 && self.level[v] < 0 {
                    self.level[v] = self.level[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        self.level[t] >= 0
    }

    fn dfs(&mut self, u: usize, t: usize, pushed: i128) -> i128 {
        if u == t {
            return pushed;
        }
        while self.iter[u] < self.next[u].len() {
            let e = self.next[u][self.iter[u]];
            let v = self.heads[e];
            if self.caps[e] > 0 && self.level[v] == self.level[u] + 1 {
                let d = self.dfs(v, t, pushed.min(self.caps[e]));
                if d > 0 {
                    self.caps[e] -= d;
                    self.caps[e ^ 1] += d;
                    return d;
                }
            }
            self.iter[u] += 1;
        }
        0
    }

    fn max_flow(&mut self, s: usize, t: usize) -> i128 {
        let mut flow = 0;
        while self.bfs(s, t) {
            self.iter.fill(0);
            loop {
                let pushed = self.dfs(s, t, i128::MAX);
                if pushed == 0 {
                    break;
                }
                flow += pushed;
            }
        }
        flow
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn degeneracy_basics() {
        assert_eq!(degeneracy(&Graph::path(3)).0, 1);
        assert_eq!(degeneracy(&Graph::complete(4)).0, 3);
        assert_eq!(degeneracy(&Graph::cycle(4)).0, 2);
        let empty = Graph::new(0, &[]).unwrap();
        assert_eq!(degeneracy(&empty), (0, vec![]));
    }

    #[test]
    fn degeneracy_order_has_bounded_back_degree() {
        let g = Graph::cycle(5);
        let (d, order) = degeneracy(&g);
        let mut pos = vec![0; g.n() + 1];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        for &v in &order {
            let back = g.neighbors(v).iter().filter(|&&w| pos[w] < pos[v]).count();
            assert!(back <= d);
        }
    }

    #[test]
    fn weak_reduction_canonical_cases() {
        // K2 with d = 0: no degree-0 vertex, vertex 1 forms the block.
        let k2 = Graph::complete(2);
        assert_eq!(
            find_weak_reduction(&k2, 0),
            Some(WeakReductionStep::ConnectedBlock(vec![1]))
        );
        // K4 with d = 2: smallest triangle.
        let k4 = Graph::complete(4);
        assert_eq!(
            find_weak_reduction(&k4, 2),
            Some(WeakReductionStep::ConnectedBlock(vec![1, 2, 3]))
        );
        // K4 with d = 1: no vertex of degree <= 1, no degree-2 vertices.
        assert_eq!(find_weak_reduction(&k4, 1), None);
    }

    #[test]
    fn weak_degeneracy_cases() {
        assert!(is_weakly_degenerate(&Graph::path(4), 1));
        assert!(is_weakly_degenerate(&Graph::complete(4), 2));
        assert!(!is_weakly_degenerate(&Graph::complete(4), 1));
        // d-degenerate implies weakly d-degenerate.
        assert!(is_weakly_degenerate(&Graph::path(4), 0));
        assert!(is_weakly_degenerate(&Graph::cycle(5), 1));
    }

    #[test]
    fn mad_examples() {
        assert_eq!(max_average_degree(&Graph::cycle(4)).unwrap(), ratio(2, 1));
        assert_eq!(max_average_degree(&Graph::complete(4)).unwrap(), ratio(3, 1));
        // K4 plus a pendant vertex: the K4 beats the whole graph's 14/5.
        let g = Graph::new(5, &[(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4), (4, 5)]).unwrap();
        assert_eq!(max_average_degree(&g).unwrap(), ratio(3, 1));
        assert_eq!(max_average_degree_enumerated(&g).unwrap(), ratio(3, 1));
        let empty = Graph::new(0, &[]).unwrap();
        assert_eq!(max_average_degree(&empty), Err(GraphError::EmptyGraph));
    }

    #[test]
    fn sparsity_witness_examples() {
        assert_eq!(sparsity_witness(&Graph::path(4), 1), Some(SparsityWitness::LowDegree(1)));
        assert_eq!(sparsity_witness(&Graph::cycle(5), 1), Some(SparsityWitness::SoftVertex(1)));
        assert_eq!(sparsity_witness(&Graph::complete(4), 2), Some(SparsityWitness::SoftVertex(1)));
    }

    #[test]
    fn graph_validation() {
        assert_eq!(Graph::new(2, &[(1, 1)]), Err(GraphError::SelfLoop(1)));
        assert_eq!(Graph::new(2, &[(1, 3)]), Err(GraphError::InvalidVertex(3, 2)));
        assert_eq!(Graph::new(2, &[(1, 2), (2, 1)]), Err(GraphError::DuplicateEdge(1, 2)));
    }
}
