//! Knapsack-driven lower-bound constructions: the (u,v)->w implication
//! gadget, the compiler from knapsack instances to list-coloring graphs whose
//! realizable color-1 patterns are exactly the subsets fitting the budget,
//! the four canonical colorings, and the log-factor-gap instances.

use std::collections::BTreeMap;

use itertools::Itertools;
use rayon::prelude::*;
use thiserror::Error;

use crate::coloring::{find_coloring, ColoringConstraint};
use crate::graph::{Coloring, Graph, ListAssignment, Request, WeightedRequest};
use crate::rational::ratio_u;
use num_traits::Zero;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GadgetError {
    #[error("gadget endpoint {0} must carry list {{1,2,3}} or {{1,4,5}}")]
    BadEndpointList(usize),
    #[error("cap exceeded: {0}")]
    CapExceeded(String),
    #[error("bad request: {0}")]
    BadRequest(String),
    #[error("invalid knapsack spec: {0}")]
    BadSpec(String),
}

/// Positive item sizes and budget.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnapsackSpec {
    pub s: Vec<u64>,
    pub t: u64,
}

impl KnapsackSpec {
    pub fn new(s: Vec<u64>, t: u64) -> Result<Self, GadgetError> {
        if s.is_empty() {
            return Err(GadgetError::BadSpec("need at least one item".into()));
        }
        if s.iter().any(|&x| x == 0) || t == 0 {
            return Err(GadgetError::BadSpec("sizes and budget must be positive".into()));
        }
        Ok(KnapsackSpec { s, t })
    }

    pub fn n(&self) -> usize {
        self.s.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GadgetStep {
    A,
    B,
    C,
    D,
}

impl GadgetStep {
    pub fn tag(&self) -> char {
        match self {
            GadgetStep::A => 'a',
            GadgetStep::B => 'b',
            GadgetStep::C => 'c',
            GadgetStep::D => 'd',
        }
    }
}

/// What a vertex of the construction is.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Role {
    /// `v_i`, 1-based item index.
    SVertex(usize),
    /// `x_{i,j}` machine vertex.
    Machine { i: usize, j: u64 },
    /// The sink `y`.
    Sink,
    /// `z_slot` of one gadget (slot in 1..=5).
    GadgetZ { gadget: usize, step: GadgetStep, slot: u8 },
}

const LIST_123: [u32; 3] = [1, 2, 3];
const LIST_145: [u32; 3] = [1, 4, 5];
const LIST_167: [u32; 3] = [1, 6, 7];

/// Growing construction; [`attach_gadget`] appends one gadget at a time.
#[derive(Debug, Clone)]
pub struct GadgetBuilder {
    n: usize,
    edges: Vec<(usize, usize)>,
    lists: Vec<Vec<u32>>, // 0-based by vertex-1
    roles: Vec<Role>,
    gadget_count: usize,
}

impl GadgetBuilder {
    pub fn new() -> Self {
        GadgetBuilder { n: 0, edges: Vec::new(), lists: Vec::new(), roles: Vec::new(), gadget_count: 0 }
    }

    pub fn add_vertex(&mut self, list: &[u32], role: Role) -> usize {
        self.n += 1;
        self.lists.push(list.to_vec());
        self.roles.push(role);
        self.n
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        self.edges.push((u, v));
    }

    fn endpoint_ok(&self, v: usize) -> bool {
        v >= 1 && v <= self.n && (self.lists[v - 1] == LIST_123 || self.lists[v - 1] == LIST_145)
    }

    /// Adds a (u,v)->w gadget: z1..z5 with triangles z1z2z3 and z3z4z5 plus
    /// edges u-z1, v-z2, w-z4, w-z5; lists {1,6,7} on the first triangle and
    /// L(w) on z4, z5. `u == v` is allowed. In every list coloring, u and v
    /// both colored 1 forces w to be colored 1, and nothing else is
    /// constrained; exactly 5 vertices and 10 edges are added.
    pub fn attach_gadget(&mut self, u: usize, v: usize, w: usize, step: GadgetStep) -> Result<usize, GadgetError> {
        for e in [u, v, w] {
            if !self.endpoint_ok(e) {
                return Err(GadgetError::BadEndpointList(e));
            }
        }
        self.gadget_count += 1;
        let id = self.gadget_count;
        let w_list = self.lists[w - 1].clone();
        let z: Vec<usize> = (1..=5u8)
            .map(|slot| {
                let list: &[u32] = if slot <= 3 { &LIST_167 } else { &w_list };
                self.add_vertex(list, Role::GadgetZ { gadget: id, step, slot })
            })
            .collect();
        self.add_edge(z[0], z[1]);
        self.add_edge(z[0], z[2]);
        self.add_edge(z[1], z[2]);
        self.add_edge(z[2], z[3]);
        self.add_edge(z[2], z[4]);
        self.add_edge(z[3], z[4]);
        self.add_edge(u, z[0]);
        self.add_edge(v, z[1]);
        self.add_edge(w, z[3]);
        self.add_edge(w, z[4]);
        Ok(id)
    }

    pub fn finish(self, spec: KnapsackSpec, s_vertices: Vec<usize>) -> GadgetConstruction {
        let graph = Graph::new(self.n, &self.edges).expect("construction builds a simple graph");
        let lists = ListAssignment::new(self.lists).expect("all lists nonempty");
        GadgetConstruction {
            graph,
            lists,
            s_vertices,
            roles: self.roles,
            spec,
            gadget_count: self.gadget_count,
        }
    }
}

impl Default for GadgetBuilder {
    fn default() -> Self {
        Self::new()
    }
}

/// The compiled construction.
#[derive(Debug, Clone)]
pub struct GadgetConstruction {
    pub graph: Graph,
    pub lists: ListAssignment,
    /// The special vertices `v_1..v_n`, in item order.
    pub s_vertices: Vec<usize>,
    /// Role of vertex `v` at `roles[v - 1]`.
    pub roles: Vec<Role>,
    pub spec: KnapsackSpec,
    pub gadget_count: usize,
}

/// Compiles a knapsack spec: item vertices with lists {1,2,3}, machine
/// vertices `x_{i,j}` (0 <= j <= t) and the sink `y` with lists {1,4,5}, the
/// base edge y-x_{1,0}, and the four gadget families
///
///   (a) (v_i, v_i) -> x_{1,0}                          for every item,
///   (b) (x_{i,j}, x_{i,j}) -> x_{i+1,j}                for i < n,
///   (c) (v_i, x_{i,j}) -> x_{i+1,j+s_i}  for i < n, j <= t - s_i,
///   (d) (v_i, x_{i,j}) -> y              for j >= t - s_i + 1.
///
/// Vertex numbering is canonical: items, then machines row-major, then y,
/// then gadget vertices in attachment order.
pub fn build_knapsack_graph(spec: &KnapsackSpec) -> GadgetConstruction {
    let n = spec.n();
    let t = spec.t;
    let mut b = GadgetBuilder::new();
    let s_vertices: Vec<usize> = (1..=n).map(|i| b.add_vertex(&LIST_123, Role::SVertex(i))).collect();
    let mut machine = vec![vec![0usize; t as usize + 1]; n + 1];
    for i in 1..=n {
        for j in 0..=t {
            machine[i][j as usize] = b.add_vertex(&LIST_145, Role::Machine { i, j });
        }
    }
    let y = b.add_vertex(&LIST_145, Role::Sink);
    b.add_edge(y, machine[1][0]);

    for i in 1..=n {
        b.attach_gadget(s_vertices[i - 1], s_vertices[i - 1], machine[1][0], GadgetStep::A)
            .expect("endpoints carry canonical lists");
    }
    for i in 1..n {
        for j in 0..=t {
            b.attach_gadget(machine[i][j as usize], machine[i][j as usize], machine[i + 1][j as usize], GadgetStep::B)
                .expect("endpoints carry canonical lists");
        }
    }
    for i in 1..n {
        let si = spec.s[i - 1];
        if si <= t {
            for j in 0..=(t - si) {
                b.attach_gadget(
                    s_vertices[i - 1],
                    machine[i][j as usize],
                    machine[i + 1][(j + si) as usize],
                    GadgetStep::C,
                )
                .expect("endpoints carry canonical lists");
            }
        }
    }
    for i in 1..=n {
        let si = spec.s[i - 1];
        let lo = t.saturating_sub(si).saturating_add(if si > t { 0 } else { 1 });
        let lo = if si > t { 0 } else { lo };
        for j in lo..=t {
            b.attach_gadget(s_vertices[i - 1], machine[i][j as usize], y, GadgetStep::D)
                .expect("endpoints carry canonical lists");
        }
    }

    let done = b.finish(spec.clone(), s_vertices);
    let bound = 11 * n as u64 * (t + 2);
    assert!((done.graph.n() as u64) < bound, "size bound |V| < 11n(t+2) violated");
    done
}

/// The table behind the four canonical colorings: per coloring, the colors of
/// item vertices, machine vertices, the sink, and the two z-tuples.
struct CanonicalRow {
    s: u32,
    x: u32,
    y: u32,
    abc: [u32; 5],
    d: [u32; 5],
}

const CANONICAL: [CanonicalRow; 4] = [
    CanonicalRow { s: 2, x: 1, y: 4, abc: [6, 7, 1, 4, 5], d: [1, 6, 7, 1, 5] },
    CanonicalRow { s: 3, x: 1, y: 5, abc: [7, 6, 1, 5, 4], d: [1, 7, 6, 4, 1] },
    CanonicalRow { s: 3, x: 4, y: 1, abc: [1, 6, 7, 1, 5], d: [6, 1, 7, 5, 4] },
    CanonicalRow { s: 3, x: 5, y: 1, abc: [7, 1, 6, 4, 1], d: [7, 6, 1, 4, 5] },
];

/// One of the four canonical colorings (index in 1..=4). Every legal
/// (vertex, color) pair with the item-color-1 pairs excluded is hit by at
/// least one of them, which is what makes [`quarter_satisfy`] work.
pub fn canonical_coloring(construction: &GadgetConstruction, index: u8) -> Coloring {
    assert!((1..=4).contains(&index), "canonical coloring index must be 1..=4");
    let row = &CANONICAL[(index - 1) as usize];
    let colors: Vec<u32> = construction
        .roles
        .iter()
        .map(|role| match role {
            Role::SVertex(_) => row.s,
            Role::Machine { .. } => row.x,
            Role::Sink => row.y,
            Role::GadgetZ { step, slot, .. } => match step {
                GadgetStep::D => row.d[(*slot - 1) as usize],
                _ => row.abc[(*slot - 1) as usize],
            },
        })
        .collect();
    let phi = Coloring::new(colors);
    debug_assert!(phi.is_proper(&construction.graph) && phi.in_lists(&construction.lists));
    phi
}

/// A coloring in which the item vertices colored 1 are exactly
/// `{v_i : i ∈ r_set}`, if one exists.
pub fn realize_set(construction: &GadgetConstruction, r_set: &[usize]) -> Option<Coloring> {
    let mut constraint = ColoringConstraint::none();
    for (idx, &v) in construction.s_vertices.iter().enumerate() {
        if r_set.contains(&(idx + 1)) {
            constraint = constraint.force(v, 1);
        } else {
            constraint = constraint.forbid(v, 1);
        }
    }
    find_coloring(&construction.graph, &construction.lists, &constraint)
}

/// All realizable subsets of `{1..n}`, decided by constrained backtracking.
pub fn realizable_sets(
    construction: &GadgetConstruction,
    cap_n: Option<usize>,
    cap_t: Option<u64>,
) -> Result<Vec<Vec<usize>>, GadgetError> {
    let n = construction.spec.n();
    let cap_n = cap_n.unwrap_or(4);
    let cap_t = cap_t.unwrap_or(4);
    if n > cap_n || construction.spec.t > cap_t {
        return Err(GadgetError::CapExceeded(format!(
            "n = {n}, t = {} beyond caps ({cap_n}, {cap_t})",
            construction.spec.t
        )));
    }
    let subsets: Vec<Vec<usize>> = (0..=n)
        .flat_map(|k| (1..=n).combinations(k))
        .collect();
    let mut realizable: Vec<Vec<usize>> = subsets
        .into_par_iter()
        .filter(|r_set| realize_set(construction, r_set).is_some())
        .collect();
    realizable.sort();
    Ok(realizable)
}

/// The log-gap instance for parameter `k`: `n = 2^k - 1` items, `s_i` the
/// largest power of two with `i * s_i <= 2^k - 1`, budget `t = 2^{k-1}`,
/// plus the hard weighted request `w(v_i, 1) = s_i` of total weight
/// `k * 2^{k-1}`.
pub fn build_log_gap_instance(
    k: u32,
    max_k: Option<u32>,
) -> Result<(GadgetConstruction, WeightedRequest), GadgetError> {
    let cap = max_k.unwrap_or(3);
    if k == 0 || k > cap {
        return Err(GadgetError::CapExceeded(format!("k = {k} outside 1..={cap}")));
    }
    let n = (1u64 << k) - 1;
    let mut s = Vec::with_capacity(n as usize);
    for i in 1..=n {
        let mut power = 1u64;
        while i * (power << 1) <= n {
            power <<= 1;
        }
        s.push(power);
    }
    let spec = KnapsackSpec::new(s.clone(), 1 << (k - 1))?;
    let construction = build_knapsack_graph(&spec);
    let mut weights = BTreeMap::new();
    for (idx, &v) in construction.s_vertices.iter().enumerate() {
        weights.insert((v, 1u32), ratio_u(s[idx], 1));
    }
    let hard = WeightedRequest::new(weights);
    assert_eq!(
        hard.total(),
        ratio_u(k as u64 * (1 << (k - 1)), 1),
        "hard request total must be k * 2^(k-1)"
    );
    Ok((construction, hard))
}

/// Best of the four canonical colorings against a weighted request that puts
/// no weight on (item, color 1) pairs; collects at least a quarter of the
/// total weight.
pub fn quarter_satisfy(construction: &GadgetConstruction, w: &WeightedRequest) -> Result<Coloring, GadgetError> {
    for (&(v, c), weight) in &w.weights {
        if c == 1 && construction.s_vertices.contains(&v) && !weight.is_zero() {
            return Err(GadgetError::BadRequest(format!(
                "weight on ({v}, 1) with {v} an item vertex"
            )));
        }
    }
    let best = (1..=4u8)
        .map(|i| canonical_coloring(construction, i))
        .max_by(|a, b| a.matched_weight(w).cmp(&b.matched_weight(w)))
        .expect("four candidates");
    let collected = best.matched_weight(w);
    assert!(
        collected.clone() * ratio_u(4, 1) >= w.total(),
        "canonical colorings must cover a quarter of the weight"
    );
    let _ = collected;
    Ok(best)
}

/// Splits a request into its (item, color 1) part and the rest, realizes the
/// half of the color-1 indices with the smallest sizes, quarter-satisfies the
/// rest via the canonical colorings, and returns the better coloring; at
/// least a sixth of the request is honored. Sound whenever the ceil-half of
/// any index set fits the budget, as in the log-gap instances where sizes are
/// non-increasing with suffix-half sums at most `t`.
pub fn one_sixth_satisfy(construction: &GadgetConstruction, r: &Request) -> Result<Coloring, GadgetError> {
    let mut r1_indices: Vec<usize> = Vec::new();
    let mut r2 = WeightedRequest::default();
    let mut r2_size = 0u64;
    for (&v, &c) in &r.entries {
        match construction.s_vertices.iter().position(|&sv| sv == v) {
            Some(idx) if c == 1 => r1_indices.push(idx + 1),
            _ => {
                r2.weights.insert((v, c), ratio_u(1, 1));
                r2_size += 1;
            }
        }
    }
    r1_indices.sort_unstable();

    let mut candidates: Vec<Coloring> = Vec::new();
    if !r1_indices.is_empty() {
        let keep = r1_indices.len().div_ceil(2);
        let chosen: Vec<usize> = r1_indices[r1_indices.len() - keep..].to_vec();
        let sum: u64 = chosen.iter().map(|&i| construction.spec.s[i - 1]).sum();
        if sum > construction.spec.t {
            return Err(GadgetError::BadRequest(
                "half of the color-1 indices does not fit the budget".into(),
            ));
        }
        let phi = realize_set(construction, &chosen)
            .expect("sets within the budget are realizable");
        candidates.push(phi);
    }
    if r2_size > 0 {
        candidates.push(quarter_satisfy(construction, &r2)?);
    }
    if candidates.is_empty() {
        candidates.push(canonical_coloring(construction, 1));
    }
    let best = candidates
        .into_iter()
        .max_by_key(|phi| phi.matches_request(r))
        .expect("at least one candidate");
    // max(ceil(m1/2), m2/4) >= (m1 + m2) / 6.
    debug_assert!(ratio_u(best.matches_request(r) as u64 * 6, 1) >= ratio_u(r.domain_size() as u64, 1));
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gadget_adds_five_vertices_and_ten_edges() {
        let mut b = GadgetBuilder::new();
        let u = b.add_vertex(&LIST_123, Role::SVertex(1));
        let v = b.add_vertex(&LIST_123, Role::SVertex(2));
        let w = b.add_vertex(&LIST_145, Role::Sink);
        let before = (b.n, b.edges.len());
        b.attach_gadget(u, v, w, GadgetStep::A).unwrap();
        assert_eq!(b.n, before.0 + 5);
        assert_eq!(b.edges.len(), before.1 + 10);
    }

    #[test]
    fn gadget_rejects_bad_lists() {
        let mut b = GadgetBuilder::new();
        let u = b.add_vertex(&[1, 6, 7], Role::Sink);
        assert_eq!(b.attach_gadget(u, u, u, GadgetStep::A), Err(GadgetError::BadEndpointList(u)));
    }

    /// Brute-forced extension table: a coloring of (u, v, w) extends to the
    /// gadget iff u and v being both 1 implies w is 1. All endpoint list
    /// combinations, including u = v.
    #[test]
    fn gadget_extension_table() {
        let endpoint_lists: [&[u32]; 2] = [&LIST_123, &LIST_145];
        for ul in endpoint_lists {
            for vl in endpoint_lists {
                for wl in endpoint_lists {
                    for same_uv in [false, true] {
                        if same_uv && ul != vl {
                            continue;
                        }
                        let mut b = GadgetBuilder::new();
                        let u = b.add_vertex(ul, Role::SVertex(1));
                        let v = if same_uv { u } else { b.add_vertex(vl, Role::SVertex(2)) };
                        let w = b.add_vertex(wl, Role::Sink);
                        b.attach_gadget(u, v, w, GadgetStep::A).unwrap();
                        let spec = KnapsackSpec::new(vec![1], 1).unwrap();
                        let c = b.finish(spec, vec![]);
                        for &cu in ul {
                            for &cv in vl {
                                if same_uv && cu != cv {
                                    continue;
                                }
                                for &cw in wl {
                                    let mut constraint = ColoringConstraint::none().force(u, cu).force(w, cw);
                                    if !same_uv {
                                        constraint = constraint.force(v, cv);
                                    }
                                    let extends =
                                        find_coloring(&c.graph, &c.lists, &constraint).is_some();
                                    let expected = !(cu == 1 && cv == 1) || cw == 1;
                                    assert_eq!(
                                        extends, expected,
                                        "u={cu} v={cv} w={cw} same_uv={same_uv}"
                                    );
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn knapsack_graph_counts() {
        // s = (1,1), t = 1: 7 base vertices plus 7 gadgets of 5 vertices.
        let spec = KnapsackSpec::new(vec![1, 1], 1).unwrap();
        let c = build_knapsack_graph(&spec);
        assert_eq!(c.gadget_count, 7);
        assert_eq!(c.graph.n(), 42);
        assert!((c.graph.n() as u64) < 11 * 2 * 3);

        // The worked example with five items: counts per family are
        // (a) 5, (b) 20, (c) 13, (d) 9.
        let spec = KnapsackSpec::new(vec![2, 1, 3, 1, 2], 4).unwrap();
        let c = build_knapsack_graph(&spec);
        let count = |step: GadgetStep| {
            c.roles
                .iter()
                .filter(|r| matches!(r, Role::GadgetZ { step: s, slot: 1, .. } if *s == step))
                .count()
        };
        assert_eq!(count(GadgetStep::A), 5);
        assert_eq!(count(GadgetStep::B), 20);
        assert_eq!(count(GadgetStep::C), 13);
        assert_eq!(count(GadgetStep::D), 9);
        assert_eq!(c.graph.n(), 5 + 25 + 1 + 47 * 5);
        assert!((c.graph.n() as u64) < 11 * 5 * 6);
        // Every list has size exactly 3 by construction.
        for v in c.graph.vertices() {
            assert_eq!(c.lists.list(v).len(), 3);
        }
    }

    #[test]
    fn canonical_colorings_are_proper_everywhere() {
        for n in 1..=3usize {
            for t in 1..=3u64 {
                for s in std::iter::repeat(1..=t + 1).take(n).multi_cartesian_product() {
                    let spec = KnapsackSpec::new(s, t).unwrap();
                    let c = build_knapsack_graph(&spec);
                    for i in 1..=4 {
                        let phi = canonical_coloring(&c, i);
                        assert!(phi.is_proper(&c.graph), "phi_{i} improper for {:?}", c.spec);
                        assert!(phi.in_lists(&c.lists));
                    }
                }
            }
        }
    }

    #[test]
    fn canonical_coloring_values() {
        let spec = KnapsackSpec::new(vec![1, 1], 1).unwrap();
        let c = build_knapsack_graph(&spec);
        let phi1 = canonical_coloring(&c, 1);
        for &v in &c.s_vertices {
            assert_eq!(phi1.get(v), 2);
        }
        for (v, role) in c.roles.iter().enumerate() {
            match role {
                Role::Machine { .. } => assert_eq!(phi1.get(v + 1), 1),
                Role::Sink => assert_eq!(phi1.get(v + 1), 4),
                _ => {}
            }
        }
        let phi3 = canonical_coloring(&c, 3);
        let y = c.roles.iter().position(|r| matches!(r, Role::Sink)).unwrap() + 1;
        assert_eq!(phi3.get(y), 1);
    }

    #[test]
    fn realizable_sets_match_budget() {
        let spec = KnapsackSpec::new(vec![1, 1], 1).unwrap();
        let c = build_knapsack_graph(&spec);
        let got = realizable_sets(&c, None, None).unwrap();
        assert_eq!(got, vec![vec![], vec![1], vec![2]]);

        let spec = KnapsackSpec::new(vec![2, 1, 1], 2).unwrap();
        let c = build_knapsack_graph(&spec);
        let got = realizable_sets(&c, None, None).unwrap();
        assert_eq!(got, vec![vec![], vec![1], vec![2], vec![2, 3], vec![3]]);
    }

    #[test]
    fn empty_set_realized_by_phi1() {
        let spec = KnapsackSpec::new(vec![2, 2], 1).unwrap();
        let c = build_knapsack_graph(&spec);
        let phi1 = canonical_coloring(&c, 1);
        assert!(c.s_vertices.iter().all(|&v| phi1.get(v) != 1));
        assert!(realize_set(&c, &[]).is_some());
    }

    #[test]
    fn log_gap_instances() {
        let (c, hard) = build_log_gap_instance(2, None).unwrap();
        assert_eq!(c.spec.s, vec![2, 1, 1]);
        assert_eq!(c.spec.t, 2);
        assert_eq!(hard.total(), ratio_u(4, 1));

        let (c, _) = build_log_gap_instance(1, None).unwrap();
        assert_eq!(c.spec.s, vec![1]);
        assert_eq!(c.spec.t, 1);

        let (c, _) = build_log_gap_instance(3, None).unwrap();
        assert_eq!(c.spec.s, vec![4, 2, 2, 1, 1, 1, 1]);
        assert_eq!(c.spec.t, 4);

        assert!(matches!(build_log_gap_instance(4, None), Err(GadgetError::CapExceeded(_))));
        assert!(build_log_gap_instance(4, Some(4)).is_ok());
    }

    #[test]
    fn quarter_satisfy_cases() {
        let spec = KnapsackSpec::new(vec![1, 1], 1).unwrap();
        let c = build_knapsack_graph(&spec);

        // Uniform weights over all pairs except (item, 1).
        let mut weights = BTreeMap::new();
        for (v, col) in c.lists.pairs() {
            if !(col == 1 && c.s_vertices.contains(&v)) {
                weights.insert((v, col), ratio_u(1, 1));
            }
        }
        let w = WeightedRequest::new(weights);
        let best = quarter_satisfy(&c, &w).unwrap();
        assert!(best.matched_weight(&w) * ratio_u(4, 1) >= w.total());

        // Weight concentrated on (y, 1): matched fully by phi3 or phi4.
        let y = c.roles.iter().position(|r| matches!(r, Role::Sink)).unwrap() + 1;
        let mut weights = BTreeMap::new();
        weights.insert((y, 1u32), ratio_u(5, 1));
        let w = WeightedRequest::new(weights);
        let best = quarter_satisfy(&c, &w).unwrap();
        assert_eq!(best.matched_weight(&w), ratio_u(5, 1));

        // Zero weight is vacuously fine.
        let w = WeightedRequest::default();
        assert!(quarter_satisfy(&c, &w).is_ok());

        // Weight on an (item, 1) pair is rejected.
        let mut weights = BTreeMap::new();
        weights.insert((c.s_vertices[0], 1u32), ratio_u(1, 1));
        assert!(matches!(
            quarter_satisfy(&c, &WeightedRequest::new(weights)),
            Err(GadgetError::BadRequest(_))
        ));
    }

    /// With all sizes 1 and budget 1, singleton requests are fully
    /// satisfiable although the all-items request can only ever score one
    /// vertex.
    #[test]
    fn singleton_corollary() {
        for n in 1..=3usize {
            let spec = KnapsackSpec::new(vec![1; n], 1).unwrap();
            let c = build_knapsack_graph(&spec);
            // Every singleton request is 1-satisfiable.
            for v in c.graph.vertices() {
                for &col in c.lists.list(v) {
                    let satisfiable = if col == 1 && c.s_vertices.contains(&v) {
                        let idx = c.s_vertices.iter().position(|&sv| sv == v).unwrap() + 1;
                        realize_set(&c, &[idx]).is_some()
                    } else {
                        (1..=4).any(|i| canonical_coloring(&c, i).get(v) == col)
                    };
                    assert!(satisfiable, "singleton ({v}, {col}) unsatisfied");
                }
            }
            // The all-ones request never scores more than one item vertex.
            let realizable = realizable_sets(&c, None, None).unwrap();
            let max_hit = realizable.iter().map(|r| r.len()).max().unwrap();
            assert_eq!(max_hit, 1);
        }
    }

    /// The enumeration of realizable item patterns on the k = 2 log-gap
    /// instance agrees with the budget rule.
    #[test]
    fn log_gap_realizability_cross_check() {
        let (c, _) = build_log_gap_instance(2, None).unwrap();
        let got = realizable_sets(&c, None, None).unwrap();
        let expected: Vec<Vec<usize>> = (0..=3usize)
            .flat_map(|k| (1..=3usize).combinations(k))
            .filter(|r| r.iter().map(|&i| c.spec.s[i - 1]).sum::<u64>() <= c.spec.t)
            .sorted()
            .collect();
        assert_eq!(got, expected);
    }
}
