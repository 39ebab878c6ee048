//! Exact list-coloring machinery: deterministic enumeration, constrained
//! colorability with unit and naked-pair propagation, best-request matching by
//! branch and bound, and the spanning-tree coloring that keeps a color off
//! every vertex except one.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::graph::{Coloring, Graph, ListAssignment, Request};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ColoringError {
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("constraint is inconsistent with the list assignment: {0}")]
    BadConstraint(String),
}

/// Forced and forbidden colors for a colorability query.
#[derive(Debug, Clone, Default)]
pub struct ColoringConstraint {
    pub forced: BTreeMap<usize, u32>,
    pub forbidden: BTreeMap<usize, BTreeSet<u32>>,
}

impl ColoringConstraint {
    pub fn none() -> Self {
        ColoringConstraint::default()
    }

    pub fn force(mut self, v: usize, c: u32) -> Self {
        self.forced.insert(v, c);
        self
    }

    pub fn forbid(mut self, v: usize, c: u32) -> Self {
        self.forbidden.entry(v).or_default().insert(c);
        self
    }

    pub fn validate(&self, g: &Graph, lists: &ListAssignment) -> Result<(), ColoringError> {
        for (&v, &c) in &self.forced {
            if v == 0 || v > g.n() {
                return Err(ColoringError::BadConstraint(format!("vertex {v} out of range")));
            }
            if !lists.contains(v, c) {
                return Err(ColoringError::BadConstraint(format!(
                    "forced color {c} not in L({v})"
                )));
            }
            if self.forbidden.get(&v).is_some_and(|f| f.contains(&c)) {
                return Err(ColoringError::BadConstraint(format!(
                    "color {c} both forced and forbidden at {v}"
                )));
            }
        }
        for &v in self.forbidden.keys() {
            if v == 0 || v > g.n() {
                return Err(ColoringError::BadConstraint(format!("vertex {v} out of range")));
            }
        }
        Ok(())
    }
}

/// Result of [`enumerate_l_colorings`].
#[derive(Debug, Clone)]
pub struct Enumeration {
    pub colorings: Vec<Coloring>,
    pub truncated: bool,
}

/// All proper L-colorings in lexicographic order of the color vector
/// `(φ(1), …, φ(n))` with colors ascending; deterministic and duplicate-free.
pub fn enumerate_l_colorings(g: &Graph, lists: &ListAssignment, limit: Option<usize>) -> Enumeration {
    let n = g.n();
    let mut out = Vec::new();
    let mut truncated = false;
    let mut partial = vec![0u32; n + 1];

    fn rec(
        g: &Graph,
        lists: &ListAssignment,
        limit: Option<usize>,
        partial: &mut Vec<u32>,
        v: usize,
        out: &mut Vec<Coloring>,
        truncated: &mut bool,
    ) {
        if *truncated {
            return;
        }
        if v > g.n() {
            if limit.is_some_and(|l| out.len() >= l) {
                *truncated = true;
                return;
            }
            out.push(Coloring::new(partial[1..].to_vec()));
            return;
        }
        for &c in lists.list(v) {
            if g.neighbors(v).iter().all(|&w| w > v || partial[w] != c) {
                partial[v] = c;
                rec(g, lists, limit, partial, v + 1, out, truncated);
                partial[v] = 0;
                if *truncated {
                    return;
                }
            }
        }
    }

    rec(g, lists, limit, &mut partial, 1, &mut out, &mut truncated);
    Enumeration { colorings: out, truncated }
}

/// Backtracking solver state with an undo trail. Propagation is unit
/// propagation plus naked pairs: two adjacent vertices sharing the same
/// two-color domain wipe both colors from every common neighbor, which is
/// what makes the forced chains in large gadget graphs collapse without
/// branching.
struct Solver<'a> {
    g: &'a Graph,
    domains: Vec<Vec<u32>>,
    assigned: Vec<u32>, // 0 = unassigned
    trail: Vec<TrailEvent>,
    unassigned: usize,
}

enum TrailEvent {
    Removed(usize, u32),
    Assigned(usize),
}

impl<'a> Solver<'a> {
    fn new(g: &'a Graph, lists: &ListAssignment, constraint: &ColoringConstraint) -> Option<Self> {
        let n = g.n();
        let mut domains = vec![Vec::new(); n + 1];
        for v in 1..=n {
            let forbidden = constraint.forbidden.get(&v);
            domains[v] = lists
                .list(v)
                .iter()
                .copied()
                .filter(|c| forbidden.is_none_or(|f| !f.contains(c)))
                .collect();
            if let Some(&c) = constraint.forced.get(&v) {
                if !domains[v].contains(&c) {
                    return None;
                }
                domains[v] = vec![c];
            }
            if domains[v].is_empty() {
                return None;
            }
        }
        let mut solver = Solver { g, domains, assigned: vec![0; n + 1], trail: Vec::new(), unassigned: n };
        // Settle initial singletons and pairs.
        let singletons: Vec<usize> = (1..=n).filter(|&v| solver.domains[v].len() == 1).collect();
        for v in singletons {
            if solver.assigned[v] == 0 {
                let c = solver.domains[v][0];
                if !solver.assign(v, c) {
                    return None;
                }
            }
        }
        let pairs: Vec<usize> = (1..=n)
            .filter(|&v| solver.assigned[v] == 0 && solver.domains[v].len() == 2)
            .collect();
        for v in pairs {
            if !solver.pair_check(v) {
                return None;
            }
        }
        Some(solver)
    }

    fn mark(&self) -> usize {
        self.trail.len()
    }

    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            match self.trail.pop().unwrap() {
                TrailEvent::Removed(v, c) => {
                    let pos = self.domains[v].partition_point(|&x| x < c);
                    self.domains[v].insert(pos, c);
                }
                TrailEvent::Assigned(v) => {
                    self.assigned[v] = 0;
                    self.unassigned += 1;
                }
            }
        }
    }

    /// Removes `c` from the domain of `v`; returns false on wipeout.
    fn remove(&mut self, v: usize, c: u32, queue: &mut Vec<usize>, pair_queue: &mut Vec<usize>) -> bool {
        if let Ok(pos) = self.domains[v].binary_search(&c) {
            self.domains[v].remove(pos);
            self.trail.push(TrailEvent::Removed(v, c));
            match self.domains[v].len() {
                0 => return false,
                1 => queue.push(v),
                2 => pair_queue.push(v),
                _ => {}
            }
        }
        true
    }

    fn assign(&mut self, v: usize, c: u32) -> bool {
        let mut queue = vec![];
        let mut pair_queue = vec![];
        if !self.assign_inner(v, c, &mut queue, &mut pair_queue) {
            return false;
        }
        self.drain(queue, pair_queue)
    }

    fn assign_inner(&mut self, v: usize, c: u32, queue: &mut Vec<usize>, pair_queue: &mut Vec<usize>) -> bool {
        debug_assert_eq!(self.assigned[v], 0);
        self.assigned[v] = c;
        self.unassigned -= 1;
        self.trail.push(TrailEvent::Assigned(v));
        for &w in self.g.neighbors(v) {
            if self.assigned[w] == 0 {
                if !self.remove(w, c, queue, pair_queue) {
                    return false;
                }
            } else if self.assigned[w] == c {
                return false;
            }
        }
        true
    }

    fn drain(&mut self, mut queue: Vec<usize>, mut pair_queue: Vec<usize>) -> bool {
        loop {
            if let Some(v) = queue.pop() {
                if self.assigned[v] != 0 {
                    continue;
                }
                debug_assert_eq!(self.domains[v].len(), 1);
                let c = self.domains[v][0];
                if !self.assign_inner(v, c, &mut queue, &mut pair_queue) {
                    return false;
                }
            } else if let Some(v) = pair_queue.pop() {
                if self.assigned[v] != 0 || self.domains[v].len() != 2 {
                    continue;
                }
                if !self.pair_check_queued(v, &mut queue, &mut pair_queue) {
                    return false;
                }
            } else {
                return true;
            }
        }
    }

    fn pair_check(&mut self, v: usize) -> bool {
        let mut queue = vec![];
        let mut pair_queue = vec![];
        if !self.pair_check_queued(v, &mut queue, &mut pair_queue) {
            return false;
        }
        self.drain(queue, pair_queue)
    }

    fn pair_check_queued(&mut self, v: usize, queue: &mut Vec<usize>, pair_queue: &mut Vec<usize>) -> bool {
        let pair = self.domains[v].clone();
        debug_assert_eq!(pair.len(), 2);
        let partners: Vec<usize> = self
            .g
            .neighbors(v)
            .iter()
            .copied()
            .filter(|&u| self.assigned[u] == 0 && self.domains[u] == pair)
            .collect();
        for u in partners {
            // v and u must use both pair colors; common neighbors get neither.
            let commons: Vec<usize> = self
                .g
                .neighbors(v)
                .iter()
                .copied()
                .filter(|&x| x != u && self.assigned[x] == 0 && self.g.has_edge(x, u))
                .collect();
            for x in commons {
                for &c in &pair {
                    if !self.remove(x, c, queue, pair_queue) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Smallest-remaining-domain unassigned vertex, ties by index.
    fn pick(&self) -> Option<usize> {
        (1..=self.g.n())
            .filter(|&v| self.assigned[v] == 0)
            .min_by_key(|&v| (self.domains[v].len(), v))
    }

    fn search(&mut self) -> bool {
        let Some(v) = self.pick() else { return true };
        let colors = self.domains[v].clone();
        for c in colors {
            let mark = self.mark();
            if self.assign(v, c) && self.search() {
                return true;
            }
            self.undo_to(mark);
        }
        false
    }

    fn extract(&self) -> Coloring {
        Coloring::new(self.assigned[1..].to_vec())
    }
}

/// Finds a proper L-coloring satisfying `constraint`, or `None` when
/// uncolorable. Agrees with [`enumerate_l_colorings`] on emptiness.
pub fn find_coloring(g: &Graph, lists: &ListAssignment, constraint: &ColoringConstraint) -> Option<Coloring> {
    let mut solver = Solver::new(g, lists, constraint)?;
    if solver.search() {
        let coloring = solver.extract();
        debug_assert!(coloring.is_proper(g));
        Some(coloring)
    } else {
        None
    }
}

/// Maximizes the number of honored request vertices over all L-colorings by
/// branch and bound; returns `None` exactly when no L-coloring exists. The
/// bound is matches-so-far plus the number of still-undecided request
/// vertices.
pub fn max_request_match(g: &Graph, lists: &ListAssignment, r: &Request) -> Option<(usize, Coloring)> {
    let n = g.n();
    // Request vertices first: decisions about them tighten the bound early.
    let mut order: Vec<usize> = r.entries.keys().copied().collect();
    order.extend((1..=n).filter(|v| !r.entries.contains_key(v)));

    struct State<'a> {
        g: &'a Graph,
        lists: &'a ListAssignment,
        r: &'a Request,
        order: Vec<usize>,
        colors: Vec<u32>,
        best: Option<(usize, Vec<u32>)>,
    }

    fn rec(s: &mut State, depth: usize, matched: usize, undecided: usize) {
        if s.best.as_ref().is_some_and(|(b, _)| matched + undecided <= *b) {
            return;
        }
        if depth == s.order.len() {
            if s.best.as_ref().is_none_or(|(b, _)| matched > *b) {
                s.best = Some((matched, s.colors.clone()));
            }
            return;
        }
        let v = s.order[depth];
        let request_color = s.r.entries.get(&v).copied();
        let mut candidates: Vec<u32> = Vec::with_capacity(s.lists.list(v).len());
        if let Some(c) = request_color {
            candidates.push(c);
        }
        candidates.extend(s.lists.list(v).iter().copied().filter(|&c| Some(c) != request_color));
        for c in candidates {
            if s.g.neighbors(v).iter().any(|&w| s.colors[w] == c) {
                continue;
            }
            s.colors[v] = c;
            let hit = request_color == Some(c);
            rec(
                s,
                depth + 1,
                matched + usize::from(hit),
                undecided - usize::from(request_color.is_some()),
            );
            s.colors[v] = 0;
        }
    }

    let mut state = State { g, lists, r, order, colors: vec![0; n + 1], best: None };
    let undecided = r.entries.len();
    rec(&mut state, 0, 0, undecided);
    state.best.map(|(count, colors)| (count, Coloring::new(colors[1..].to_vec())))
}

/// Best collected weight of a weighted request over a given coloring set.
pub fn best_weighted_match<'a>(
    colorings: impl IntoIterator<Item = &'a Coloring>,
    w: &crate::graph::WeightedRequest,
) -> Option<(crate::rational::Rational, &'a Coloring)> {
    let mut best: Option<(crate::rational::Rational, &'a Coloring)> = None;
    for phi in colorings {
        let value = phi.matched_weight(w);
        if best.as_ref().is_none_or(|(b, _)| value > *b) {
            best = Some((value, phi));
        }
    }
    best
}

/// Produces an L-coloring in which no vertex other than `v` receives color
/// `c`: strip `c` from every other list, root a spanning tree at `v`, and
/// color greedily in reverse DFS order (children visited in ascending index,
/// smallest available color). Requires `g` connected and `|L(w)| > deg(w)`
/// for every vertex.
pub fn color_avoiding(g: &Graph, lists: &ListAssignment, v: usize, c: u32) -> Result<Coloring, ColoringError> {
    if g.n() == 0 || v == 0 || v > g.n() {
        return Err(ColoringError::PreconditionViolated("vertex out of range".into()));
    }
    if !g.is_connected() {
        return Err(ColoringError::PreconditionViolated("graph must be connected".into()));
    }
    for w in g.vertices() {
        if lists.list(w).len() <= g.degree(w) {
            return Err(ColoringError::PreconditionViolated(format!(
                "|L({w})| = {} <= deg({w}) = {}",
                lists.list(w).len(),
                g.degree(w)
            )));
        }
    }
    // DFS preorder from v, children in ascending index.
    let mut preorder = Vec::with_capacity(g.n());
    let mut seen = vec![false; g.n() + 1];
    let mut stack = vec![v];
    seen[v] = true;
    while let Some(u) = stack.pop() {
        preorder.push(u);
        // Reverse so that the smallest-index child is expanded first.
        for &w in g.neighbors(u).iter().rev() {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    let mut colors = vec![0u32; g.n() + 1];
    for &w in preorder.iter().rev() {
        let choice = lists
            .list(w)
            .iter()
            .copied()
            .filter(|&x| w == v || x != c)
            .find(|&x| g.neighbors(w).iter().all(|&y| colors[y] != x));
        match choice {
            Some(x) => colors[w] = x,
            None => unreachable!("greedy step always has a free color under the preconditions"),
        }
    }
    let coloring = Coloring::new(colors[1..].to_vec());
    debug_assert!(coloring.is_proper(g) && coloring.in_lists(lists));
    Ok(coloring)
}
