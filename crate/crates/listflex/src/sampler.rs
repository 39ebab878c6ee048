//! Randomized coloring procedures with exactly computable distributions.
//!
//! The weak-degeneracy procedure peels the graph by canonical reduction steps
//! and colors each peeled block uniformly among its residual list colorings;
//! the recursion makes every marginal lower-boundable. The mad procedure
//! handles independent-set requests on graphs of bounded maximum average
//! degree by random list thinning followed by targeted recoloring.

use std::collections::BTreeMap;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::coloring::enumerate_l_colorings;
use crate::flexibility::ColoringDistribution;
use crate::graph::{Coloring, Graph, ListAssignment, Request, WeakReductionStep};
use crate::rational::{pow, ratio_u, Rational};
use num_traits::{One, Zero};

pub const DEFAULT_SUPPORT_CAP: u64 = 1_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SamplerError {
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("support cap exceeded ({0})")]
    CapExceeded(u64),
    #[error("avoidance set has {got} vertices, more than d = {d}")]
    SetTooLarge { got: usize, d: usize },
    #[error("choosability oracle failed to produce a coloring")]
    OracleFailure,
    #[error("marginal Prob[phi({vertex}) = {color}] = {marginal} below the bound {bound}")]
    MarginalBelowBound { vertex: usize, color: u32, marginal: Rational, bound: Rational },
    #[error("avoidance probability {probability} below the bound {bound}")]
    AvoidanceBelowBound { probability: Rational, bound: Rational },
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

/// The constants attached to the weak-degeneracy procedure for a given `d`:
/// `delta = 1/(d+2)^(d+1)` and `epsilon = delta^(d+1)`.
#[derive(Debug, Clone)]
pub struct FlexConstants {
    pub d: usize,
    pub delta: Rational,
    pub epsilon: Rational,
}

impl FlexConstants {
    pub fn new(d: usize) -> Self {
        let delta = Rational::one() / pow(&ratio_u(d as u64 + 2, 1), d as u64 + 1);
        let epsilon = pow(&delta, d as u64 + 1);
        FlexConstants { d, delta, epsilon }
    }
}

/// Exact per-pair probabilities of a coloring distribution.
#[derive(Debug, Clone)]
pub struct MarginalTable {
    pub probs: BTreeMap<(usize, u32), Rational>,
}

impl MarginalTable {
    pub fn get(&self, v: usize, c: u32) -> Rational {
        self.probs.get(&(v, c)).cloned().unwrap_or_else(Rational::zero)
    }
}

fn check_preconditions(g: &Graph, lists: &ListAssignment, d: usize) -> Result<Vec<WeakReductionStep>, SamplerError> {
    if lists.n() != g.n() {
        return Err(SamplerError::PreconditionViolated("list assignment size mismatch".into()));
    }
    for v in g.vertices() {
        if lists.list(v).len() != d + 2 {
            return Err(SamplerError::PreconditionViolated(format!(
                "|L({v})| = {} but the procedure needs exactly d + 2 = {}",
                lists.list(v).len(),
                d + 2
            )));
        }
    }
    crate::graph::weak_peel_sequence(g, d)
        .ok_or_else(|| SamplerError::PreconditionViolated("graph is not weakly d-degenerate".into()))
}

/// Residual list colorings of the block `p` given the partial coloring:
/// colors of already-colored outside neighbors are stripped. Returns the
/// block colorings as (vertex, color) rows in a deterministic order.
fn block_colorings(
    g: &Graph,
    lists: &ListAssignment,
    partial: &[u32],
    p: &[usize],
) -> Vec<Vec<(usize, u32)>> {
    let (sub, back) = g.induced(p);
    let mut sub_lists = Vec::with_capacity(p.len());
    for (i, &v) in back.iter().enumerate() {
        let stripped: Vec<u32> = lists
            .list(v)
            .iter()
            .copied()
            .filter(|&c| g.neighbors(v).iter().all(|&u| partial[u] != c))
            .collect();
        // |L'(v)| always exceeds the in-block degree, so the block is
        // greedily colorable; a wipeout here would falsify the recursion.
        assert!(
            stripped.len() > sub.degree(i + 1),
            "residual list of vertex {v} too small for its block"
        );
        sub_lists.push(stripped);
    }
    let sub_assignment = ListAssignment::new(sub_lists).expect("residual lists are nonempty");
    let enumeration = enumerate_l_colorings(&sub, &sub_assignment, None);
    assert!(!enumeration.colorings.is_empty(), "block must be colorable");
    enumeration
        .colorings
        .iter()
        .map(|phi| back.iter().enumerate().map(|(i, &v)| (v, phi.get(i + 1))).collect())
        .collect()
}

/// One coloring drawn from the procedure's distribution, deterministic in the
/// seed (ChaCha8). Blocks are colored in reverse peel order, matching the
/// recursive description.
pub fn sample_coloring(g: &Graph, lists: &ListAssignment, d: usize, seed: u64) -> Result<Coloring, SamplerError> {
    let steps = check_preconditions(g, lists, d)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut partial = vec![0u32; g.n() + 1];
    for step in steps.iter().rev() {
        let p = step.vertices();
        let options = block_colorings(g, lists, &partial, &p);
        let pick = &options[rng.gen_range(0..options.len())];
        for &(v, c) in pick {
            partial[v] = c;
        }
    }
    let coloring = Coloring::new(partial[1..].to_vec());
    debug_assert!(coloring.is_proper(g) && coloring.in_lists(lists));
    Ok(coloring)
}

/// The full distribution of the procedure with canonical block choices,
/// computed by recursive enumeration with exact probabilities.
pub fn exact_distribution(
    g: &Graph,
    lists: &ListAssignment,
    d: usize,
    cap: Option<u64>,
) -> Result<ColoringDistribution, SamplerError> {
    let steps = check_preconditions(g, lists, d)?;
    let cap = cap.unwrap_or(DEFAULT_SUPPORT_CAP);
    let mut support: Vec<(Vec<u32>, Rational)> = vec![(vec![0u32; g.n() + 1], Rational::one())];
    for step in steps.iter().rev() {
        let p = step.vertices();
        let mut next = Vec::new();
        for (partial, prob) in &support {
            let options = block_colorings(g, lists, partial, &p);
            let share = prob / ratio_u(options.len() as u64, 1);
            for option in &options {
                let mut extended = partial.clone();
                for &(v, c) in option {
                    extended[v] = c;
                }
                next.push((extended, share.clone()));
            }
            if next.len() as u64 > cap {
                return Err(SamplerError::CapExceeded(cap));
            }
        }
        support = next;
    }
    let support = support
        .into_iter()
        .map(|(partial, prob)| (Coloring::new(partial[1..].to_vec()), prob))
        .collect();
    let dist = ColoringDistribution { support };
    debug_assert!(dist.is_valid(g, lists));
    Ok(dist)
}

pub fn marginals_of(dist: &ColoringDistribution, lists: &ListAssignment) -> MarginalTable {
    let mut probs = BTreeMap::new();
    for (v, c) in lists.pairs() {
        probs.insert((v, c), dist.marginal(v, c));
    }
    MarginalTable { probs }
}

/// Exact marginal table of the procedure. Asserts the guarantee
/// `Prob[φ(v) = c] >= epsilon(d)` for every pair, surfacing a violation as a
/// typed error with the witnessing pair.
pub fn exact_marginals(
    g: &Graph,
    lists: &ListAssignment,
    d: usize,
    cap: Option<u64>,
) -> Result<MarginalTable, SamplerError> {
    let dist = exact_distribution(g, lists, d, cap)?;
    let table = marginals_of(&dist, lists);
    let constants = FlexConstants::new(d);
    for (&(v, c), p) in &table.probs {
        if p < &constants.epsilon {
            return Err(SamplerError::MarginalBelowBound {
                vertex: v,
                color: c,
                marginal: p.clone(),
                bound: constants.epsilon,
            });
        }
    }
    Ok(table)
}

/// Exact probability that no vertex of `s` receives color `c` under the
/// procedure's distribution; asserts the `delta^{|s|}` lower bound.
pub fn avoidance_probability(
    g: &Graph,
    lists: &ListAssignment,
    d: usize,
    s: &[usize],
    c: u32,
    cap: Option<u64>,
) -> Result<Rational, SamplerError> {
    if s.len() > d {
        return Err(SamplerError::SetTooLarge { got: s.len(), d });
    }
    let dist = exact_distribution(g, lists, d, cap)?;
    let mut probability = Rational::zero();
    for (phi, p) in &dist.support {
        if s.iter().all(|&v| phi.get(v) != c) {
            probability += p;
        }
    }
    let bound = pow(&FlexConstants::new(d).delta, s.len() as u64);
    if probability < bound {
        return Err(SamplerError::AvoidanceBelowBound { probability, bound });
    }
    Ok(probability)
}

/// Coloring oracle used by [`run_mad_procedure`]: must return a proper
/// coloring from the given lists when one exists. The graph handed to it is a
/// relabeled induced subgraph.
pub type ChoosabilityOracle<'a> = &'a mut dyn FnMut(&Graph, &ListAssignment) -> Option<Coloring>;

/// The request-satisfaction pipeline for graphs of maximum average degree at
/// most `d` that are `(d-1)`-choosable:
///
/// 1. obtain a proper `(d-1)`-coloring from the oracle and restrict the
///    request to the color class meeting it most (an independent set),
/// 2. repeatedly strip non-request vertices of degree below `d`,
/// 3. delete one uniformly random color from each remaining non-request
///    vertex's (trimmed, size-`d`) list and color with the oracle,
/// 4. flip each request vertex to its preferred color whenever that color is
///    absent from its neighborhood, and
/// 5. greedily restore the stripped vertices in reverse order.
pub fn run_mad_procedure(
    g: &Graph,
    lists: &ListAssignment,
    r: &Request,
    d: usize,
    oracle: ChoosabilityOracle,
    seed: u64,
) -> Result<Coloring, SamplerError> {
    let n = g.n();
    if d < 2 {
        return Err(SamplerError::PreconditionViolated("the procedure needs d >= 2".into()));
    }
    if n == 0 {
        return Ok(Coloring::new(vec![]));
    }
    let mad = crate::graph::max_average_degree(g)
        .map_err(|_| SamplerError::PreconditionViolated("empty graph".into()))?;
    if mad > ratio_u(d as u64, 1) {
        return Err(SamplerError::PreconditionViolated(format!(
            "maximum average degree {mad} exceeds d = {d}"
        )));
    }
    r.validate(g, lists)
        .map_err(|e| SamplerError::PreconditionViolated(format!("bad request: {e}")))?;

    // Trim lists to size exactly d, keeping the smallest colors but always
    // retaining the requested color so the request stays valid.
    let mut trimmed = Vec::with_capacity(n);
    for v in 1..=n {
        let list = lists.list(v);
        if list.len() < d {
            return Err(SamplerError::PreconditionViolated(format!(
                "|L({v})| = {} below d = {d}",
                list.len()
            )));
        }
        let mut kept: Vec<u32> = list[..d].to_vec();
        if let Some(&c) = r.entries.get(&v) {
            if !kept.contains(&c) {
                kept.pop();
                kept.push(c);
                kept.sort_unstable();
            }
        }
        trimmed.push(kept);
    }
    let trimmed = ListAssignment::new(trimmed).expect("trimmed lists are nonempty");

    // Proper (d-1)-coloring; the class meeting dom(r) the most is kept.
    let palette: Vec<u32> = (1..=(d as u32 - 1)).collect();
    let base = oracle(g, &ListAssignment::uniform(n, &palette)).ok_or(SamplerError::OracleFailure)?;
    if !(base.is_proper(g) && base.n() == n) {
        return Err(SamplerError::Internal("oracle returned an improper coloring".into()));
    }
    let class = palette
        .iter()
        .copied()
        .max_by_key(|&c| {
            (
                r.entries.keys().filter(|&&v| base.get(v) == c).count(),
                std::cmp::Reverse(c),
            )
        })
        .expect("palette nonempty");
    let r1 = Request::new(
        r.entries.iter().filter(|&(&v, _)| base.get(v) == class).map(|(&v, &c)| (v, c)).collect(),
    );

    // Strip low-degree non-request vertices, lowest index first.
    let mut alive = vec![true; n + 1];
    let mut stripped = Vec::new();
    loop {
        let next = (1..=n).find(|&v| {
            alive[v]
                && !r1.entries.contains_key(&v)
                && g.neighbors(v).iter().filter(|&&u| alive[u]).count() < d
        });
        match next {
            Some(v) => {
                alive[v] = false;
                stripped.push(v);
            }
            None => break,
        }
    }
    let kept: Vec<usize> = (1..=n).filter(|&v| alive[v]).collect();

    let mut colors = vec![0u32; n + 1];
    if !kept.is_empty() {
        // Random deletion of one color per non-request vertex.
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut reduced_lists = Vec::with_capacity(kept.len());
        for &v in &kept {
            let list = trimmed.list(v);
            if r1.entries.contains_key(&v) {
                reduced_lists.push(list.to_vec());
            } else {
                let drop = rng.gen_range(0..list.len());
                reduced_lists.push(
                    list.iter().enumerate().filter(|&(i, _)| i != drop).map(|(_, &c)| c).collect(),
                );
            }
        }
        let (sub, back) = g.induced(&kept);
        let sub_lists = ListAssignment::new(reduced_lists).expect("reduced lists are nonempty");
        let phi0 = oracle(&sub, &sub_lists).ok_or(SamplerError::OracleFailure)?;
        if !(phi0.n() == sub.n() && phi0.is_proper(&sub) && phi0.in_lists(&sub_lists)) {
            return Err(SamplerError::Internal("oracle returned an invalid coloring".into()));
        }
        for (i, &v) in back.iter().enumerate() {
            colors[v] = phi0.get(i + 1);
        }

        // Independence of dom(r1) makes the simultaneous flips safe.
        let dom: Vec<usize> = r1.entries.keys().copied().collect();
        for (i, &u) in dom.iter().enumerate() {
            for &v in &dom[i + 1..] {
                if g.has_edge(u, v) {
                    return Err(SamplerError::Internal("request domain is not independent".into()));
                }
            }
        }
        for (&v, &c) in &r1.entries {
            let blocked = g.neighbors(v).iter().any(|&u| alive[u] && colors[u] == c);
            if !blocked {
                colors[v] = c;
            }
        }
    }

    // Restore stripped vertices greedily in reverse order.
    for &v in stripped.iter().rev() {
        alive[v] = true;
        let choice = trimmed
            .list(v)
            .iter()
            .copied()
            .find(|&c| g.neighbors(v).iter().all(|&u| !alive[u] || colors[u] != c));
        match choice {
            Some(c) => colors[v] = c,
            None => unreachable!("stripped vertices have more colors than colored neighbors"),
        }
    }

    let coloring = Coloring::new(colors[1..].to_vec());
    debug_assert!(coloring.is_proper(g) && coloring.in_lists(&trimmed));
    Ok(coloring)
}

/// Backtracking-based oracle suitable for desk-scale runs.
pub fn exact_oracle(g: &Graph, lists: &ListAssignment) -> Option<Coloring> {
    crate::coloring::find_coloring(g, lists, &crate::coloring::ColoringConstraint::none())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn lists(l: &[&[u32]]) -> ListAssignment {
        ListAssignment::new(l.iter().map(|s| s.to_vec()).collect()).unwrap()
    }

    #[test]
    fn constants_follow_the_formulas() {
        let c0 = FlexConstants::new(0);
        assert_eq!(c0.delta, ratio(1, 2));
        assert_eq!(c0.epsilon, ratio(1, 2));
        let c1 = FlexConstants::new(1);
        assert_eq!(c1.delta, ratio(1, 9));
        assert_eq!(c1.epsilon, ratio(1, 81));
        let c2 = FlexConstants::new(2);
        assert_eq!(c2.delta, ratio(1, 64));
        assert_eq!(c2.epsilon, ratio(1, 262144));
    }

    #[test]
    fn k2_marginals_are_half() {
        let g = Graph::complete(2);
        let l = ListAssignment::uniform(2, &[1, 2]);
        let table = exact_marginals(&g, &l, 0, None).unwrap();
        for (v, c) in l.pairs() {
            assert_eq!(table.get(v, c), ratio(1, 2));
        }
    }

    #[test]
    fn single_vertex_marginals() {
        let g = Graph::new(1, &[]).unwrap();
        let l = ListAssignment::uniform(1, &[1, 2]);
        let table = exact_marginals(&g, &l, 0, None).unwrap();
        assert_eq!(table.get(1, 1), ratio(1, 2));
        assert_eq!(table.get(1, 2), ratio(1, 2));
    }

    #[test]
    fn k4_marginals_meet_the_d2_bound() {
        let g = Graph::complete(4);
        let l = ListAssignment::uniform(4, &[1, 2, 3, 4]);
        let table = exact_marginals(&g, &l, 2, None).unwrap();
        let eps = FlexConstants::new(2).epsilon;
        for (v, c) in l.pairs() {
            assert!(table.get(v, c) >= eps);
        }
        // By symmetry every marginal is exactly 1/4 here.
        assert_eq!(table.get(1, 1), ratio(1, 4));
    }

    /// The d = 0 guarantee fails on chains: coloring the path 1-2-3 in the
    /// canonical order 3, 2, 1 with lists {2,3}, {1,3}, {1,2} pushes
    /// Prob[φ(1) = 3] down to 1/8 < 1/2. The violation is a genuine property
    /// of the sequential recursion at d = 0 (every peel order eats endpoints
    /// of a path), and the marginal assertion surfaces it.
    #[test]
    fn d0_chain_counterexample_is_detected() {
        let g = Graph::path(3);
        let l = lists(&[&[2, 3], &[1, 3], &[1, 2]]);
        let dist = exact_distribution(&g, &l, 0, None).unwrap();
        assert_eq!(dist.marginal(1, 3), ratio(1, 8));
        let err = exact_marginals(&g, &l, 0, None).unwrap_err();
        assert_eq!(
            err,
            SamplerError::MarginalBelowBound {
                vertex: 1,
                color: 3,
                marginal: ratio(1, 8),
                bound: ratio(1, 2),
            }
        );
    }

    #[test]
    fn avoidance_cases() {
        let g = Graph::complete(2);
        let l = ListAssignment::uniform(2, &[1, 2]);
        assert_eq!(avoidance_probability(&g, &l, 0, &[], 1, None).unwrap(), ratio(1, 1));
        assert_eq!(
            avoidance_probability(&g, &l, 0, &[1], 1, None),
            Err(SamplerError::SetTooLarge { got: 1, d: 0 })
        );

        let p3 = Graph::path(3);
        let l3 = ListAssignment::uniform(3, &[1, 2, 3]);
        let p = avoidance_probability(&p3, &l3, 1, &[2], 1, None).unwrap();
        assert!(p >= ratio(1, 9));
    }

    #[test]
    fn sampler_respects_preconditions() {
        let g = Graph::complete(4);
        let l = ListAssignment::uniform(4, &[1, 2, 3]);
        assert!(matches!(
            sample_coloring(&g, &l, 2, 7),
            Err(SamplerError::PreconditionViolated(_))
        ));
        let l4 = ListAssignment::uniform(4, &[1, 2, 3]);
        assert!(matches!(
            sample_coloring(&g, &l4, 1, 7),
            Err(SamplerError::PreconditionViolated(_))
        ));
    }

    #[test]
    fn sampler_output_contract() {
        let g = Graph::path(3);
        let l = ListAssignment::uniform(3, &[1, 2, 3]);
        for seed in 0..50 {
            let phi = sample_coloring(&g, &l, 1, seed).unwrap();
            assert!(phi.is_proper(&g) && phi.in_lists(&l));
        }
        assert_eq!(sample_coloring(&g, &l, 1, 42).unwrap(), sample_coloring(&g, &l, 1, 42).unwrap());
    }

    /// Empirical frequencies of the sampler converge to the exact
    /// distribution (total-variation check at fixed seeds).
    #[test]
    fn sampler_matches_exact_distribution() {
        let g = Graph::complete(2);
        let l = ListAssignment::uniform(2, &[1, 2]);
        let dist = exact_distribution(&g, &l, 0, None).unwrap();
        let trials = 100_000u64;
        let mut counts: BTreeMap<Vec<u32>, u64> = BTreeMap::new();
        for seed in 0..trials {
            let phi = sample_coloring(&g, &l, 0, seed).unwrap();
            *counts.entry(phi.as_slice().to_vec()).or_default() += 1;
        }
        let mut tv = ratio(0, 1);
        for (phi, p) in &dist.support {
            let freq = ratio_u(counts.get(phi.as_slice()).copied().unwrap_or(0), trials);
            let diff = if freq > *p { freq - p.clone() } else { p.clone() - freq };
            tv += diff;
        }
        assert!(tv < ratio(1, 50), "total variation {tv} too large");
    }

    #[test]
    fn mad_procedure_output_contract() {
        let g = Graph::cycle(6);
        let l = ListAssignment::uniform(6, &[1, 2, 3]);
        let r = Request::from_pairs(&[(1, 1)]);
        for seed in 0..50 {
            let phi = run_mad_procedure(&g, &l, &r, 3, &mut exact_oracle, seed).unwrap();
            assert!(phi.is_proper(&g) && phi.in_lists(&l));
        }
    }

    #[test]
    fn mad_procedure_empty_request_passthrough() {
        let g = Graph::cycle(6);
        let l = ListAssignment::uniform(6, &[1, 2, 3]);
        let phi = run_mad_procedure(&g, &l, &Request::default(), 3, &mut exact_oracle, 1).unwrap();
        assert!(phi.is_proper(&g) && phi.in_lists(&l));
    }

    #[test]
    fn mad_procedure_rejects_dense_graphs() {
        let g = Graph::complete(5);
        let l = ListAssignment::uniform(5, &[1, 2, 3]);
        assert!(matches!(
            run_mad_procedure(&g, &l, &Request::default(), 3, &mut exact_oracle, 1),
            Err(SamplerError::PreconditionViolated(_))
        ));
    }

    #[test]
    fn mad_procedure_trims_oversized_lists() {
        let g = Graph::cycle(6);
        let l = ListAssignment::uniform(6, &[1, 2, 3, 4]);
        let r = Request::from_pairs(&[(1, 4)]);
        let phi = run_mad_procedure(&g, &l, &r, 3, &mut exact_oracle, 3).unwrap();
        assert!(phi.is_proper(&g));
        // The requested color survives trimming, so the flip can fire.
        assert_eq!(phi.get(1), 4);
    }
}
