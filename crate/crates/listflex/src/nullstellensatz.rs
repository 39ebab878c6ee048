//! Graph-polynomial coefficient machinery: exact coefficient extraction by
//! capped sparse expansion, the permutation-shift combinatorics, certificate
//! coefficients of request monomials on maximal degenerate graphs (computed
//! two independent ways), and the coloring search backed by the nonvanishing
//! certificate.

use std::collections::HashMap;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::coloring::{find_coloring, ColoringConstraint};
use crate::graph::{Coloring, Graph, ListAssignment};

pub const DEFAULT_EXPANSION_CAP: u64 = 10_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NullError {
    #[error("cap exceeded: {0}")]
    CapExceeded(String),
    #[error("{0} + 1 is not prime")]
    NotPrime(usize),
    #[error("graph has degeneracy {degeneracy}, larger than d = {d}")]
    NotDegenerate { degeneracy: usize, d: usize },
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

/// Coefficient query against the graph polynomial: a vertex ordering (the
/// k-th position is variable `x_k`) and one target exponent per position.
#[derive(Debug, Clone)]
pub struct MonomialQuery {
    pub ordering: Vec<usize>,
    pub exponents: Vec<u64>,
}

fn validate_ordering(g: &Graph, ordering: &[usize]) -> Result<(), NullError> {
    if ordering.len() != g.n() {
        return Err(NullError::PreconditionViolated("ordering length mismatch".into()));
    }
    let mut seen = vec![false; g.n() + 1];
    for &v in ordering {
        if v == 0 || v > g.n() || seen[v] {
            return Err(NullError::PreconditionViolated("ordering is not a permutation".into()));
        }
        seen[v] = true;
    }
    Ok(())
}

/// Exact coefficient of the queried monomial in the graph polynomial
/// `p_G = prod_{edges, i < j} (x_j - x_i)` under the given ordering.
///
/// Sparse expansion edge by edge; any partial monomial exceeding the target
/// exponent in some variable is pruned. Queries whose target box
/// `prod (e_i + 1)` exceeds the cap are rejected.
pub fn graph_polynomial_coeff(g: &Graph, q: &MonomialQuery, cap: Option<u64>) -> Result<BigInt, NullError> {
    validate_ordering(g, &q.ordering)?;
    if q.exponents.len() != g.n() {
        return Err(NullError::PreconditionViolated("exponent vector length mismatch".into()));
    }
    let cap = cap.unwrap_or(DEFAULT_EXPANSION_CAP);
    let n = g.n();
    if n > 16 {
        return Err(NullError::CapExceeded("expansion supports at most 16 vertices".into()));
    }
    let mut box_size: u64 = 1;
    for &e in &q.exponents {
        if e > 255 {
            return Err(NullError::CapExceeded("per-variable exponent above 255".into()));
        }
        box_size = box_size
            .checked_mul(e + 1)
            .filter(|&b| b <= cap)
            .ok_or_else(|| NullError::CapExceeded(format!("target box above {cap}")))?;
    }
    // Total degree of every monomial of p_G is the edge count.
    if q.exponents.iter().sum::<u64>() != g.edge_count() as u64 {
        return Ok(BigInt::zero());
    }
    let mut position = vec![0usize; n + 1];
    for (k, &v) in q.ordering.iter().enumerate() {
        position[v] = k;
    }

    let pack = |exps: &[u8]| -> u128 {
        exps.iter().enumerate().fold(0u128, |acc, (i, &e)| acc | ((e as u128) << (8 * i)))
    };
    let target: Vec<u8> = q.exponents.iter().map(|&e| e as u8).collect();

    let mut table: HashMap<u128, BigInt> = HashMap::new();
    table.insert(0, BigInt::from(1));
    let mut exps = vec![0u8; n];
    for (u, v) in g.edges() {
        let (lo, hi) = {
            let (pu, pv) = (position[u], position[v]);
            (pu.min(pv), pu.max(pv))
        };
        let mut next: HashMap<u128, BigInt> = HashMap::with_capacity(table.len() * 2);
        for (&key, coeff) in &table {
            for i in 0..n {
                exps[i] = ((key >> (8 * i)) & 0xff) as u8;
            }
            // Factor (x_hi - x_lo): bump one of the two exponents.
            if exps[hi] < target[hi] {
                let k = key + (1u128 << (8 * hi));
                *next.entry(k).or_insert_with(BigInt::zero) += coeff;
            }
            if exps[lo] < target[lo] {
                let k = key + (1u128 << (8 * lo));
                *next.entry(k).or_insert_with(BigInt::zero) -= coeff;
            }
        }
        next.retain(|_, c| !c.is_zero());
        table = next;
    }
    Ok(table.remove(&pack(&target)).unwrap_or_else(BigInt::zero))
}

/// Sign of a bijection by inversion counting.
pub fn sign_of(values: &[usize]) -> i64 {
    let mut inversions = 0usize;
    for i in 0..values.len() {
        for j in i + 1..values.len() {
            if values[i] > values[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

fn is_shift_permutation(pi: &[usize], r: &[u64]) -> bool {
    let d = pi.len();
    let mut seen = vec![false; d + 1];
    for i in 0..d {
        let v = pi[i] + r[i] as usize;
        if v < 1 || v > d || seen[v] {
            return false;
        }
        seen[v] = true;
    }
    true
}

/// The displayed shift condition: for every position `t` with `r(t) > 0`,
/// `pi(t) = sum of r(j) over positions j with pi(j) < pi(t)`. Equivalent to
/// `pi + r` being a permutation of `1..=d`; both sides are computed and the
/// equivalence is asserted.
pub fn shift_condition(pi: &[usize], r: &[u64]) -> bool {
    let d = pi.len();
    assert_eq!(r.len(), d, "request vector length mismatch");
    assert_eq!(r.iter().sum::<u64>(), d as u64, "request must sum to d");
    let equation = (0..d).filter(|&t| r[t] > 0).all(|t| {
        let rhs: u64 = (0..d).filter(|&j| pi[j] < pi[t]).map(|j| r[j]).sum();
        pi[t] as u64 == rhs
    });
    let permutation = is_shift_permutation(pi, r);
    assert_eq!(equation, permutation, "shift equation must match the permutation test");
    equation
}

/// Enumerates all bijections `pi: {1..d} -> {0..d-1}` with `pi + r` a
/// permutation. Asserts the count is `k!(d-k)!` (k = number of positive
/// entries of `r`) and that every sign product `sgn(pi)sgn(pi+r)` equals
/// `(-1)^{k+d}`; returns both.
pub fn count_shiftable_bijections(d: usize, r: &[u64]) -> Result<(u64, i64), NullError> {
    if d == 0 || d > 8 {
        return Err(NullError::CapExceeded("d must lie in 1..=8 for enumeration".into()));
    }
    if r.len() != d || r.iter().sum::<u64>() != d as u64 {
        return Err(NullError::PreconditionViolated("request must have d entries summing to d".into()));
    }
    let mut count = 0u64;
    let mut sign_product: Option<i64> = None;
    for pi in (0..d).permutations(d) {
        if is_shift_permutation(&pi, r) {
            count += 1;
            let shifted: Vec<usize> = pi.iter().zip(r).map(|(&p, &x)| p + x as usize).collect();
            let product = sign_of(&pi) * sign_of(&shifted);
            match sign_product {
                None => sign_product = Some(product),
                Some(s) => assert_eq!(s, product, "sign products must be uniform"),
            }
        }
    }
    let k = r.iter().filter(|&&x| x > 0).count();
    let expected: u64 = (1..=k as u64).product::<u64>() * (1..=(d - k) as u64).product::<u64>();
    assert_eq!(count, expected, "count must be k!(d-k)!");
    let expected_sign = if (k + d) % 2 == 0 { 1 } else { -1 };
    let sign = sign_product.unwrap_or(expected_sign);
    assert_eq!(sign, expected_sign, "sign product must be (-1)^(k+d)");
    Ok((count, sign))
}

/// Min-degree removal with highest-index ties, reversed: a canonical
/// elimination ordering whose prefix structure suits clique completion.
fn completion_ordering(g: &Graph) -> Vec<usize> {
    let n = g.n();
    let mut deg: Vec<usize> = (0..=n).map(|v| if v == 0 { 0 } else { g.degree(v) }).collect();
    let mut alive = vec![true; n + 1];
    let mut removal = Vec::with_capacity(n);
    for _ in 0..n {
        let v = (1..=n)
            .filter(|&v| alive[v])
            .min_by_key(|&v| (deg[v], std::cmp::Reverse(v)))
            .expect("vertex remains");
        alive[v] = false;
        removal.push(v);
        for &w in g.neighbors(v) {
            if alive[w] {
                deg[w] -= 1;
            }
        }
    }
    removal.reverse();
    removal
}

/// Completes a d-degenerate graph to a maximal one: under the returned
/// ordering the first `d` vertices form a clique and every later vertex has
/// exactly `d` earlier neighbors. Added edges go to the smallest-position
/// earlier non-neighbors.
pub fn complete_to_maximal(g: &Graph, d: usize) -> Result<(Graph, Vec<usize>), NullError> {
    let (degeneracy, _) = crate::graph::degeneracy(g);
    if degeneracy > d {
        return Err(NullError::NotDegenerate { degeneracy, d });
    }
    if g.n() < d {
        return Err(NullError::PreconditionViolated(format!(
            "need at least d = {d} vertices, got {}",
            g.n()
        )));
    }
    let ordering = completion_ordering(g);
    let mut edges: Vec<(usize, usize)> = g.edges();
    let mut has: std::collections::BTreeSet<(usize, usize)> = edges.iter().copied().collect();
    for i in 0..ordering.len() {
        let v = ordering[i];
        let target = if i < d { i } else { d };
        let mut back = (0..i).filter(|&j| g.has_edge(ordering[j], v)).count();
        // Original back-degree never exceeds the target along this ordering.
        for j in 0..i {
            if back >= target {
                break;
            }
            let u = ordering[j];
            let key = (u.min(v), u.max(v));
            if !has.contains(&key) {
                has.insert(key);
                edges.push(key);
                back += 1;
            }
        }
        assert_eq!(back, target, "completion must reach the exact back-degree");
    }
    let completed = Graph::new(g.n(), &edges).expect("completion stays simple");
    Ok((completed, ordering))
}

fn validate_maximal(g: &Graph, ordering: &[usize], d: usize) -> Result<(), NullError> {
    validate_ordering(g, ordering)?;
    if g.n() < d {
        return Err(NullError::PreconditionViolated("fewer than d vertices".into()));
    }
    for i in 0..ordering.len() {
        let back = (0..i).filter(|&j| g.has_edge(ordering[j], ordering[i])).count();
        let expected = if i < d { i } else { d };
        if back != expected {
            return Err(NullError::PreconditionViolated(format!(
                "vertex at position {} has {} earlier neighbors, expected {}",
                i + 1,
                back,
                expected
            )));
        }
    }
    Ok(())
}

fn is_prime(p: usize) -> bool {
    if p < 2 {
        return false;
    }
    let mut f = 2;
    while f * f <= p {
        if p % f == 0 {
            return false;
        }
        f += 1;
    }
    true
}

/// The certificate coefficient of the request monomial: the signed sum over
/// permutations `sigma` of the coefficients of
/// `(1/h) * prod_{i<=d} x_i^{sigma(i)} * prod_{i>d} x_i^d` in the graph
/// polynomial, where `h` encodes the request (`r` is indexed by position
/// along `ordering` and must sum to `d`). Negative target exponents
/// contribute zero without touching the expander.
pub fn certificate_coefficient(
    g: &Graph,
    ordering: &[usize],
    r: &[u64],
    d: usize,
) -> Result<BigInt, NullError> {
    validate_maximal(g, ordering, d)?;
    if r.len() != g.n() || r.iter().sum::<u64>() != d as u64 {
        return Err(NullError::PreconditionViolated("request must have n entries summing to d".into()));
    }
    let n = g.n();
    let mut total = BigInt::zero();
    for sigma in (1..=d).permutations(d) {
        let mut exponents = Vec::with_capacity(n);
        let mut negative = false;
        for i in 0..n {
            let base = if i < d { sigma[i] as u64 } else { d as u64 };
            match base.checked_sub(r[i]) {
                Some(e) => exponents.push(e),
                None => {
                    negative = true;
                    break;
                }
            }
        }
        if negative {
            continue;
        }
        let coeff = graph_polynomial_coeff(
            g,
            &MonomialQuery { ordering: ordering.to_vec(), exponents },
            None,
        )?;
        if sign_of(&sigma) > 0 {
            total += coeff;
        } else {
            total -= coeff;
        }
    }
    Ok(total)
}

/// The same certificate reduced modulo `d + 1` (which must be prime),
/// computed by the inductive route: strip the last vertex, branch over the
/// subsets of its `d` earlier neighbors receiving one unit of the request,
/// and bottom out in the signed shift count on the base clique.
pub fn certificate_residue(g: &Graph, ordering: &[usize], r: &[u64], d: usize) -> Result<u64, NullError> {
    validate_maximal(g, ordering, d)?;
    if !is_prime(d + 1) {
        return Err(NullError::NotPrime(d));
    }
    if r.len() != g.n() || r.iter().sum::<u64>() != d as u64 {
        return Err(NullError::PreconditionViolated("request must have n entries summing to d".into()));
    }
    let n = g.n();
    let modulus = (d + 1) as i64;
    // Back-neighbor positions of each position.
    let mut back: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        for j in 0..i {
            if g.has_edge(ordering[j], ordering[i]) {
                back[i].push(j);
            }
        }
    }

    fn base_residue(r: &[u64], modulus: i64) -> i64 {
        let d = r.len();
        let mut sum = 0i64;
        for pi in (0..d).permutations(d) {
            if is_shift_permutation(&pi, r) {
                let shifted: Vec<usize> = pi.iter().zip(r).map(|(&p, &x)| p + x as usize).collect();
                sum += sign_of(&pi) * sign_of(&shifted);
            }
        }
        sum.rem_euclid(modulus)
    }

    fn recurse(level: usize, r: &[u64], back: &[Vec<usize>], d: usize, modulus: i64) -> i64 {
        if level == d {
            return base_residue(&r[..d], modulus);
        }
        let rn = r[level - 1];
        let neighbors = &back[level - 1];
        debug_assert_eq!(neighbors.len(), d);
        let mut sum = 0i64;
        for subset in neighbors.iter().copied().combinations(rn as usize) {
            let mut shrunk = r[..level - 1].to_vec();
            for j in subset {
                shrunk[j] += 1;
            }
            sum = (sum + recurse(level - 1, &shrunk, back, d, modulus)) % modulus;
        }
        let signed = if rn % 2 == 0 { sum } else { -sum };
        signed.rem_euclid(modulus)
    }

    Ok(recurse(n, r, &back, d, modulus) as u64)
}

/// Finds an L-coloring of a d-degenerate graph whose lists may be short by
/// the request amount: `|L(v_i)| >= d + 1 - r(i)` with `r` summing to `d` and
/// `d + 1` prime guarantee colorability; the search realizes the coloring. A
/// search failure would falsify the guarantee and is surfaced loudly.
pub fn color_deficient_lists(
    g: &Graph,
    lists: &ListAssignment,
    d: usize,
    r: &[u64],
) -> Result<Coloring, NullError> {
    if !is_prime(d + 1) {
        return Err(NullError::NotPrime(d));
    }
    let (degeneracy, _) = crate::graph::degeneracy(g);
    if degeneracy > d {
        return Err(NullError::NotDegenerate { degeneracy, d });
    }
    if r.len() != g.n() || r.iter().sum::<u64>() != d as u64 {
        return Err(NullError::PreconditionViolated("request must have n entries summing to d".into()));
    }
    for v in g.vertices() {
        let needed = (d as u64 + 1).saturating_sub(r[v - 1]) as usize;
        if lists.list(v).len() < needed {
            return Err(NullError::PreconditionViolated(format!(
                "|L({v})| = {} below d + 1 - r = {needed}",
                lists.list(v).len()
            )));
        }
    }
    find_coloring(g, lists, &ColoringConstraint::none()).ok_or_else(|| {
        NullError::Internal(
            "no coloring found although the nonvanishing certificate guarantees one".into(),
        )
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn coeff(g: &Graph, ordering: &[usize], exponents: &[u64]) -> BigInt {
        graph_polynomial_coeff(
            g,
            &MonomialQuery { ordering: ordering.to_vec(), exponents: exponents.to_vec() },
            None,
        )
        .unwrap()
    }

    #[test]
    fn k2_polynomial() {
        let g = Graph::complete(2);
        assert_eq!(coeff(&g, &[1, 2], &[0, 1]), BigInt::from(1));
        assert_eq!(coeff(&g, &[1, 2], &[1, 0]), BigInt::from(-1));
    }

    #[test]
    fn k3_polynomial() {
        let g = Graph::complete(3);
        // Vandermonde: leading term +x2 x3^2, no x1 x2 x3 term.
        assert_eq!(coeff(&g, &[1, 2, 3], &[0, 1, 2]), BigInt::from(1));
        assert_eq!(coeff(&g, &[1, 2, 3], &[1, 1, 1]), BigInt::from(0));
        // Degree mismatch short-circuits to zero.
        assert_eq!(coeff(&g, &[1, 2, 3], &[0, 0, 1]), BigInt::from(0));
    }

    #[test]
    fn shift_condition_cases() {
        assert!(shift_condition(&[0, 1], &[2, 0]));
        assert!(!shift_condition(&[1, 0], &[2, 0]));
        // Single positive entry r(t) = d: the condition reads pi(t) = 0.
        assert!(shift_condition(&[0, 1, 2], &[3, 0, 0]));
        assert!(!shift_condition(&[1, 0, 2], &[3, 0, 0]));
    }

    #[test]
    fn count_shiftable_cases() {
        assert_eq!(count_shiftable_bijections(2, &[2, 0]).unwrap(), (1, -1));
        assert_eq!(count_shiftable_bijections(2, &[1, 1]).unwrap(), (2, 1));
        assert_eq!(count_shiftable_bijections(4, &[4, 0, 0, 0]).unwrap(), (6, -1));
    }

    /// Exhaustive equivalence of the shift equation with the permutation
    /// test, and the count/sign formulas, for all d <= 5 and all requests.
    #[test]
    fn shift_lemma_exhaustive_small() {
        for d in 1..=5usize {
            for r in catalog::requests_with_sum(d, d as u64) {
                for pi in (0..d).permutations(d) {
                    // shift_condition internally asserts the equivalence.
                    let _ = shift_condition(&pi, &r);
                }
                let _ = count_shiftable_bijections(d, &r).unwrap();
            }
        }
    }

    #[test]
    fn complete_to_maximal_cases() {
        let k3 = Graph::complete(3);
        let (g, ordering) = complete_to_maximal(&k3, 2).unwrap();
        assert_eq!(g.edges(), k3.edges());
        assert_eq!(ordering, vec![1, 2, 3]);

        let p3 = Graph::path(3);
        let (g, _) = complete_to_maximal(&p3, 2).unwrap();
        assert_eq!(g.edge_count(), 3);

        let edgeless = Graph::new(3, &[]).unwrap();
        let (g, _) = complete_to_maximal(&edgeless, 2).unwrap();
        assert_eq!(g.edge_count(), 3);

        assert!(matches!(
            complete_to_maximal(&Graph::complete(4), 2),
            Err(NullError::NotDegenerate { degeneracy: 3, d: 2 })
        ));
    }

    #[test]
    fn certificate_base_cases() {
        let k2 = Graph::complete(2);
        assert_eq!(certificate_coefficient(&k2, &[1, 2], &[2, 0], 2).unwrap(), BigInt::from(-1));
        assert_eq!(certificate_coefficient(&k2, &[1, 2], &[1, 1], 2).unwrap(), BigInt::from(2));
        assert_eq!(certificate_residue(&k2, &[1, 2], &[2, 0], 2).unwrap(), 2);
        assert_eq!(certificate_residue(&k2, &[1, 2], &[1, 1], 2).unwrap(), 2);
    }

    /// Claim-1 style check at d = 2 on a sample of maximal graphs: both
    /// routes agree and the residue is -1 mod 3. (The acceptance suite runs
    /// the full catalog.)
    #[test]
    fn certificate_routes_agree_d2() {
        for n in 2..=5usize {
            for (g, ordering) in catalog::maximal_degenerate_graphs(2, n) {
                for r in catalog::requests_with_sum(n, 2) {
                    let direct = certificate_coefficient(&g, &ordering, &r, 2).unwrap();
                    let residue = certificate_residue(&g, &ordering, &r, 2).unwrap();
                    let direct_mod = ((direct.clone() % 3i32) + 3i32) % 3i32;
                    assert_eq!(direct_mod, BigInt::from(residue), "direct {direct} vs residue {residue}");
                    assert_eq!(residue, 2, "certificate must be -1 mod 3");
                }
            }
        }
    }

    /// d = 4 (5 prime) on the K5 base case, all requests.
    #[test]
    fn certificate_routes_agree_d4_base() {
        let k5 = Graph::complete(5);
        let ordering: Vec<usize> = (1..=5).collect();
        for r in catalog::requests_with_sum(5, 4) {
            let direct = certificate_coefficient(&k5, &ordering, &r, 4).unwrap();
            let residue = certificate_residue(&k5, &ordering, &r, 4).unwrap();
            let direct_mod = ((direct % 5i32) + 5i32) % 5i32;
            assert_eq!(direct_mod, BigInt::from(residue));
            assert_eq!(residue, 4);
        }
    }

    /// Composite d + 1: the residue route refuses, the direct route still
    /// computes (and no assertion fires).
    #[test]
    fn composite_modulus_not_asserted() {
        let k3 = Graph::complete(3);
        let ordering = vec![1, 2, 3];
        assert!(matches!(
            certificate_residue(&k3, &ordering, &[3, 0, 0], 3),
            Err(NullError::NotPrime(3))
        ));
        let _ = certificate_coefficient(&k3, &ordering, &[3, 0, 0], 3).unwrap();
    }

    #[test]
    fn deficient_coloring_cases() {
        // K3 with L(v1) = {5} and full lists elsewhere; r = (2,0,0).
        let k3 = Graph::complete(3);
        let lists = ListAssignment::new(vec![vec![5], vec![1, 2, 3], vec![1, 2, 3]]).unwrap();
        let phi = color_deficient_lists(&k3, &lists, 2, &[2, 0, 0]).unwrap();
        assert_eq!(phi.get(1), 5);
        assert!(phi.is_proper(&k3));

        // d = 3 has composite d + 1.
        assert!(matches!(
            color_deficient_lists(&k3, &lists, 3, &[3, 0, 0]),
            Err(NullError::NotPrime(3))
        ));
    }

    /// Nonvanishing coefficients certify colorability: for tiny graphs and
    /// every exponent vector with a nonzero coefficient, every assignment
    /// with |L(v_i)| = e_i + 1 from a five-color universe is colorable.
    #[test]
    fn nonzero_coefficient_implies_colorable() {
        let universe: Vec<u32> = (1..=5).collect();
        let graphs = vec![Graph::path(3), Graph::complete(3), Graph::cycle(4)];
        for g in graphs {
            let n = g.n();
            let m = g.edge_count() as u64;
            let ordering: Vec<usize> = (1..=n).collect();
            for exponents in catalog::requests_with_sum(n, m) {
                if exponents.iter().any(|&e| e > 3) {
                    continue;
                }
                let c = coeff(&g, &ordering, &exponents);
                if c.is_zero() {
                    continue;
                }
                let list_options: Vec<Vec<Vec<u32>>> = exponents
                    .iter()
                    .map(|&e| universe.iter().copied().combinations(e as usize + 1).collect())
                    .collect();
                for assignment in list_options.into_iter().multi_cartesian_product() {
                    let lists = ListAssignment::new(assignment).unwrap();
                    assert!(
                        find_coloring(&g, &lists, &ColoringConstraint::none()).is_some(),
                        "nonzero coefficient but uncolorable assignment found"
                    );
                }
            }
        }
    }
}
