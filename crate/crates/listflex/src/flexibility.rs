//! Flexibility of a graph with a list assignment: exact epsilon over all
//! requests, LP-certified weighted flexibility with a distribution and a dual
//! witness, and the deterministic peeling reduction from weighted to
//! unweighted flexibility.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::coloring::{enumerate_l_colorings, find_coloring, max_request_match, ColoringConstraint};
use crate::graph::{Coloring, Graph, ListAssignment, Request, WeightedRequest};
use crate::lp::{simplex_solve, LpInstance, LpOutcome, LpRow, Sense};
use crate::rational::{pow, ratio_u, Rational};

pub const DEFAULT_REQUEST_CAP: u64 = 1_000_000;
pub const DEFAULT_COLORING_CAP: u64 = 200_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FlexError {
    #[error("request has empty domain")]
    EmptyRequest,
    #[error("graph is not L-colorable")]
    Uncolorable,
    #[error("enumeration cap exceeded ({0})")]
    CapExceeded(u64),
    #[error("oracle violation: {0}")]
    OracleViolation(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

/// Exact flexibility value together with a minimizing request.
#[derive(Debug, Clone)]
pub struct FlexReport {
    pub epsilon: Rational,
    pub worst_request: Request,
    pub colorable: bool,
}

/// Probability distribution over proper L-colorings, exact.
#[derive(Debug, Clone)]
pub struct ColoringDistribution {
    pub support: Vec<(Coloring, Rational)>,
}

impl ColoringDistribution {
    pub fn total(&self) -> Rational {
        let mut sum = Rational::zero();
        for (_, p) in &self.support {
            sum += p;
        }
        sum
    }

    pub fn marginal(&self, v: usize, c: u32) -> Rational {
        let mut sum = Rational::zero();
        for (phi, p) in &self.support {
            if phi.get(v) == c {
                sum += p;
            }
        }
        sum
    }

    pub fn is_valid(&self, g: &Graph, lists: &ListAssignment) -> bool {
        self.total() == Rational::one()
            && self
                .support
                .iter()
                .all(|(phi, p)| !p.is_negative() && phi.is_proper(g) && phi.in_lists(lists))
    }
}

/// Weighted flexibility certificate: the optimal epsilon, a distribution
/// attaining it, and a dual weighted request whose best satisfaction ratio
/// equals epsilon exactly.
#[derive(Debug, Clone)]
pub struct WeightedFlexReport {
    pub epsilon: Rational,
    pub distribution: ColoringDistribution,
    pub dual_witness: WeightedRequest,
}

/// Best achievable match fraction for one request.
pub fn epsilon_of_request(g: &Graph, lists: &ListAssignment, r: &Request) -> Result<Rational, FlexError> {
    if r.is_empty() {
        return Err(FlexError::EmptyRequest);
    }
    let (count, _) = max_request_match(g, lists, r).ok_or(FlexError::Uncolorable)?;
    Ok(ratio_u(count as u64, r.domain_size() as u64))
}

/// Number of request choices per vertex: no request, or one of its colors.
fn option_counts(lists: &ListAssignment) -> Vec<u64> {
    (1..=lists.n()).map(|v| lists.list(v).len() as u64 + 1).collect()
}

fn decode_request(lists: &ListAssignment, counts: &[u64], mut idx: u64) -> Request {
    let mut entries = BTreeMap::new();
    for v in 1..=lists.n() {
        let k = counts[v - 1];
        let digit = idx % k;
        idx /= k;
        if digit > 0 {
            entries.insert(v, lists.list(v)[(digit - 1) as usize]);
        }
    }
    Request::new(entries)
}

/// Minimum of [`epsilon_of_request`] over all nonempty requests, by full
/// enumeration (vertex 1 varies fastest; the first request attaining the
/// minimum is reported). Fails with `CapExceeded` when the request space
/// outgrows `cap` (default 10^6).
pub fn flexibility_exact(g: &Graph, lists: &ListAssignment, cap: Option<u64>) -> Result<FlexReport, FlexError> {
    if g.n() == 0 {
        return Err(FlexError::InvalidInput("graph has no vertices".into()));
    }
    if find_coloring(g, lists, &ColoringConstraint::none()).is_none() {
        return Err(FlexError::Uncolorable);
    }
    let cap = cap.unwrap_or(DEFAULT_REQUEST_CAP);
    let counts = option_counts(lists);
    let mut total: u64 = 1;
    for &k in &counts {
        total = total.checked_mul(k).filter(|&t| t <= cap + 1).ok_or(FlexError::CapExceeded(cap))?;
    }

    let best = (1..total)
        .into_par_iter()
        .map(|idx| {
            let r = decode_request(lists, &counts, idx);
            let (count, _) = max_request_match(g, lists, &r).expect("colorability checked above");
            (ratio_u(count as u64, r.domain_size() as u64), idx)
        })
        .min_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)))
        .expect("at least one nonempty request");

    Ok(FlexReport {
        epsilon: best.0,
        worst_request: decode_request(lists, &counts, best.1),
        colorable: true,
    })
}

/// Builds the max-min marginal LP over the enumerated colorings: variables are
/// epsilon and one probability per coloring, rows demand
/// `Prob[φ(v) = c] >= epsilon` for every pair and the probabilities sum to 1.
pub fn flexibility_lp(g: &Graph, lists: &ListAssignment, colorings: &[Coloring]) -> LpInstance {
    let m = colorings.len();
    let mut rows = Vec::new();
    for (v, c) in lists.pairs() {
        let mut coeffs = vec![Rational::zero(); m + 1];
        coeffs[0] = Rational::one();
        for (j, phi) in colorings.iter().enumerate() {
            if phi.get(v) == c {
                coeffs[j + 1] = -Rational::one();
            }
        }
        rows.push(LpRow { coeffs, sense: Sense::Le, rhs: Rational::zero() });
    }
    let mut sum_row = vec![Rational::one(); m + 1];
    sum_row[0] = Rational::zero();
    rows.push(LpRow { coeffs: sum_row, sense: Sense::Eq, rhs: Rational::one() });
    let mut maximize = vec![Rational::zero(); m + 1];
    maximize[0] = Rational::one();
    let _ = g;
    LpInstance { maximize, rows }
}

/// Maximal epsilon such that some distribution over L-colorings has every
/// marginal `Prob[φ(v) = c] >= epsilon`, with an attaining distribution and a
/// normalized dual weighted request certifying optimality.
pub fn weighted_flexibility(
    g: &Graph,
    lists: &ListAssignment,
    cap: Option<u64>,
) -> Result<WeightedFlexReport, FlexError> {
    if g.n() == 0 {
        return Err(FlexError::InvalidInput("graph has no vertices".into()));
    }
    let cap = cap.unwrap_or(DEFAULT_COLORING_CAP);
    let enumeration = enumerate_l_colorings(g, lists, Some(cap as usize));
    if enumeration.truncated {
        return Err(FlexError::CapExceeded(cap));
    }
    let colorings = enumeration.colorings;
    if colorings.is_empty() {
        return Err(FlexError::Uncolorable);
    }

    let lp = flexibility_lp(g, lists, &colorings);
    let solution = match simplex_solve(&lp) {
        LpOutcome::Optimal(s) => s,
        other => unreachable!("flexibility LP is feasible and bounded, got {other:?}"),
    };
    let epsilon = solution.value.clone();

    let support: Vec<(Coloring, Rational)> = colorings
        .iter()
        .zip(solution.primal.iter().skip(1))
        .filter(|(_, p)| p.is_positive())
        .map(|(phi, p)| (phi.clone(), p.clone()))
        .collect();
    let distribution = ColoringDistribution { support };
    debug_assert!(distribution.is_valid(g, lists));

    // Dual multipliers of the marginal rows are the weights of the witness
    // request; normalizing by the total weight leaves the satisfaction ratio
    // untouched and equal to epsilon.
    let mut weights = BTreeMap::new();
    let mut total = Rational::zero();
    for ((v, c), y) in lists.pairs().zip(solution.dual.iter()) {
        debug_assert!(!y.is_negative());
        if y.is_positive() {
            total += y;
            weights.insert((v, c), y.clone());
        }
    }
    if !total.is_zero() && total != Rational::one() {
        for w in weights.values_mut() {
            *w /= &total;
        }
    }
    let dual_witness = WeightedRequest::new(weights);
    debug_assert!({
        let best = colorings
            .iter()
            .map(|phi| phi.matched_weight(&dual_witness))
            .max()
            .unwrap_or_else(Rational::zero);
        best == epsilon.clone() * dual_witness.total()
            || (dual_witness.total().is_zero() && epsilon.is_zero())
    });

    Ok(WeightedFlexReport { epsilon, distribution, dual_witness })
}

/// Outcome of one peeling run.
#[derive(Debug, Clone)]
pub struct PeelOutcome {
    pub coloring: Coloring,
    pub achieved: Rational,
    pub rounds: u64,
}

/// The deterministic unweighted-to-weighted reduction. Sorts vertices by the
/// weight of their preferred color, queries the epsilon-satisfaction oracle on
/// the nested prefix requests, and returns the queried coloring with the
/// largest collected weight.
///
/// The oracle must return, for any request, an L-coloring honoring at least an
/// `eps` fraction of it; anything less is reported as `OracleViolation`. With
/// `eps = 0` the index recursion may stall, in which case peeling stops early
/// (the guarantee is vacuous there).
pub fn peel_weighted(
    g: &Graph,
    lists: &ListAssignment,
    w: &WeightedRequest,
    eps: &Rational,
    oracle: &mut dyn FnMut(&Request) -> Option<Coloring>,
) -> Result<PeelOutcome, FlexError> {
    let n = g.n();
    let sizes: Vec<usize> = (1..=n).map(|v| lists.list(v).len()).collect();
    if n == 0 {
        return Err(FlexError::InvalidInput("graph has no vertices".into()));
    }
    if sizes.iter().any(|&s| s != sizes[0]) {
        return Err(FlexError::InvalidInput("peeling requires uniform list sizes".into()));
    }
    if eps.is_negative() || eps > &Rational::one() {
        return Err(FlexError::InvalidInput("eps must lie in [0, 1]".into()));
    }

    // Preferred color per vertex: maximum weight, ties to the smallest color.
    let preferred: Vec<u32> = (1..=n)
        .map(|v| {
            lists
                .list(v)
                .iter()
                .copied()
                .max_by(|&a, &b| w.weight(v, a).cmp(&w.weight(v, b)).then(b.cmp(&a)))
                .expect("lists are nonempty")
        })
        .collect();
    // Sort by preferred weight descending, ties by vertex index.
    let mut order: Vec<usize> = (1..=n).collect();
    order.sort_by(|&a, &b| {
        w.weight(b, preferred[b - 1]).cmp(&w.weight(a, preferred[a - 1])).then(a.cmp(&b))
    });

    let mut remaining = n as u64;
    let mut queried: Vec<Coloring> = Vec::new();
    let mut rounds = 0u64;
    while remaining > 0 {
        let k = remaining as usize;
        let r = Request::new(order[..k].iter().map(|&v| (v, preferred[v - 1])).collect());
        let phi = oracle(&r).ok_or_else(|| FlexError::OracleViolation("oracle returned no coloring".into()))?;
        if !(phi.n() == n && phi.is_proper(g) && phi.in_lists(lists)) {
            return Err(FlexError::OracleViolation("oracle returned an invalid coloring".into()));
        }
        let matched = phi.matches_request(&r) as u64;
        if ratio_u(matched, 1) < eps * ratio_u(remaining, 1) {
            return Err(FlexError::OracleViolation(format!(
                "oracle matched {matched} of {remaining} requested vertices, below eps"
            )));
        }
        rounds += 1;
        queried.push(phi);
        if matched == 0 {
            break; // only reachable with eps = 0
        }
        remaining -= matched;
    }

    let (best_idx, achieved) = queried
        .iter()
        .enumerate()
        .map(|(i, phi)| (i, phi.matched_weight(w)))
        .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)))
        .expect("at least one oracle query");
    Ok(PeelOutcome { coloring: queried[best_idx].clone(), achieved, rounds })
}

/// Exact check of `achieved >= total / (ell * log_{1/(1-eps)} n)`.
///
/// The comparison is done entirely in rational arithmetic by rewriting
/// `log_{1/(1-eps)} n >= q` as `n^den(q) * (1-eps)^num(q) >= 1`. Degenerate
/// parameter regimes where the logarithmic expression is meaningless fall
/// back to the guarantee the peeling actually provides there:
/// `eps = 0` makes the bound vacuous (always true), while `eps = 1` or
/// `n = 1` collapse the recursion to a single round, whose guarantee is
/// `achieved >= total / ell`.
pub fn peel_bound_holds(
    achieved: &Rational,
    total: &Rational,
    ell: u64,
    eps: &Rational,
    n: u64,
) -> bool {
    if total.is_zero() || eps.is_zero() {
        return !achieved.is_negative();
    }
    if eps == &Rational::one() || n <= 1 {
        return achieved * ratio_u(ell, 1) >= *total;
    }
    if achieved.is_zero() {
        return false;
    }
    let q = total / (achieved * ratio_u(ell, 1));
    if q.is_negative() {
        return true;
    }
    let p: u64 = q.numer().to_u64().expect("bound exponent fits u64");
    let r: u64 = q.denom().to_u64().expect("bound exponent fits u64");
    let one_minus = Rational::one() - eps;
    let lhs = pow(&Rational::from(BigInt::from(n)), r) * pow(&one_minus, p);
    lhs >= Rational::one()
}
