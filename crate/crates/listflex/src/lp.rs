//! Exact linear programming over rationals: two-phase tableau simplex with
//! Bland's rule, so every run terminates and every optimum is exact. Returns
//! both primal and dual solutions; strong duality is checked in debug builds.

use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone)]
pub struct LpRow {
    pub coeffs: Vec<Rational>,
    pub sense: Sense,
    pub rhs: Rational,
}

/// Maximization problem over nonnegative variables.
#[derive(Debug, Clone)]
pub struct LpInstance {
    pub maximize: Vec<Rational>,
    pub rows: Vec<LpRow>,
}

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub value: Rational,
    pub primal: Vec<Rational>,
    pub dual: Vec<Rational>,
}

#[derive(Debug, Clone)]
pub enum LpOutcome {
    Optimal(LpSolution),
    Infeasible,
    Unbounded,
}

struct Tableau {
    rows: Vec<Vec<Rational>>, // m rows, each cols + 1 wide (last = rhs)
    zrow: Vec<Rational>,      // reduced costs, last entry = -objective value
    basis: Vec<usize>,
    cols: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, j: usize) {
        let pivot = self.rows[r][j].clone();
        debug_assert!(!pivot.is_zero());
        for x in self.rows[r].iter_mut() {
            *x /= &pivot;
        }
        let pivot_row = self.rows[r].clone();
        for i in 0..self.rows.len() {
            if i != r && !self.rows[i][j].is_zero() {
                let factor = self.rows[i][j].clone();
                for (x, p) in self.rows[i].iter_mut().zip(&pivot_row) {
                    *x -= &factor * p;
                }
            }
        }
        if !self.zrow[j].is_zero() {
            let factor = self.zrow[j].clone();
            for (x, p) in self.zrow.iter_mut().zip(&pivot_row) {
                *x -= &factor * p;
            }
        }
        self.basis[r] = j;
    }

    fn load_costs(&mut self, costs: &[Rational]) {
        self.zrow = costs.to_vec();
        self.zrow.push(Rational::zero());
        for r in 0..self.rows.len() {
            let cb = costs[self.basis[r]].clone();
            if !cb.is_zero() {
                let row = self.rows[r].clone();
                for (x, p) in self.zrow.iter_mut().zip(&row) {
                    *x -= &cb * p;
                }
            }
        }
    }

    /// Bland's rule: entering = lowest-index allowed column with positive
    /// reduced cost; leaving = min ratio, ties by lowest basic variable index.
    /// Returns false on unboundedness.
    fn run(&mut self, allowed: &dyn Fn(usize) -> bool) -> bool {
        loop {
            let Some(j) = (0..self.cols).find(|&j| allowed(j) && self.zrow[j].is_positive()) else {
                return true;
            };
            let mut leave: Option<(usize, Rational)> = None;
            for r in 0..self.rows.len() {
                if self.rows[r][j].is_positive() {
                    let ratio = &self.rows[r][self.cols] / &self.rows[r][j];
                    let better = match &leave {
                        None => true,
                        Some((lr, lratio)) => {
                            ratio < *lratio || (ratio == *lratio && self.basis[r] < self.basis[*lr])
                        }
                    };
                    if better {
                        leave = Some((r, ratio));
                    }
                }
            }
            match leave {
                Some((r, _)) => self.pivot(r, j),
                None => return false,
            }
        }
    }

    fn value(&self) -> Rational {
        -self.zrow[self.cols].clone()
    }
}

/// Solves the instance exactly. `dual[i]` is the multiplier of row `i` of the
/// original system (nonnegative for `<=` rows, nonpositive for `>=` rows).
pub fn simplex_solve(lp: &LpInstance) -> LpOutcome {
    let n = lp.maximize.len();
    let m = lp.rows.len();
    for row in &lp.rows {
        assert_eq!(row.coeffs.len(), n, "row width must match objective length");
    }

    // Normalize to nonnegative right-hand sides.
    let mut senses = Vec::with_capacity(m);
    let mut flipped = vec![false; m];
    let mut data: Vec<(Vec<Rational>, Rational)> = Vec::with_capacity(m);
    for (i, row) in lp.rows.iter().enumerate() {
        let mut coeffs = row.coeffs.clone();
        let mut rhs = row.rhs.clone();
        let mut sense = row.sense;
        if rhs.is_negative() {
            flipped[i] = true;
            for c in coeffs.iter_mut() {
                *c = -c.clone();
            }
            rhs = -rhs;
            sense = match sense {
                Sense::Le => Sense::Ge,
                Sense::Ge => Sense::Le,
                Sense::Eq => Sense::Eq,
            };
        }
        senses.push(sense);
        data.push((coeffs, rhs));
    }

    let n_slack = senses.iter().filter(|s| !matches!(s, Sense::Eq)).count();
    let n_art = senses.iter().filter(|s| !matches!(s, Sense::Le)).count();
    let cols = n + n_slack + n_art;

    let mut rows = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let mut id_col = vec![0usize; m]; // column whose initial value is e_i
    let mut slack_at = n;
    let mut art_at = n + n_slack;
    for (i, (coeffs, rhs)) in data.iter().enumerate() {
        let mut row = vec![Rational::zero(); cols + 1];
        row[..n].clone_from_slice(coeffs);
        row[cols] = rhs.clone();
        match senses[i] {
            Sense::Le => {
                row[slack_at] = Rational::one();
                basis.push(slack_at);
                id_col[i] = slack_at;
                slack_at += 1;
            }
            Sense::Ge => {
                row[slack_at] = -Rational::one();
                slack_at += 1;
                row[art_at] = Rational::one();
                basis.push(art_at);
                id_col[i] = art_at;
                art_at += 1;
            }
            Sense::Eq => {
                row[art_at] = Rational::one();
                basis.push(art_at);
                id_col[i] = art_at;
                art_at += 1;
            }
        }
        rows.push(row);
    }

    let mut t = Tableau { rows, zrow: Vec::new(), basis, cols };
    let art_start = n + n_slack;

    // Phase 1: maximize minus the sum of artificials.
    if n_art > 0 {
        let mut costs = vec![Rational::zero(); cols];
        for c in costs.iter_mut().skip(art_start) {
            *c = -Rational::one();
        }
        t.load_costs(&costs);
        let bounded = t.run(&|_| true);
        debug_assert!(bounded, "phase 1 is always bounded");
        if !t.value().is_zero() {
            return LpOutcome::Infeasible;
        }
        // Drive artificials out of the basis where possible.
        for r in 0..m {
            if t.basis[r] >= art_start {
                if let Some(j) = (0..art_start).find(|&j| !t.rows[r][j].is_zero()) {
                    t.pivot(r, j);
                }
            }
        }
    }

    // Phase 2: the real objective; artificial columns may not re-enter.
    let mut costs = vec![Rational::zero(); cols];
    costs[..n].clone_from_slice(&lp.maximize);
    t.load_costs(&costs);
    if !t.run(&|j| j < art_start) {
        return LpOutcome::Unbounded;
    }

    let mut primal = vec![Rational::zero(); n];
    for r in 0..m {
        if t.basis[r] < n {
            primal[t.basis[r]] = t.rows[r][cols].clone();
        }
    }
    // y^T = c_B B^{-1}; column i of B^{-1} sits where the identity column of
    // row i started.
    let mut dual = vec![Rational::zero(); m];
    for i in 0..m {
        let mut y = Rational::zero();
        for r in 0..m {
            let cb = &costs[t.basis[r]];
            if !cb.is_zero() {
                y += cb * &t.rows[r][id_col[i]];
            }
        }
        dual[i] = if flipped[i] { -y } else { y };
    }

    let solution = LpSolution { value: t.value(), primal, dual };
    debug_assert!(verify(lp, &solution), "simplex output failed self-check");
    LpOutcome::Optimal(solution)
}

/// Exact optimality certificate: primal feasibility, dual feasibility, and
/// strong duality.
pub fn verify(lp: &LpInstance, sol: &LpSolution) -> bool {
    let n = lp.maximize.len();
    if sol.primal.iter().any(|x| x.is_negative()) {
        return false;
    }
    let mut objective = Rational::zero();
    for (c, x) in lp.maximize.iter().zip(&sol.primal) {
        objective += c * x;
    }
    if objective != sol.value {
        return false;
    }
    let mut dual_value = Rational::zero();
    for (row, y) in lp.rows.iter().zip(&sol.dual) {
        let mut lhs = Rational::zero();
        for (a, x) in row.coeffs.iter().zip(&sol.primal) {
            lhs += a * x;
        }
        let ok = match row.sense {
            Sense::Le => lhs <= row.rhs && !y.is_negative(),
            Sense::Ge => lhs >= row.rhs && !y.is_positive(),
            Sense::Eq => lhs == row.rhs,
        };
        if !ok {
            return false;
        }
        dual_value += y * &row.rhs;
    }
    if dual_value != sol.value {
        return false;
    }
    for j in 0..n {
        let mut reduced = Rational::zero();
        for (row, y) in lp.rows.iter().zip(&sol.dual) {
            reduced += y * &row.coeffs[j];
        }
        if reduced < lp.maximize[j] {
            return false;
        }
    }
    true
}
