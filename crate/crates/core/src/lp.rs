//! Exact two-phase simplex over rationals.
//!
//! Programs are stated as `maximize cᵀx` subject to `aᵀx ≤ β` rows,
//! `aᵀx = β` equalities and per-variable sign constraints. The tableau is
//! dense; entering columns follow the largest-coefficient rule until a
//! degenerate pivot is seen, after which Bland's rule takes over until the
//! objective moves again.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};

use crate::point::Point;
use crate::rational::Rational;

/// Sparse linear form: `(variable index, coefficient)` pairs.
pub type Terms = Vec<(usize, Rational)>;

#[derive(Clone, Debug, Default)]
pub struct LinearProgram {
    num_vars: usize,
    objective: Terms,
    rows: Vec<(Terms, Rational)>,
    equalities: Vec<(Terms, Rational)>,
    nonneg: BTreeSet<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LPOutcome {
    Optimal {
        value: Rational,
        solution: Point,
        /// Multipliers of the `≤` rows (nonnegative) followed by those of the equalities.
        duals: Vec<Rational>,
    },
    Infeasible,
    Unbounded,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LPStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

impl LPOutcome {
    pub fn status(&self) -> LPStatus {
        match self {
            LPOutcome::Optimal { .. } => LPStatus::Optimal,
            LPOutcome::Infeasible => LPStatus::Infeasible,
            LPOutcome::Unbounded => LPStatus::Unbounded,
        }
    }

    pub fn value(&self) -> Option<&Rational> {
        match self {
            LPOutcome::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }

    pub fn solution(&self) -> Option<&Point> {
        match self {
            LPOutcome::Optimal { solution, .. } => Some(solution),
            _ => None,
        }
    }
}

fn dense_to_terms(a: &[Rational]) -> Terms {
    a.iter()
        .enumerate()
        .filter(|(_, v)| !v.is_zero())
        .map(|(i, v)| (i, v.clone()))
        .collect()
}

impl LinearProgram {
    /// Program over `num_vars` free variables with a zero objective.
    pub fn new(num_vars: usize) -> Self {
        LinearProgram { num_vars, ..Default::default() }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    /// Appends a fresh free variable and returns its index.
    pub fn add_var(&mut self) -> usize {
        self.num_vars += 1;
        self.num_vars - 1
    }

    pub fn add_nonneg_var(&mut self) -> usize {
        let j = self.add_var();
        self.nonneg.insert(j);
        j
    }

    pub fn set_nonneg(&mut self, j: usize) {
        assert!(j < self.num_vars, "variable {j} out of range");
        self.nonneg.insert(j);
    }

    pub fn is_nonneg(&self, j: usize) -> bool {
        self.nonneg.contains(&j)
    }

    pub fn maximize(&mut self, c: &[Rational]) {
        assert_eq!(c.len(), self.num_vars, "objective length");
        self.objective = dense_to_terms(c);
    }

    pub fn maximize_terms(&mut self, c: Terms) {
        self.check_terms(&c);
        self.objective = c;
    }

    /// `aᵀx ≤ b`.
    pub fn add_le(&mut self, a: &[Rational], b: Rational) {
        assert_eq!(a.len(), self.num_vars, "row length");
        self.rows.push((dense_to_terms(a), b));
    }

    pub fn add_le_terms(&mut self, a: Terms, b: Rational) {
        self.check_terms(&a);
        self.rows.push((a, b));
    }

    /// `aᵀx ≥ b`, stored as `-aᵀx ≤ -b`.
    pub fn add_ge_terms(&mut self, a: Terms, b: Rational) {
        let neg = a.into_iter().map(|(j, v)| (j, -v)).collect();
        self.add_le_terms(neg, -b);
    }

    pub fn add_eq(&mut self, a: &[Rational], b: Rational) {
        assert_eq!(a.len(), self.num_vars, "row length");
        self.equalities.push((dense_to_terms(a), b));
    }

    pub fn add_eq_terms(&mut self, a: Terms, b: Rational) {
        self.check_terms(&a);
        self.equalities.push((a, b));
    }

    fn check_terms(&self, a: &Terms) {
        for (j, _) in a {
            assert!(*j < self.num_vars, "variable {j} out of range");
        }
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn num_equalities(&self) -> usize {
        self.equalities.len()
    }

    /// The dual program, also written as a maximization.
    ///
    /// Its optimal value is the negative of the primal optimum. Variables are
    /// one multiplier per `≤` row (nonnegative) followed by one per equality.
    pub fn dual(&self) -> LinearProgram {
        let nr = self.rows.len();
        let ne = self.equalities.len();
        let mut dual = LinearProgram::new(nr + ne);
        for i in 0..nr {
            dual.set_nonneg(i);
        }
        let mut obj = Terms::new();
        for (i, (_, b)) in self.rows.iter().enumerate() {
            obj.push((i, -b));
        }
        for (i, (_, b)) in self.equalities.iter().enumerate() {
            obj.push((nr + i, -b));
        }
        dual.objective = obj.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        let mut columns: Vec<Terms> = vec![Terms::new(); self.num_vars];
        for (i, (a, _)) in self.rows.iter().enumerate() {
            for (j, v) in a {
                columns[*j].push((i, v.clone()));
            }
        }
        for (i, (a, _)) in self.equalities.iter().enumerate() {
            for (j, v) in a {
                columns[*j].push((nr + i, v.clone()));
            }
        }
        let mut cost = vec![Rational::zero(); self.num_vars];
        for (j, v) in &self.objective {
            cost[*j] += v;
        }
        for (j, col) in columns.into_iter().enumerate() {
            if self.nonneg.contains(&j) {
                dual.add_ge_terms(col, cost[j].clone());
            } else {
                dual.add_eq_terms(col, cost[j].clone());
            }
        }
        dual
    }
}

/// Solves the program exactly.
pub fn solve_lp(lp: &LinearProgram) -> LPOutcome {
    let outcome = Tableau::build(lp).run(lp);
    #[cfg(debug_assertions)]
    if let LPOutcome::Optimal { value, solution, duals } = &outcome {
        check_optimality(lp, value, solution, duals);
    }
    outcome
}

/// Exact primal feasibility, dual feasibility and zero duality gap.
#[cfg(debug_assertions)]
fn check_optimality(lp: &LinearProgram, value: &Rational, x: &Point, y: &[Rational]) {
    let eval = |terms: &Terms| -> Rational {
        terms.iter().fold(Rational::zero(), |acc, (j, v)| acc + v * &x[*j])
    };
    assert_eq!(&eval(&lp.objective), value, "simplex: objective mismatch");
    for (a, b) in &lp.rows {
        assert!(eval(a) <= *b, "simplex: row violated");
    }
    for (a, b) in &lp.equalities {
        assert!(eval(a) == *b, "simplex: equality violated");
    }
    for &j in &lp.nonneg {
        assert!(!x[j].is_negative(), "simplex: sign constraint violated");
    }
    let nr = lp.rows.len();
    let mut reduced = vec![Rational::zero(); lp.num_vars];
    let mut dual_value = Rational::zero();
    for (i, (a, b)) in lp.rows.iter().enumerate() {
        assert!(!y[i].is_negative(), "simplex: negative row multiplier");
        for (j, v) in a {
            reduced[*j] += v * &y[i];
        }
        dual_value += b * &y[i];
    }
    for (i, (a, b)) in lp.equalities.iter().enumerate() {
        for (j, v) in a {
            reduced[*j] += v * &y[nr + i];
        }
        dual_value += b * &y[nr + i];
    }
    for (j, v) in &lp.objective {
        reduced[*j] -= v;
    }
    for (j, r) in reduced.iter().enumerate() {
        if lp.nonneg.contains(&j) {
            assert!(!r.is_negative(), "simplex: dual infeasible at column {j}");
        } else {
            assert!(r.is_zero(), "simplex: dual infeasible at free column {j}");
        }
    }
    assert_eq!(&dual_value, value, "simplex: duality gap");
}

struct Tableau {
    t: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
    /// Column of each structural variable, and of its negative part when free.
    pos_col: Vec<usize>,
    neg_col: Vec<Option<usize>>,
    first_artificial: usize,
    ncols: usize,
    /// Per row: the column holding the unit vector eᵢ initially, and the sign
    /// applied to the original row.
    unit_col: Vec<usize>,
    sign: Vec<bool>,
}

enum PhaseResult {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Tableau {
        let mut pos_col = Vec::with_capacity(lp.num_vars);
        let mut neg_col = Vec::with_capacity(lp.num_vars);
        let mut next = 0;
        for j in 0..lp.num_vars {
            pos_col.push(next);
            next += 1;
            if lp.nonneg.contains(&j) {
                neg_col.push(None);
            } else {
                neg_col.push(Some(next));
                next += 1;
            }
        }
        let nr = lp.rows.len();
        let ne = lp.equalities.len();
        let m = nr + ne;
        let first_slack = next;
        let first_artificial = first_slack + nr;
        let needs_art: Vec<bool> = lp
            .rows
            .iter()
            .map(|(_, b)| b.is_negative())
            .chain(lp.equalities.iter().map(|_| true))
            .collect();
        let num_art = needs_art.iter().filter(|&&x| x).count();
        let ncols = first_artificial + num_art;
        let mut t = vec![vec![Rational::zero(); ncols]; m];
        let mut rhs = vec![Rational::zero(); m];
        let mut basis = vec![0; m];
        let mut unit_col = vec![0; m];
        let mut sign = vec![true; m];
        let mut art = first_artificial;
        let all_rows = lp.rows.iter().chain(lp.equalities.iter());
        for (i, (terms, b)) in all_rows.enumerate() {
            let flip = b.is_negative();
            sign[i] = !flip;
            let s = if flip { -Rational::one() } else { Rational::one() };
            for (j, v) in terms {
                let v = v * &s;
                t[i][pos_col[*j]] += &v;
                if let Some(nc) = neg_col[*j] {
                    t[i][nc] -= &v;
                }
            }
            if i < nr {
                t[i][first_slack + i] = s.clone();
            }
            rhs[i] = b * &s;
            if needs_art[i] {
                t[i][art] = Rational::one();
                basis[i] = art;
                unit_col[i] = art;
                art += 1;
            } else {
                basis[i] = first_slack + i;
                unit_col[i] = first_slack + i;
            }
        }
        Tableau { t, rhs, basis, pos_col, neg_col, first_artificial, ncols, unit_col, sign }
    }

    fn reduced_costs(&self, cost: &[Rational]) -> (Vec<Rational>, Rational) {
        let mut r: Vec<Rational> = cost.iter().map(|c| -c).collect();
        let mut z = Rational::zero();
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = &cost[b];
            if cb.is_zero() {
                continue;
            }
            for (j, v) in self.t[i].iter().enumerate() {
                if !v.is_zero() {
                    r[j] += cb * v;
                }
            }
            z += cb * &self.rhs[i];
        }
        (r, z)
    }

    fn pivot(&mut self, row: usize, col: usize, r: &mut [Rational], z: &mut Rational) {
        let inv = self.t[row][col].recip();
        let nz: Vec<usize> = (0..self.ncols).filter(|&j| !self.t[row][j].is_zero()).collect();
        for &j in &nz {
            self.t[row][j] *= &inv;
        }
        self.rhs[row] *= &inv;
        let pivot_row: Vec<(usize, Rational)> =
            nz.iter().map(|&j| (j, self.t[row][j].clone())).collect();
        let pivot_rhs = self.rhs[row].clone();
        for i in 0..self.t.len() {
            if i == row {
                continue;
            }
            let f = self.t[i][col].clone();
            if f.is_zero() {
                continue;
            }
            let ti = &mut self.t[i];
            for (j, v) in &pivot_row {
                ti[*j] -= &f * v;
            }
            self.rhs[i] -= &f * &pivot_rhs;
        }
        let f = r[col].clone();
        if !f.is_zero() {
            for (j, v) in &pivot_row {
                r[*j] -= &f * v;
            }
            *z -= &f * &pivot_rhs;
        }
        self.basis[row] = col;
    }

    /// Runs the simplex loop for `cost`; columns `>= col_limit` never enter.
    fn optimize(&mut self, cost: &[Rational], col_limit: usize) -> (PhaseResult, Vec<Rational>, Rational) {
        let (mut r, mut z) = self.reduced_costs(cost);
        let mut bland = false;
        loop {
            let entering = if bland {
                (0..col_limit).find(|&j| r[j].is_negative())
            } else {
                let mut best: Option<usize> = None;
                for j in 0..col_limit {
                    if r[j].is_negative() && best.map_or(true, |b| r[j] < r[b]) {
                        best = Some(j);
                    }
                }
                best
            };
            let Some(e) = entering else {
                return (PhaseResult::Optimal, r, z);
            };
            let mut leave: Option<(usize, Rational)> = None;
            for i in 0..self.t.len() {
                let a = &self.t[i][e];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / a;
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            let Some((row, ratio)) = leave else {
                return (PhaseResult::Unbounded, r, z);
            };
            bland = ratio.is_zero();
            self.pivot(row, e, &mut r, &mut z);
        }
    }

    fn run(mut self, lp: &LinearProgram) -> LPOutcome {
        let m = self.t.len();
        if self.ncols > self.first_artificial {
            let mut cost = vec![Rational::zero(); self.ncols];
            for c in cost.iter_mut().skip(self.first_artificial) {
                *c = -Rational::one();
            }
            let (_, _, z) = self.optimize(&cost, self.first_artificial);
            if z.is_negative() {
                return LPOutcome::Infeasible;
            }
            // Drive zero-level artificials out of the basis where possible.
            let mut r = vec![Rational::zero(); self.ncols];
            let mut zz = Rational::zero();
            for i in 0..m {
                if self.basis[i] >= self.first_artificial {
                    if let Some(j) = (0..self.first_artificial).find(|&j| !self.t[i][j].is_zero()) {
                        self.pivot(i, j, &mut r, &mut zz);
                    }
                }
            }
        }
        let mut cost = vec![Rational::zero(); self.ncols];
        for (j, v) in &lp.objective {
            cost[self.pos_col[*j]] += v;
            if let Some(nc) = self.neg_col[*j] {
                cost[nc] -= v;
            }
        }
        let (status, r, z) = self.optimize(&cost, self.first_artificial);
        if let PhaseResult::Unbounded = status {
            return LPOutcome::Unbounded;
        }
        let mut col_value = vec![Rational::zero(); self.ncols];
        for (i, &b) in self.basis.iter().enumerate() {
            col_value[b] = self.rhs[i].clone();
        }
        let solution: Vec<Rational> = (0..lp.num_vars)
            .map(|j| {
                let mut v = col_value[self.pos_col[j]].clone();
                if let Some(nc) = self.neg_col[j] {
                    v -= &col_value[nc];
                }
                v
            })
            .collect();
        let duals = (0..m)
            .map(|i| {
                let y = r[self.unit_col[i]].clone() + &cost[self.unit_col[i]];
                if self.sign[i] {
                    y
                } else {
                    -y
                }
            })
            .collect();
        LPOutcome::Optimal { value: z, solution: Point::new(solution), duals }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn r(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn box_optimum() {
        let mut lp = LinearProgram::new(2);
        lp.set_nonneg(0);
        lp.set_nonneg(1);
        lp.maximize(&r(&[1, 1]));
        lp.add_le(&r(&[1, 0]), int(1));
        lp.add_le(&r(&[0, 1]), int(1));
        match solve_lp(&lp) {
            LPOutcome::Optimal { value, solution, duals } => {
                assert_eq!(value, int(2));
                assert_eq!(solution, Point::from_ints(&[1, 1]));
                assert_eq!(duals, r(&[1, 1]));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn infeasible_and_unbounded() {
        let mut lp = LinearProgram::new(1);
        lp.set_nonneg(0);
        lp.maximize(&r(&[1]));
        lp.add_le(&r(&[1]), int(-1));
        assert_eq!(solve_lp(&lp).status(), LPStatus::Infeasible);

        let mut lp = LinearProgram::new(1);
        lp.set_nonneg(0);
        lp.maximize(&r(&[1]));
        assert_eq!(solve_lp(&lp).status(), LPStatus::Unbounded);
    }

    #[test]
    fn free_variables_and_equalities() {
        // max -x - y  s.t.  x + 2y = 3, x - y >= -3, y <= 2, x, y free
        let mut lp = LinearProgram::new(2);
        lp.maximize(&r(&[-1, -1]));
        lp.add_eq(&r(&[1, 2]), int(3));
        lp.add_ge_terms(vec![(0, int(1)), (1, int(-1))], int(-3));
        lp.add_le(&r(&[0, 1]), int(2));
        let out = solve_lp(&lp);
        assert_eq!(out.value(), Some(&int(-1)));
        assert_eq!(out.solution(), Some(&Point::from_ints(&[-1, 2])));
    }

    #[test]
    fn redundant_equalities() {
        let mut lp = LinearProgram::new(2);
        lp.maximize(&r(&[1, 0]));
        lp.add_eq(&r(&[1, 1]), int(1));
        lp.add_eq(&r(&[2, 2]), int(2));
        lp.add_le(&r(&[0, -1]), int(0));
        let out = solve_lp(&lp);
        assert_eq!(out.value(), Some(&int(1)));
    }

    #[test]
    fn degenerate_cycling_example() {
        // Beale's example cycles under the textbook rule without anti-cycling.
        let mut lp = LinearProgram::new(4);
        for j in 0..4 {
            lp.set_nonneg(j);
        }
        lp.maximize(&[ratio(3, 4), int(-150), ratio(1, 50), int(-6)]);
        lp.add_le(&[ratio(1, 4), int(-60), ratio(-1, 25), int(9)], int(0));
        lp.add_le(&[ratio(1, 2), int(-90), ratio(-1, 50), int(3)], int(0));
        lp.add_le(&r(&[0, 0, 1, 0]), int(1));
        assert_eq!(solve_lp(&lp).value(), Some(&ratio(1, 20)));
    }

    #[test]
    fn dual_has_negated_value() {
        let mut lp = LinearProgram::new(2);
        lp.set_nonneg(0);
        lp.maximize(&r(&[3, 2]));
        lp.add_le(&r(&[1, 1]), int(4));
        lp.add_le(&r(&[1, 3]), int(6));
        lp.add_le(&r(&[0, -1]), int(0));
        let primal = solve_lp(&lp).value().cloned().unwrap();
        let dual = solve_lp(&lp.dual()).value().cloned().unwrap();
        assert_eq!(primal, int(12));
        assert_eq!(dual, -primal);
    }
}
