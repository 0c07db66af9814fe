//! Dense exact-rational simplex with reusable bases.
//!
//! Problems are stored in dictionary form: every row reads
//! `x_B(i) + Σ_k T[i][k] · x_N(k) = rhs[i]`, where the `N(k)` are the
//! nonbasic variables. Each constraint gets a slack variable, so the number
//! of nonbasic columns always equals the number of structural variables and
//! adding a constraint appends one row without touching existing columns.
//! That keeps warm starts cheap: a new row is rewritten in terms of the
//! current nonbasic variables and the dual simplex repairs feasibility.
//!
//! All structural variables carry a finite lower bound and are shifted so
//! that the internal variables are nonnegative.

use std::fmt;

use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

/// `coeffs · x (relation) rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

impl Constraint {
    pub fn new(coeffs: Vec<Rational>, relation: Relation, rhs: Rational) -> Self {
        Constraint { coeffs, relation, rhs }
    }

    /// Builds a constraint from small integer data.
    pub fn from_ints(coeffs: &[i64], relation: Relation, rhs: i64) -> Self {
        Constraint::new(
            coeffs.iter().map(|&c| Rational::from_int(c)).collect(),
            relation,
            Rational::from_int(rhs),
        )
    }

    pub fn lhs(&self, x: &[Rational]) -> Rational {
        self.coeffs
            .iter()
            .zip(x)
            .filter(|(a, _)| !a.is_zero())
            .map(|(a, v)| a * v)
            .sum()
    }

    pub fn is_satisfied(&self, x: &[Rational]) -> bool {
        let lhs = self.lhs(x);
        match self.relation {
            Relation::Le => lhs <= self.rhs,
            Relation::Ge => lhs >= self.rhs,
            Relation::Eq => lhs == self.rhs,
        }
    }
}

/// Minimise `objective · x` subject to the constraints and `x ≥ lower`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalLP {
    num_vars: usize,
    objective: Vec<Rational>,
    constraints: Vec<Constraint>,
    lower: Vec<Rational>,
}

impl RationalLP {
    /// An LP with zero objective, no constraints and all lower bounds zero.
    pub fn new(num_vars: usize) -> Self {
        RationalLP {
            num_vars,
            objective: vec![Rational::ZERO; num_vars],
            constraints: Vec::new(),
            lower: vec![Rational::ZERO; num_vars],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn objective(&self) -> &[Rational] {
        &self.objective
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn lower_bounds(&self) -> &[Rational] {
        &self.lower
    }

    pub fn set_objective(&mut self, objective: Vec<Rational>) {
        assert_eq!(objective.len(), self.num_vars, "objective length");
        self.objective = objective;
    }

    pub fn set_lower_bound(&mut self, var: usize, bound: Rational) {
        self.lower[var] = bound;
    }

    pub fn add_constraint(&mut self, c: Constraint) {
        assert_eq!(c.coeffs.len(), self.num_vars, "constraint row length");
        self.constraints.push(c);
    }

    pub fn objective_value(&self, x: &[Rational]) -> Rational {
        self.objective
            .iter()
            .zip(x)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, v)| c * v)
            .sum()
    }

    pub fn is_feasible(&self, x: &[Rational]) -> bool {
        x.len() == self.num_vars
            && x.iter().zip(&self.lower).all(|(v, l)| v >= l)
            && self.constraints.iter().all(|c| c.is_satisfied(x))
    }
}

fn write_linear(f: &mut fmt::Formatter<'_>, coeffs: &[Rational]) -> fmt::Result {
    let mut first = true;
    for (j, a) in coeffs.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        if first {
            write!(f, "{a} x{}", j + 1)?;
        } else if a.is_negative() {
            write!(f, " - {} x{}", a.abs(), j + 1)?;
        } else {
            write!(f, " + {a} x{}", j + 1)?;
        }
        first = false;
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

/// Plain-text inequality listing, one constraint per line.
impl fmt::Display for RationalLP {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "minimize ")?;
        write_linear(f, &self.objective)?;
        writeln!(f)?;
        for (i, c) in self.constraints.iter().enumerate() {
            write!(f, "c{}: ", i + 1)?;
            write_linear(f, &c.coeffs)?;
            let rel = match c.relation {
                Relation::Le => "<=",
                Relation::Ge => ">=",
                Relation::Eq => "=",
            };
            writeln!(f, " {rel} {}", c.rhs)?;
        }
        for (j, l) in self.lower.iter().enumerate() {
            writeln!(f, "x{} >= {l}", j + 1)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LPOutcome {
    Optimal { solution: Vec<Rational>, value: Rational },
    Infeasible,
    Unbounded,
}

impl LPOutcome {
    pub fn is_optimal(&self) -> bool {
        matches!(self, LPOutcome::Optimal { .. })
    }

    pub fn value(&self) -> Option<&Rational> {
        match self {
            LPOutcome::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }

    pub fn solution(&self) -> Option<&[Rational]> {
        match self {
            LPOutcome::Optimal { solution, .. } => Some(solution),
            _ => None,
        }
    }

    /// Same status and, if optimal, same objective value.
    pub fn same_result(&self, other: &LPOutcome) -> bool {
        match (self, other) {
            (LPOutcome::Optimal { value: a, .. }, LPOutcome::Optimal { value: b, .. }) => a == b,
            (LPOutcome::Infeasible, LPOutcome::Infeasible) => true,
            (LPOutcome::Unbounded, LPOutcome::Unbounded) => true,
            _ => false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Status {
    Optimal,
    /// Dual simplex found no entering column for this row.
    Infeasible(usize),
    Unbounded,
}

/// Counters accumulated over the life of a state.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SimplexStats {
    pub pivots: u64,
    pub cold_solves: u64,
    pub warm_solves: u64,
    pub fallbacks: u64,
}

impl SimplexStats {
    pub fn merge(&mut self, other: &SimplexStats) {
        self.pivots += other.pivots;
        self.cold_solves += other.cold_solves;
        self.warm_solves += other.warm_solves;
        self.fallbacks += other.fallbacks;
    }
}

/// Pivots in one run before switching from Dantzig pricing to Bland's rule.
const BLAND_AFTER: u64 = 64;
/// Hard ceiling on pivots in one run.
const PIVOT_CEILING: u64 = 1_000_000;

/// Which internal row each constraint produced, with its sign.
#[derive(Clone, Copy, Debug)]
struct RowOrigin {
    constraint: usize,
    negated: bool,
}

/// An LP together with a basis that can be resumed after changes.
#[derive(Clone)]
pub struct SimplexState {
    lp: RationalLP,
    origins: Vec<RowOrigin>,
    basis: Vec<usize>,
    nonbasic: Vec<usize>,
    /// Row-major, `rows × num_vars`.
    tab: Vec<Rational>,
    rhs: Vec<Rational>,
    cost: Vec<Rational>,
    /// Objective in shifted variables, excluding `objective · lower`.
    obj: Rational,
    status: Status,
    stats: SimplexStats,
}

#[derive(Debug)]
enum RunError {
    Ceiling,
}

impl SimplexState {
    /// Cold solve from the all-slack basis.
    pub fn solve(lp: RationalLP) -> (LPOutcome, SimplexState) {
        let mut state = SimplexState::empty(lp);
        state.stats.cold_solves += 1;
        let outcome = state.cold();
        (outcome, state)
    }

    fn empty(lp: RationalLP) -> SimplexState {
        let m = lp.num_vars;
        SimplexState {
            origins: Vec::new(),
            basis: Vec::new(),
            nonbasic: (0..m).collect(),
            tab: Vec::new(),
            rhs: Vec::new(),
            cost: vec![Rational::ZERO; m],
            obj: Rational::ZERO,
            status: Status::Optimal,
            stats: SimplexStats::default(),
            lp,
        }
    }

    pub fn lp(&self) -> &RationalLP {
        &self.lp
    }

    pub fn stats(&self) -> SimplexStats {
        self.stats
    }

    pub fn pivots(&self) -> u64 {
        self.stats.pivots
    }

    pub fn num_rows(&self) -> usize {
        self.rhs.len()
    }

    fn cols(&self) -> usize {
        self.lp.num_vars
    }

    fn reset_tableau(&mut self) {
        self.origins.clear();
        self.basis.clear();
        self.nonbasic = (0..self.cols()).collect();
        self.tab.clear();
        self.rhs.clear();
        self.obj = Rational::ZERO;
        self.status = Status::Optimal;
        let constraints = self.lp.constraints.clone();
        for (i, c) in constraints.iter().enumerate() {
            self.push_internal_rows(i, c);
        }
        self.load_objective();
    }

    fn cold(&mut self) -> LPOutcome {
        self.reset_tableau();
        let outcome = match self.cold_run() {
            Ok(()) => self.outcome(),
            Err(RunError::Ceiling) => panic!(
                "simplex exceeded {PIVOT_CEILING} pivots on a cold solve; LP:\n{}",
                self.lp
            ),
        };
        self.check(&outcome);
        outcome
    }

    fn cold_run(&mut self) -> Result<(), RunError> {
        let primal_feasible = self.rhs.iter().all(|b| !b.is_negative());
        if primal_feasible {
            return self.primal();
        }
        let dual_feasible = self.cost.iter().all(|d| !d.is_negative());
        if dual_feasible {
            return self.dual();
        }
        // Phase 1: zero objective makes every basis dual feasible.
        let cols = self.cols();
        self.cost = vec![Rational::ZERO; cols];
        self.obj = Rational::ZERO;
        self.dual()?;
        if matches!(self.status, Status::Infeasible(_)) {
            return Ok(());
        }
        self.load_objective();
        self.primal()
    }

    /// Appends constraints and re-optimises from the current basis.
    pub fn add_constraints(&mut self, rows: Vec<Constraint>) -> LPOutcome {
        let warm = self.status == Status::Optimal;
        let first = self.lp.constraints.len();
        for c in rows {
            self.lp.add_constraint(c);
        }
        if !warm {
            self.stats.cold_solves += 1;
            return self.cold();
        }
        let added: Vec<Constraint> = self.lp.constraints[first..].to_vec();
        for (offset, c) in added.iter().enumerate() {
            self.push_internal_rows(first + offset, c);
        }
        self.stats.warm_solves += 1;
        let outcome = match self.dual() {
            Ok(()) => self.outcome(),
            Err(RunError::Ceiling) => {
                self.stats.fallbacks += 1;
                self.stats.cold_solves += 1;
                return self.cold();
            }
        };
        self.check(&outcome);
        outcome
    }

    /// Replaces the objective and re-optimises from the current basis.
    pub fn set_objective(&mut self, objective: Vec<Rational>) -> LPOutcome {
        self.lp.set_objective(objective);
        if self.status != Status::Optimal {
            self.stats.cold_solves += 1;
            return self.cold();
        }
        self.stats.warm_solves += 1;
        self.load_objective();
        let outcome = match self.primal() {
            Ok(()) => self.outcome(),
            Err(RunError::Ceiling) => {
                self.stats.fallbacks += 1;
                self.stats.cold_solves += 1;
                return self.cold();
            }
        };
        self.check(&outcome);
        outcome
    }

    /// Current outcome without further pivoting.
    pub fn outcome(&self) -> LPOutcome {
        match self.status {
            Status::Optimal => {
                let solution = self.primal_solution();
                let value = &self.obj + &self.objective_shift();
                LPOutcome::Optimal { solution, value }
            }
            Status::Infeasible(_) => LPOutcome::Infeasible,
            Status::Unbounded => LPOutcome::Unbounded,
        }
    }

    /// Multipliers `y` (one per constraint, `≥ 0` on `≤` rows, `≤ 0` on `≥`
    /// rows) with `Σ y_c a_c ≥ 0` componentwise and
    /// `Σ y_c (b_c − a_c · lower) < 0`, proving infeasibility.
    pub fn farkas(&self) -> Option<Vec<Rational>> {
        let Status::Infeasible(r) = self.status else {
            return None;
        };
        let cols = self.cols();
        let mut y = vec![Rational::ZERO; self.lp.constraints.len()];
        // Row r is the combination of internal rows whose weights are the
        // row's coefficients on their slack variables.
        let mut credit = |slack_row: usize, mult: &Rational| {
            let o = self.origins[slack_row];
            let v = if o.negated { -mult } else { mult.clone() };
            y[o.constraint] = &y[o.constraint] + &v;
        };
        if self.basis[r] >= cols {
            credit(self.basis[r] - cols, &Rational::ONE);
        }
        for (k, &var) in self.nonbasic.iter().enumerate() {
            let t = &self.tab[r * cols + k];
            if var >= cols && !t.is_zero() {
                credit(var - cols, t);
            }
        }
        Some(y)
    }

    fn objective_shift(&self) -> Rational {
        self.lp.objective_value(&self.lp.lower)
    }

    fn primal_solution(&self) -> Vec<Rational> {
        let cols = self.cols();
        let mut x = self.lp.lower.clone();
        for (i, &var) in self.basis.iter().enumerate() {
            if var < cols {
                x[var] = &x[var] + &self.rhs[i];
            }
        }
        x
    }

    fn check(&self, outcome: &LPOutcome) {
        if cfg!(debug_assertions) {
            if let LPOutcome::Optimal { solution, value } = outcome {
                assert!(self.lp.is_feasible(solution), "simplex returned an infeasible point");
                assert_eq!(&self.lp.objective_value(solution), value);
            }
        }
    }

    /// Translates constraint `index` to `≤` rows over shifted variables and
    /// appends them in terms of the current nonbasic variables.
    fn push_internal_rows(&mut self, index: usize, c: &Constraint) {
        let shift = c.lhs(&self.lp.lower);
        let b = &c.rhs - &shift;
        match c.relation {
            Relation::Le => self.push_row(index, false, &c.coeffs, b),
            Relation::Ge => self.push_row(index, true, &c.coeffs, b),
            Relation::Eq => {
                self.push_row(index, false, &c.coeffs, b.clone());
                self.push_row(index, true, &c.coeffs, b);
            }
        }
    }

    fn push_row(&mut self, index: usize, negated: bool, coeffs: &[Rational], b: Rational) {
        let cols = self.cols();
        let sign = |v: &Rational| if negated { -v } else { v.clone() };
        let mut row: Vec<Rational> = self
            .nonbasic
            .iter()
            .map(|&var| if var < cols { sign(&coeffs[var]) } else { Rational::ZERO })
            .collect();
        let mut rhs = sign(&b);
        for (i, &var) in self.basis.iter().enumerate() {
            if var >= cols || coeffs[var].is_zero() {
                continue;
            }
            let a = sign(&coeffs[var]);
            for (k, slot) in row.iter_mut().enumerate() {
                let t = &self.tab[i * cols + k];
                if !t.is_zero() {
                    *slot = slot.sub_mul(&a, t);
                }
            }
            rhs = rhs.sub_mul(&a, &self.rhs[i]);
        }
        let slack = cols + self.rhs.len();
        self.origins.push(RowOrigin {
            constraint: index,
            negated,
        });
        self.basis.push(slack);
        self.tab.extend(row);
        self.rhs.push(rhs);
    }

    /// Reduced costs for the LP objective under the current basis.
    fn load_objective(&mut self) {
        let cols = self.cols();
        let c = &self.lp.objective;
        let cost_of = |var: usize| {
            if var < cols {
                c[var].clone()
            } else {
                Rational::ZERO
            }
        };
        let mut d: Vec<Rational> = self.nonbasic.iter().map(|&v| cost_of(v)).collect();
        let mut obj = Rational::ZERO;
        for (i, &var) in self.basis.iter().enumerate() {
            let cb = cost_of(var);
            if cb.is_zero() {
                continue;
            }
            for (k, dk) in d.iter_mut().enumerate() {
                let t = &self.tab[i * cols + k];
                if !t.is_zero() {
                    *dk = dk.sub_mul(&cb, t);
                }
            }
            obj = &obj + &(&cb * &self.rhs[i]);
        }
        self.cost = d;
        self.obj = obj;
    }

    fn pivot(&mut self, r: usize, k: usize) {
        let cols = self.cols();
        let piv = self.tab[r * cols + k].clone();
        debug_assert!(!piv.is_zero());
        let inv = piv.recip();
        for j in 0..cols {
            let slot = &mut self.tab[r * cols + j];
            *slot = if j == k { inv.clone() } else { &*slot * &inv };
        }
        self.rhs[r] = &self.rhs[r] * &inv;
        let pivot_row: Vec<Rational> = self.tab[r * cols..(r + 1) * cols].to_vec();
        let pivot_rhs = self.rhs[r].clone();
        for i in 0..self.rhs.len() {
            if i == r {
                continue;
            }
            let f = self.tab[i * cols + k].clone();
            if f.is_zero() {
                continue;
            }
            for (j, p) in pivot_row.iter().enumerate() {
                let slot = &mut self.tab[i * cols + j];
                if j == k {
                    *slot = -&(&f * p);
                } else if !p.is_zero() {
                    *slot = slot.sub_mul(&f, p);
                }
            }
            self.rhs[i] = self.rhs[i].sub_mul(&f, &pivot_rhs);
        }
        let f = self.cost[k].clone();
        if !f.is_zero() {
            for (j, p) in pivot_row.iter().enumerate() {
                if j == k {
                    self.cost[j] = -&(&f * p);
                } else if !p.is_zero() {
                    self.cost[j] = self.cost[j].sub_mul(&f, p);
                }
            }
            self.obj = &self.obj + &(&f * &pivot_rhs);
        }
        std::mem::swap(&mut self.basis[r], &mut self.nonbasic[k]);
        self.stats.pivots += 1;
    }

    /// Primal simplex from a primal-feasible basis.
    fn primal(&mut self) -> Result<(), RunError> {
        let cols = self.cols();
        let mut run = 0u64;
        loop {
            let bland = run >= BLAND_AFTER;
            let mut enter: Option<usize> = None;
            for k in 0..cols {
                if !self.cost[k].is_negative() {
                    continue;
                }
                enter = match enter {
                    None => Some(k),
                    Some(e) => {
                        let better = if bland {
                            self.nonbasic[k] < self.nonbasic[e]
                        } else {
                            match self.cost[k].cmp(&self.cost[e]) {
                                std::cmp::Ordering::Less => true,
                                std::cmp::Ordering::Equal => self.nonbasic[k] < self.nonbasic[e],
                                std::cmp::Ordering::Greater => false,
                            }
                        };
                        Some(if better { k } else { e })
                    }
                };
            }
            let Some(k) = enter else {
                self.status = Status::Optimal;
                return Ok(());
            };
            let mut leave: Option<(usize, Rational)> = None;
            for i in 0..self.rhs.len() {
                let t = &self.tab[i * cols + k];
                if !t.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / t;
                let take = match &leave {
                    None => true,
                    Some((l, best)) => match ratio.cmp(best) {
                        std::cmp::Ordering::Less => true,
                        std::cmp::Ordering::Equal => self.basis[i] < self.basis[*l],
                        std::cmp::Ordering::Greater => false,
                    },
                };
                if take {
                    leave = Some((i, ratio));
                }
            }
            let Some((r, _)) = leave else {
                self.status = Status::Unbounded;
                return Ok(());
            };
            self.pivot(r, k);
            run += 1;
            if run > PIVOT_CEILING {
                return Err(RunError::Ceiling);
            }
        }
    }

    /// Dual simplex from a dual-feasible basis.
    fn dual(&mut self) -> Result<(), RunError> {
        let cols = self.cols();
        let mut run = 0u64;
        loop {
            let bland = run >= BLAND_AFTER;
            let mut leave: Option<usize> = None;
            for i in 0..self.rhs.len() {
                if !self.rhs[i].is_negative() {
                    continue;
                }
                leave = match leave {
                    None => Some(i),
                    Some(l) => {
                        let better = if bland {
                            self.basis[i] < self.basis[l]
                        } else {
                            match self.rhs[i].cmp(&self.rhs[l]) {
                                std::cmp::Ordering::Less => true,
                                std::cmp::Ordering::Equal => self.basis[i] < self.basis[l],
                                std::cmp::Ordering::Greater => false,
                            }
                        };
                        Some(if better { i } else { l })
                    }
                };
            }
            let Some(r) = leave else {
                self.status = Status::Optimal;
                return Ok(());
            };
            let mut enter: Option<(usize, Rational)> = None;
            for k in 0..cols {
                let t = &self.tab[r * cols + k];
                if !t.is_negative() {
                    continue;
                }
                let ratio = &self.cost[k] / &(-t);
                let take = match &enter {
                    None => true,
                    Some((e, best)) => match ratio.cmp(best) {
                        std::cmp::Ordering::Less => true,
                        std::cmp::Ordering::Equal => self.nonbasic[k] < self.nonbasic[*e],
                        std::cmp::Ordering::Greater => false,
                    },
                };
                if take {
                    enter = Some((k, ratio));
                }
            }
            let Some((k, _)) = enter else {
                self.status = Status::Infeasible(r);
                return Ok(());
            };
            self.pivot(r, k);
            run += 1;
            if run > PIVOT_CEILING {
                return Err(RunError::Ceiling);
            }
        }
    }
}

/// Cold solve returning only the outcome.
pub fn solve(lp: RationalLP) -> LPOutcome {
    SimplexState::solve(lp).0
}
