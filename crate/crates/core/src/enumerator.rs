//! Orderly generation of complete simple games.
//!
//! A node of the search tree is a nonempty antichain `W` listed in decreasing
//! lexicographic order; its children append a coalition that is
//! lexicographically below every element of `W` and incomparable to all of
//! them. Every node is itself a complete game, so the games are exactly the
//! nodes. In weighted mode each node carries a warm-startable feasibility LP
//! over `W` and the partial losing set, and infeasible subtrees are cut.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coalition::{check_voters, Coalition};
use crate::error::GameError;
use crate::game::CompleteGame;
use crate::lattice::{CoalitionSet, Lattice};
use crate::rational::Rational;
use crate::simplex::{Constraint, LPOutcome, SimplexState};
use crate::weightedness::{base_lp, losing_row, partial_losing, winning_row};

/// Bumped whenever the order in which nodes are visited changes.
pub const CANONICAL_ORDER_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GameClass {
    Complete,
    Weighted,
}

impl FromStr for GameClass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "complete" => Ok(GameClass::Complete),
            "weighted" => Ok(GameClass::Weighted),
            other => Err(format!("unknown game class {other:?}")),
        }
    }
}

impl fmt::Display for GameClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GameClass::Complete => "complete",
            GameClass::Weighted => "weighted",
        })
    }
}

#[derive(Clone, Debug)]
pub struct EnumerationConfig {
    pub n: usize,
    pub class: GameClass,
    /// Re-solve each child from its parent's basis instead of from scratch.
    pub warm_start: bool,
    /// Cold-solve every warm-started LP as well and count disagreements.
    pub verify_warm_start: bool,
}

impl EnumerationConfig {
    pub fn new(n: usize, class: GameClass) -> Self {
        EnumerationConfig {
            n,
            class,
            warm_start: true,
            verify_warm_start: false,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationStats {
    /// Search nodes whose LP (if any) was feasible.
    pub nodes: u64,
    /// Games passed to the visitor.
    pub games: u64,
    pub lp_solves: u64,
    /// Children cut because their LP was infeasible.
    pub pruned: u64,
    /// Extra solves against the full losing set of a node's own game.
    pub full_checks: u64,
    /// Full checks settled by the node's current solution.
    pub quick_accepts: u64,
    pub warm_mismatches: u64,
    pub pivots: u64,
}

impl EnumerationStats {
    pub fn merge(&mut self, other: &EnumerationStats) {
        self.nodes += other.nodes;
        self.games += other.games;
        self.lp_solves += other.lp_solves;
        self.pruned += other.pruned;
        self.full_checks += other.full_checks;
        self.quick_accepts += other.quick_accepts;
        self.warm_mismatches += other.warm_mismatches;
        self.pivots += other.pivots;
    }
}

/// A game reached by the search.
pub struct Visit<'a> {
    pub lattice: &'a Lattice,
    /// Minimal winning coalitions, lexicographically decreasing.
    pub min_winning: &'a [Coalition],
    /// A feasible point `(w_1, …, w_n, q)` of the full feasibility LP
    /// (weighted mode only).
    pub witness: Option<&'a [Rational]>,
}

impl Visit<'_> {
    pub fn game(&self) -> CompleteGame {
        CompleteGame::from_antichain_unchecked(self.lattice.n(), self.min_winning.to_vec())
    }
}

pub trait Visitor {
    fn visit(&mut self, visit: &Visit<'_>);
}

impl<F: FnMut(&Visit<'_>)> Visitor for F {
    fn visit(&mut self, visit: &Visit<'_>) {
        self(visit)
    }
}

/// Counts visits and nothing else.
#[derive(Clone, Copy, Debug, Default)]
pub struct CountVisitor(pub u64);

impl Visitor for CountVisitor {
    fn visit(&mut self, _: &Visit<'_>) {
        self.0 += 1;
    }
}

/// A unit of work: the node reached by `prefix`, plus its whole subtree when
/// `descendants` is set.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Subtree {
    pub prefix: Vec<Coalition>,
    pub descendants: bool,
}

impl Subtree {
    pub fn root() -> Self {
        Subtree {
            prefix: Vec::new(),
            descendants: true,
        }
    }
}

/// `110,101` is the subtree below that prefix; a trailing `!` restricts the
/// task to the prefix node itself.
impl fmt::Display for Subtree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.prefix.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join(","))?;
        if !self.descendants {
            f.write_str("!")?;
        }
        Ok(())
    }
}

impl FromStr for Subtree {
    type Err = GameError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (body, descendants) = match s.strip_suffix('!') {
            Some(body) => (body, false),
            None => (s, true),
        };
        let prefix = if body.is_empty() {
            Vec::new()
        } else {
            body.split(',')
                .map(|p| p.parse::<Coalition>())
                .collect::<Result<Vec<_>, _>>()?
        };
        if prefix.is_empty() && !descendants {
            return Err(GameError::BadPrefix(s.to_string()));
        }
        Ok(Subtree { prefix, descendants })
    }
}

struct LpNode {
    state: SimplexState,
    /// Coalitions already present as losing rows.
    losing: CoalitionSet,
}

pub struct Enumerator {
    lattice: Lattice,
    config: EnumerationConfig,
}

impl Enumerator {
    pub fn new(config: EnumerationConfig) -> Result<Self, GameError> {
        check_voters(config.n)?;
        Ok(Enumerator {
            lattice: Lattice::new(config.n)?,
            config,
        })
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn config(&self) -> &EnumerationConfig {
        &self.config
    }

    fn n(&self) -> usize {
        self.config.n
    }

    fn root_candidates(&self) -> CoalitionSet {
        let mut cand = CoalitionSet::universe(self.n());
        cand.remove(0);
        cand
    }

    fn child_candidates(&self, cand: &CoalitionSet, y: u32) -> CoalitionSet {
        let mut next = cand.clone();
        next.retain_below(y);
        next.subtract(&self.lattice.comparable(y));
        next
    }

    fn coalition(&self, bits: u32) -> Coalition {
        Coalition::from_bits(self.n(), bits).expect("encoding in range")
    }

    /// Runs the whole tree serially.
    pub fn run<V: Visitor>(&self, visitor: &mut V) -> EnumerationStats {
        self.run_subtree(&Subtree::root(), visitor)
            .expect("the root prefix is always valid")
    }

    /// Runs one unit of work. The prefix must be a valid path (each element a
    /// child of the previous node); in weighted mode a prefix whose LP is
    /// infeasible yields nothing.
    pub fn run_subtree<V: Visitor>(&self, task: &Subtree, visitor: &mut V) -> Result<EnumerationStats, GameError> {
        let mut stats = EnumerationStats::default();
        let mut cand = self.root_candidates();
        let mut w = Vec::with_capacity(task.prefix.len() + 8);
        for c in &task.prefix {
            if c.n() != self.n() || !cand.contains(c.bits()) {
                return Err(GameError::BadPrefix(task.to_string()));
            }
            cand = self.child_candidates(&cand, c.bits());
            w.push(*c);
        }
        match self.config.class {
            GameClass::Complete => {
                if w.is_empty() {
                    self.complete_children(&mut w, &cand, visitor, &mut stats);
                } else if task.descendants {
                    self.complete_dfs(&mut w, &cand, visitor, &mut stats);
                } else {
                    stats.nodes += 1;
                    self.emit(&w, None, visitor, &mut stats);
                }
            }
            GameClass::Weighted => {
                // Replay the path, cutting as soon as an LP turns infeasible.
                let mut node = self.root_lp();
                let mut path_cand = self.root_candidates();
                let mut path = Vec::with_capacity(w.len());
                for c in &w {
                    path_cand = self.child_candidates(&path_cand, c.bits());
                    path.push(*c);
                    match self.extend(&node, &path, &path_cand, &mut stats) {
                        Some(child) => node = child,
                        None => return Ok(stats),
                    }
                }
                if w.is_empty() {
                    self.weighted_children(&mut w, &cand, &node, visitor, &mut stats);
                } else if task.descendants {
                    self.weighted_dfs(&mut w, &cand, &node, visitor, &mut stats);
                } else {
                    stats.nodes += 1;
                    self.emit_if_weighted(&w, &cand, &node, visitor, &mut stats);
                }
            }
        }
        Ok(stats)
    }

    fn emit<V: Visitor>(
        &self,
        w: &[Coalition],
        witness: Option<&[Rational]>,
        visitor: &mut V,
        stats: &mut EnumerationStats,
    ) {
        stats.games += 1;
        visitor.visit(&Visit {
            lattice: &self.lattice,
            min_winning: w,
            witness,
        });
    }

    fn complete_dfs<V: Visitor>(
        &self,
        w: &mut Vec<Coalition>,
        cand: &CoalitionSet,
        visitor: &mut V,
        stats: &mut EnumerationStats,
    ) {
        stats.nodes += 1;
        self.emit(w, None, visitor, stats);
        self.complete_children(w, cand, visitor, stats);
    }

    fn complete_children<V: Visitor>(
        &self,
        w: &mut Vec<Coalition>,
        cand: &CoalitionSet,
        visitor: &mut V,
        stats: &mut EnumerationStats,
    ) {
        for y in cand.iter().rev() {
            let next = self.child_candidates(cand, y);
            w.push(self.coalition(y));
            self.complete_dfs(w, &next, visitor, stats);
            w.pop();
        }
    }

    fn root_lp(&self) -> LpNode {
        let (outcome, state) = SimplexState::solve(base_lp(self.n()));
        debug_assert!(outcome.is_optimal());
        LpNode {
            state,
            losing: CoalitionSet::empty(self.n()),
        }
    }

    fn solve_rows(
        &self,
        parent: &SimplexState,
        rows: Vec<Constraint>,
        stats: &mut EnumerationStats,
    ) -> (LPOutcome, SimplexState) {
        stats.lp_solves += 1;
        if self.config.warm_start {
            let mut state = parent.clone();
            let before = state.pivots();
            let outcome = state.add_constraints(rows);
            stats.pivots += state.pivots() - before;
            if self.config.verify_warm_start {
                let (cold, _) = SimplexState::solve(state.lp().clone());
                if !cold.same_result(&outcome) {
                    stats.warm_mismatches += 1;
                }
            }
            (outcome, state)
        } else {
            let mut lp = parent.lp().clone();
            for row in rows {
                lp.add_constraint(row);
            }
            let (outcome, state) = SimplexState::solve(lp);
            stats.pivots += state.pivots();
            (outcome, state)
        }
    }

    /// LP node for `path` (whose last element is new) with remaining
    /// candidates `cand`, or `None` if it is infeasible.
    fn extend(
        &self,
        parent: &LpNode,
        path: &[Coalition],
        cand: &CoalitionSet,
        stats: &mut EnumerationStats,
    ) -> Option<LpNode> {
        let n = self.n();
        let y = *path.last().expect("nonempty path");
        let w_set = CoalitionSet::from_coalitions(n, path.iter().copied());
        let l_hat = partial_losing(&self.lattice, &w_set, cand);
        let mut fresh = l_hat;
        fresh.subtract(&parent.losing);
        let mut rows = vec![winning_row(n, y)];
        rows.extend(fresh.iter().rev().map(|v| losing_row(n, self.coalition(v))));
        let (outcome, state) = self.solve_rows(&parent.state, rows, stats);
        if !outcome.is_optimal() {
            debug_assert_eq!(outcome, LPOutcome::Infeasible);
            stats.pruned += 1;
            return None;
        }
        let mut losing = parent.losing.clone();
        losing.union_with(&fresh);
        Some(LpNode { state, losing })
    }

    fn weighted_dfs<V: Visitor>(
        &self,
        w: &mut Vec<Coalition>,
        cand: &CoalitionSet,
        node: &LpNode,
        visitor: &mut V,
        stats: &mut EnumerationStats,
    ) {
        stats.nodes += 1;
        self.emit_if_weighted(w, cand, node, visitor, stats);
        self.weighted_children(w, cand, node, visitor, stats);
    }

    fn weighted_children<V: Visitor>(
        &self,
        w: &mut Vec<Coalition>,
        cand: &CoalitionSet,
        node: &LpNode,
        visitor: &mut V,
        stats: &mut EnumerationStats,
    ) {
        for y in cand.iter().rev() {
            let next = self.child_candidates(cand, y);
            w.push(self.coalition(y));
            if let Some(child) = self.extend(node, w, &next, stats) {
                self.weighted_dfs(w, &next, &child, visitor, stats);
            }
            w.pop();
        }
    }

    /// Checks the node's own game against its full losing set.
    fn emit_if_weighted<V: Visitor>(
        &self,
        w: &[Coalition],
        cand: &CoalitionSet,
        node: &LpNode,
        visitor: &mut V,
        stats: &mut EnumerationStats,
    ) {
        let n = self.n();
        let current = node.state.outcome();
        let x = current.solution().expect("node LP is optimal");
        if cand.is_empty() {
            // No coalition can be added any more, so L̂ already is L.
            self.emit(w, Some(x), visitor, stats);
            return;
        }
        let w_set = CoalitionSet::from_coalitions(n, w.iter().copied());
        let mut missing = partial_losing(&self.lattice, &w_set, &CoalitionSet::empty(n));
        missing.subtract(&node.losing);
        let q = &x[n];
        let satisfied = missing.iter().all(|v| {
            let sum: Rational = self.coalition(v).voters().map(|i| x[i - 1].clone()).sum();
            &sum + &Rational::ONE <= *q
        });
        if satisfied {
            stats.quick_accepts += 1;
            self.emit(w, Some(x), visitor, stats);
            return;
        }
        stats.full_checks += 1;
        let rows = missing.iter().rev().map(|v| losing_row(n, self.coalition(v))).collect();
        let (outcome, _) = self.solve_rows(&node.state, rows, stats);
        if let LPOutcome::Optimal { solution, .. } = outcome {
            self.emit(w, Some(&solution), visitor, stats);
        }
    }

    /// Static work split: one task per node at `depth` (with its subtree) and
    /// one node-only task per shallower node, in visiting order.
    pub fn split(&self, depth: usize) -> Vec<Subtree> {
        let depth = depth.max(1);
        let mut tasks = Vec::new();
        let mut w = Vec::new();
        self.split_rec(&mut w, &self.root_candidates(), depth, &mut tasks);
        tasks
    }

    fn split_rec(&self, w: &mut Vec<Coalition>, cand: &CoalitionSet, depth: usize, out: &mut Vec<Subtree>) {
        if !w.is_empty() {
            let at_depth = w.len() == depth;
            out.push(Subtree {
                prefix: w.clone(),
                descendants: at_depth,
            });
            if at_depth {
                return;
            }
        }
        for y in cand.iter().rev() {
            let next = self.child_candidates(cand, y);
            w.push(self.coalition(y));
            self.split_rec(w, &next, depth, out);
            w.pop();
        }
    }

    /// Runs `tasks` on `jobs` workers, one fresh visitor per task; results
    /// come back in task order.
    pub fn run_parallel<V, F>(
        &self,
        tasks: &[Subtree],
        jobs: usize,
        make: F,
    ) -> Result<Vec<(V, EnumerationStats)>, GameError>
    where
        V: Visitor + Send,
        F: Fn() -> V + Sync,
    {
        let mut results = Vec::with_capacity(tasks.len());
        self.run_streaming(tasks, jobs, make, |v, s| results.push((v, s)))?;
        Ok(results)
    }

    /// Like [`Enumerator::run_parallel`], but hands each task's result to
    /// `sink` in task order as soon as its batch completes, so memory stays
    /// bounded by the batch size.
    pub fn run_streaming<V, F, S>(&self, tasks: &[Subtree], jobs: usize, make: F, mut sink: S) -> Result<(), GameError>
    where
        V: Visitor + Send,
        F: Fn() -> V + Sync,
        S: FnMut(V, EnumerationStats),
    {
        let jobs = jobs.max(1);
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .expect("thread pool");
        let batch = (jobs * 64).max(64);
        for chunk in tasks.chunks(batch) {
            let done: Vec<Result<(V, EnumerationStats), GameError>> = pool.install(|| {
                chunk
                    .par_iter()
                    .map(|task| {
                        let mut visitor = make();
                        let stats = self.run_subtree(task, &mut visitor)?;
                        Ok((visitor, stats))
                    })
                    .collect()
            });
            for r in done {
                let (v, s) = r?;
                sink(v, s);
            }
        }
        Ok(())
    }
}

/// Default split depth: deep enough to give every worker many tasks.
pub fn default_split_depth(n: usize) -> usize {
    match n {
        0..=5 => 1,
        6..=7 => 2,
        _ => 3,
    }
}

pub fn enumerate_complete<V: Visitor>(n: usize, visitor: &mut V) -> Result<u64, GameError> {
    let e = Enumerator::new(EnumerationConfig::new(n, GameClass::Complete))?;
    Ok(e.run(visitor).games)
}

pub fn enumerate_weighted<V: Visitor>(n: usize, visitor: &mut V) -> Result<u64, GameError> {
    let e = Enumerator::new(EnumerationConfig::new(n, GameClass::Weighted))?;
    Ok(e.run(visitor).games)
}

pub fn split_search(n: usize, depth: usize) -> Result<Vec<Subtree>, GameError> {
    let e = Enumerator::new(EnumerationConfig::new(n, GameClass::Complete))?;
    Ok(e.split(depth))
}

/// Counts the games of `class` on `jobs` workers.
pub fn count_parallel(n: usize, class: GameClass, jobs: usize) -> Result<EnumerationStats, GameError> {
    let e = Enumerator::new(EnumerationConfig::new(n, class))?;
    let tasks = e.split(default_split_depth(n));
    let mut total = EnumerationStats::default();
    e.run_streaming(&tasks, jobs, CountVisitor::default, |_, s| total.merge(&s))?;
    Ok(total)
}

/// Independent count of nonempty antichains of nonzero coalitions under the
/// shift order, by plain clique search.
pub fn oracle_complete_small(n: usize) -> Result<u64, GameError> {
    Ok(oracle_antichains(n)?.len() as u64)
}

/// All nonempty antichains found by [`oracle_complete_small`], each sorted
/// decreasingly.
pub fn oracle_antichains(n: usize) -> Result<Vec<Vec<u32>>, GameError> {
    if n == 0 {
        return Err(GameError::VoterCount(n));
    }
    if n > 5 {
        return Err(GameError::UnsupportedSize { n, max: 5 });
    }
    let below = |u: u32, v: u32| -> bool {
        let (mut su, mut sv) = (0i32, 0i32);
        for k in (0..n).rev() {
            su += (u >> k & 1) as i32;
            sv += (v >> k & 1) as i32;
            if su > sv {
                return false;
            }
        }
        true
    };
    let verts: Vec<u32> = (1..1u32 << n).collect();
    let mut out = Vec::new();
    let mut stack = Vec::new();
    fn grow(
        start: usize,
        verts: &[u32],
        stack: &mut Vec<u32>,
        out: &mut Vec<Vec<u32>>,
        below: &dyn Fn(u32, u32) -> bool,
    ) {
        for i in start..verts.len() {
            let v = verts[i];
            if stack.iter().all(|&s| !below(s, v) && !below(v, s)) {
                stack.push(v);
                let mut sorted = stack.clone();
                sorted.sort_unstable_by(|a, b| b.cmp(a));
                out.push(sorted);
                grow(i + 1, verts, stack, out, below);
                stack.pop();
            }
        }
    }
    grow(0, &verts, &mut stack, &mut out, &below);
    Ok(out)
}

/// Results of brute-force enumeration over all monotone Boolean functions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonotoneOracle {
    /// Monotone functions with `χ(∅) = 0` and `χ(N) = 1`.
    pub simple: u64,
    /// Truth tables (bit `c` = value on coalition encoding `c`) of the simple
    /// games whose desirability relation is total with `1 ⊒ 2 ⊒ … ⊒ n`.
    pub complete: Vec<u32>,
    /// The subset of `complete` realised by some integer weights.
    pub weighted: Vec<u32>,
}

impl MonotoneOracle {
    pub fn counts(&self) -> (u64, u64, u64) {
        (self.simple, self.complete.len() as u64, self.weighted.len() as u64)
    }
}

/// Enumerates every truth table on `n ≤ 4` voters.
pub fn oracle_monotone_small(n: usize) -> Result<MonotoneOracle, GameError> {
    if n == 0 {
        return Err(GameError::VoterCount(n));
    }
    if n > 4 {
        return Err(GameError::UnsupportedSize { n, max: 4 });
    }
    let size = 1u32 << n;
    let full = size - 1;
    let value = |t: u64, c: u32| t >> c & 1 == 1;
    let monotone = |t: u64| (0..size).all(|c| !value(t, c) || (0..n).all(|k| value(t, c | 1 << k)));
    // voter i (1-based) sits at bit n - i
    let at_least = |t: u64, i: usize, j: usize| {
        let (bi, bj) = (1u32 << (n - i), 1u32 << (n - j));
        (0..size)
            .filter(|c| c & bi == 0 && c & bj != 0)
            .all(|c| !value(t, c) || value(t, (c & !bj) | bi))
    };
    let mut weighted_tables = std::collections::HashSet::new();
    let bound = 8u32;
    let mut weights = vec![0u32; n];
    loop {
        let total: u32 = weights.iter().sum();
        for q in 1..=total {
            let mut t = 0u64;
            for c in 0..size {
                let s: u32 = (0..n).filter(|&k| c >> (n - 1 - k) & 1 == 1).map(|k| weights[k]).sum();
                if s >= q {
                    t |= 1 << c;
                }
            }
            weighted_tables.insert(t);
        }
        // next vector in 0..=bound, odometer style
        let mut k = 0;
        while k < n && weights[k] == bound {
            weights[k] = 0;
            k += 1;
        }
        if k == n {
            break;
        }
        weights[k] += 1;
    }
    let mut oracle = MonotoneOracle {
        simple: 0,
        complete: Vec::new(),
        weighted: Vec::new(),
    };
    for t in 0..1u64 << size {
        if value(t, 0) || !value(t, full) || !monotone(t) {
            continue;
        }
        oracle.simple += 1;
        let ordered = (1..n).all(|i| at_least(t, i, i + 1));
        let total = (1..=n).all(|i| (1..=n).all(|j| at_least(t, i, j) || at_least(t, j, i)));
        if ordered && total {
            oracle.complete.push(t as u32);
            if weighted_tables.contains(&t) {
                oracle.weighted.push(t as u32);
            }
        }
    }
    Ok(oracle)
}
