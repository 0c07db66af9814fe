//! Minimum-sum integer representations of weighted games.
//!
//! All LPs here are stated over *groups* of voters that share one weight
//! variable: single voters in the plain mode and desirability classes when
//! types are preserved. Variables are `x_1, …, x_G, q`; a coalition row
//! counts how many members the coalition has in each group.

use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::coalition::Coalition;
use crate::game::CompleteGame;
use crate::lattice::Lattice;
use crate::rational::Rational;
use crate::simplex::{Constraint, LPOutcome, RationalLP, Relation, SimplexState, SimplexStats};

/// Integer weights with the smallest quota that realises them.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct WeightRep {
    pub weights: Vec<u64>,
    pub quota: u64,
}

impl WeightRep {
    pub fn sum(&self) -> u64 {
        self.weights.iter().sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LowerBounds {
    /// Per voter.
    pub u: Vec<u64>,
    pub converged: bool,
    /// Rounds until the fixpoint, including the final unchanged one.
    pub rounds: usize,
    /// Non-integral LP optima met during the iteration.
    pub fractional: Vec<Rational>,
}

impl LowerBounds {
    pub fn sum(&self) -> u64 {
        self.u.iter().sum()
    }

    pub fn is_fractional(&self) -> bool {
        !self.fractional.is_empty()
    }

    /// Largest denominator among the fractional optima (1 if none).
    pub fn max_denominator(&self) -> u64 {
        self.fractional
            .iter()
            .filter_map(|r| num_traits::ToPrimitive::to_u64(&r.denom()))
            .max()
            .unwrap_or(1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinRepResult {
    pub min_sum: u64,
    /// Sorted lexicographically by weight vector, without duplicates.
    pub reps: Vec<WeightRep>,
    pub unique: bool,
    pub preserve_types: bool,
}

/// Everything the classification needs to know about one game.
#[derive(Clone, Debug)]
pub struct Resolution {
    pub bounds: LowerBounds,
    /// Whether the lower bounds already realise the game.
    pub fast_path: bool,
    pub result: MinRepResult,
    pub stats: SimplexStats,
}

impl Resolution {
    /// Smallest quota over all minimum-sum representations.
    pub fn min_quota(&self) -> u64 {
        self.result.reps.iter().map(|r| r.quota).min().unwrap_or(0)
    }

    /// Largest `w_1` over all minimum-sum representations.
    pub fn max_w1(&self) -> u64 {
        self.result.reps.iter().map(|r| r.weights[0]).max().unwrap_or(0)
    }
}

/// The smallest quota `q` with `(w, q)` realising `game`, found by scanning
/// every coalition; `None` if no quota works.
pub fn realizes(weights: &[u64], game: &CompleteGame) -> Option<u64> {
    let n = game.n();
    assert_eq!(weights.len(), n, "weight vector length");
    let mut min_win = u64::MAX;
    let mut max_lose = 0u64;
    for bits in 0..1u32 << n {
        let c = Coalition::from_bits(n, bits).expect("in range");
        let w: u64 = c.voters().map(|v| weights[v - 1]).sum();
        if game.evaluate(c).expect("same voter count") {
            min_win = min_win.min(w);
        } else {
            max_lose = max_lose.max(w);
        }
    }
    (min_win > max_lose).then_some(max_lose + 1)
}

/// `realizes` for weights that are non-increasing in the voter index, using
/// only the shift-minimal winning and shift-maximal losing coalitions.
fn realizes_sorted(weights: &[u64], winning: &[Coalition], losing: &[Coalition]) -> Option<u64> {
    let sum = |c: &Coalition| c.voters().map(|v| weights[v - 1]).sum::<u64>();
    let min_win = winning.iter().map(sum).min().expect("nonempty");
    let max_lose = losing.iter().map(sum).max().unwrap_or(0);
    (min_win > max_lose).then_some(max_lose + 1)
}

/// LP context for one game and one grouping of its voters.
struct GroupLp {
    n: usize,
    groups: Vec<Range<usize>>,
    winning: Vec<Coalition>,
    losing: Vec<Coalition>,
}

impl GroupLp {
    fn new(lattice: &Lattice, game: &CompleteGame, preserve_types: bool) -> Self {
        let n = game.n();
        let groups = if preserve_types {
            game.desirability_classes(lattice)
                .expect("a complete game's voters are sorted")
                .blocks()
                .iter()
                .map(|b| b.start - 1..b.end - 1)
                .collect()
        } else {
            (0..n).map(|i| i..i + 1).collect()
        };
        GroupLp {
            n,
            groups,
            winning: game.min_winning().to_vec(),
            losing: game.max_losing(lattice),
        }
    }

    fn vars(&self) -> usize {
        self.groups.len() + 1
    }

    fn quota_var(&self) -> usize {
        self.groups.len()
    }

    fn coalition_row(&self, c: Coalition) -> Vec<Rational> {
        let mut row: Vec<Rational> = self
            .groups
            .iter()
            .map(|g| Rational::from_int(g.clone().filter(|&i| c.contains(i + 1)).count() as i64))
            .collect();
        row.push(Rational::from_int(-1));
        row
    }

    fn unit(&self, g: usize, coef: i64) -> Vec<Rational> {
        let mut row = vec![Rational::ZERO; self.vars()];
        row[g] = Rational::from_int(coef);
        row
    }

    fn size_objective(&self) -> Vec<Rational> {
        let mut obj: Vec<Rational> = self.groups.iter().map(|g| Rational::from_int(g.len() as i64)).collect();
        obj.push(Rational::ZERO);
        obj
    }

    fn base(&self) -> RationalLP {
        let mut lp = RationalLP::new(self.vars());
        lp.set_objective(self.size_objective());
        for &u in &self.winning {
            lp.add_constraint(Constraint::new(self.coalition_row(u), Relation::Ge, Rational::ZERO));
        }
        for &v in &self.losing {
            lp.add_constraint(Constraint::new(
                self.coalition_row(v),
                Relation::Le,
                Rational::from_int(-1),
            ));
        }
        for g in 1..self.groups.len() {
            let mut row = vec![Rational::ZERO; self.vars()];
            row[g - 1] = Rational::ONE;
            row[g] = Rational::from_int(-1);
            lp.add_constraint(Constraint::new(row, Relation::Ge, Rational::ZERO));
        }
        lp
    }

    fn at_least(&self, g: usize, value: i64) -> Constraint {
        Constraint::new(self.unit(g, 1), Relation::Ge, Rational::from_int(value))
    }

    fn at_most(&self, g: usize, value: i64) -> Constraint {
        Constraint::new(self.unit(g, 1), Relation::Le, Rational::from_int(value))
    }

    fn expand(&self, x: &[i64]) -> Vec<u64> {
        let mut w = vec![0u64; self.n];
        for (g, range) in self.groups.iter().enumerate() {
            for i in range.clone() {
                w[i] = x[g] as u64;
            }
        }
        w
    }

    /// Per-group lower bounds: 0 for groups of null voters, 1 otherwise.
    fn initial_bounds(&self, game: &CompleteGame) -> Vec<i64> {
        let null = game.null_voters();
        self.groups
            .iter()
            .map(|g| if null.contains(&(g.start + 1)) { 0 } else { 1 })
            .collect()
    }

    fn min_of(&self, state: &mut SimplexState, g: usize, sign: i64) -> Rational {
        let outcome = state.set_objective(self.unit(g, sign));
        match outcome {
            LPOutcome::Optimal { value, .. } => value,
            other => panic!("bound LP for group {g} is {other:?}"),
        }
    }
}

fn to_i64(r: &Rational) -> i64 {
    r.to_i64().expect("integral value in i64 range")
}

/// Raises per-group lower bounds by minimising each weight in turn, last
/// group first, until a full round changes nothing.
fn iterate_bounds(ctx: &GroupLp, game: &CompleteGame, stats: &mut SimplexStats) -> (Vec<i64>, LowerBounds) {
    let mut u = ctx.initial_bounds(game);
    let mut lp = ctx.base();
    for (g, &b) in u.iter().enumerate() {
        if b > 0 {
            lp.add_constraint(ctx.at_least(g, b));
        }
    }
    let (outcome, mut state) = SimplexState::solve(lp);
    assert!(outcome.is_optimal(), "lower-bound LP of a weighted game is infeasible");
    let mut fractional = Vec::new();
    let mut rounds = 0;
    loop {
        rounds += 1;
        let mut changed = false;
        for g in (0..ctx.groups.len()).rev() {
            let value = ctx.min_of(&mut state, g, 1);
            if !value.is_integer() {
                fractional.push(value.clone());
            }
            let c = to_i64(&value.ceil());
            if c > u[g] {
                u[g] = c;
                changed = true;
                let outcome = state.add_constraints(vec![ctx.at_least(g, c)]);
                assert!(
                    outcome.is_optimal(),
                    "raising a lower bound cannot make the LP infeasible"
                );
            }
        }
        if !changed {
            break;
        }
    }
    stats.merge(&state.stats());
    let bounds = LowerBounds {
        u: ctx.expand(&u),
        converged: true,
        rounds,
        fractional,
    };
    (u, bounds)
}

/// Lower bounds `u` with `u ≤ w*` for every sorted integer representation `w*`.
pub fn lower_bound_iteration(lattice: &Lattice, game: &CompleteGame) -> LowerBounds {
    let ctx = GroupLp::new(lattice, game, false);
    iterate_bounds(&ctx, game, &mut SimplexStats::default()).1
}

/// Minimum `Σ|g| x_g` over integer points, by branch and bound on the most
/// fractional coordinate.
fn branch_and_bound(ctx: &GroupLp, u: &[i64], stats: &mut SimplexStats) -> i64 {
    let mut lp = ctx.base();
    for (g, &b) in u.iter().enumerate() {
        if b > 0 {
            lp.add_constraint(ctx.at_least(g, b));
        }
    }
    let (outcome, state) = SimplexState::solve(lp);
    assert!(outcome.is_optimal(), "relaxation of a weighted game is infeasible");
    let mut best: Option<i64> = None;
    bb_rec(ctx, state, &mut best, stats);
    best.expect("a weighted game has an integer representation")
}

fn bb_rec(ctx: &GroupLp, state: SimplexState, best: &mut Option<i64>, stats: &mut SimplexStats) {
    let LPOutcome::Optimal { solution, value } = state.outcome() else {
        stats.merge(&state.stats());
        return;
    };
    if let Some(b) = *best {
        if to_i64(&value.ceil()) >= b {
            stats.merge(&state.stats());
            return;
        }
    }
    let half = Rational::new(1, 2);
    let mut pick: Option<(usize, Rational)> = None;
    for (g, x) in solution[..ctx.quota_var()].iter().enumerate() {
        if x.is_integer() {
            continue;
        }
        let frac = x - &x.floor();
        let dist = (&frac - &half).abs();
        if pick.as_ref().is_none_or(|(_, d)| dist < *d) {
            pick = Some((g, dist));
        }
    }
    let Some((g, _)) = pick else {
        stats.merge(&state.stats());
        *best = Some(to_i64(&value));
        return;
    };
    let x = &solution[g];
    let (down, up) = (to_i64(&x.floor()), to_i64(&x.ceil()));
    for row in [ctx.at_most(g, down), ctx.at_least(g, up)] {
        let mut child = state.clone();
        if child.add_constraints(vec![row]).is_optimal() {
            bb_rec(ctx, child, best, stats);
        } else {
            stats.merge(&child.stats());
        }
    }
}

/// Every integer group vector with `Σ|g| x_g = total` satisfying the LP
/// rows, in lexicographically increasing order.
fn integer_points(ctx: &GroupLp, u: &[i64], total: i64, stats: &mut SimplexStats) -> Vec<Vec<i64>> {
    let mut lp = ctx.base();
    for (g, &b) in u.iter().enumerate() {
        if b > 0 {
            lp.add_constraint(ctx.at_least(g, b));
        }
    }
    lp.add_constraint(Constraint::new(
        ctx.size_objective(),
        Relation::Le,
        Rational::from_int(total),
    ));
    let (outcome, state) = SimplexState::solve(lp);
    let mut out = Vec::new();
    if outcome.is_optimal() {
        let mut fixed = Vec::new();
        points_rec(ctx, state, &mut fixed, total, &mut out, stats);
    }
    out
}

fn points_rec(
    ctx: &GroupLp,
    mut state: SimplexState,
    fixed: &mut Vec<i64>,
    total: i64,
    out: &mut Vec<Vec<i64>>,
    stats: &mut SimplexStats,
) {
    let g = fixed.len();
    if g == ctx.groups.len() {
        let sum: i64 = fixed.iter().zip(&ctx.groups).map(|(x, r)| x * r.len() as i64).sum();
        if sum == total {
            out.push(fixed.clone());
        }
        stats.merge(&state.stats());
        return;
    }
    let lo = to_i64(&ctx.min_of(&mut state, g, 1).ceil());
    let hi = to_i64(&(-&ctx.min_of(&mut state, g, -1)).floor());
    for v in lo..=hi {
        let mut child = state.clone();
        let rows = vec![ctx.at_least(g, v), ctx.at_most(g, v)];
        if child.add_constraints(rows).is_optimal() {
            fixed.push(v);
            points_rec(ctx, child, fixed, total, out, stats);
            fixed.pop();
        } else {
            stats.merge(&child.stats());
        }
    }
    stats.merge(&state.stats());
}

/// Distinct permutations of `values` in increasing lexicographic order.
fn distinct_permutations(values: &[u64]) -> Vec<Vec<u64>> {
    let mut cur = values.to_vec();
    cur.sort_unstable();
    let mut out = vec![cur.clone()];
    loop {
        let Some(i) = (1..cur.len()).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let j = (i..cur.len()).rev().find(|&j| cur[j] > cur[i - 1]).expect("exists");
        cur.swap(i - 1, j);
        cur[i..].reverse();
        out.push(cur.clone());
    }
}

/// All arrangements of a sorted representation obtained by permuting
/// weights inside each desirability class.
fn class_arrangements(sorted: &[u64], classes: &[Range<usize>]) -> Vec<Vec<u64>> {
    let mut acc = vec![Vec::with_capacity(sorted.len())];
    for class in classes {
        let perms = distinct_permutations(&sorted[class.clone()]);
        let mut next = Vec::with_capacity(acc.len() * perms.len());
        for prefix in &acc {
            for p in &perms {
                let mut v = prefix.clone();
                v.extend_from_slice(p);
                next.push(v);
            }
        }
        acc = next;
    }
    acc
}

/// Full resolution of a weighted game: lower bounds, minimum sum and every
/// optimal representation.
pub fn resolve(lattice: &Lattice, game: &CompleteGame, preserve_types: bool) -> Resolution {
    let ctx = GroupLp::new(lattice, game, preserve_types);
    let mut stats = SimplexStats::default();
    let (u, bounds) = iterate_bounds(&ctx, game, &mut stats);
    let fast = realizes_sorted(&bounds.u, &ctx.winning, &ctx.losing);
    let (min_sum, sorted_points) = match fast {
        Some(_) => (bounds.sum(), vec![u.clone()]),
        None => {
            let total = branch_and_bound(&ctx, &u, &mut stats);
            (total as u64, integer_points(&ctx, &u, total, &mut stats))
        }
    };
    let classes: Vec<Range<usize>> = if preserve_types {
        Vec::new()
    } else {
        game.desirability_classes(lattice)
            .expect("a complete game's voters are sorted")
            .blocks()
            .iter()
            .map(|b| b.start - 1..b.end - 1)
            .collect()
    };
    let mut reps = Vec::new();
    for x in &sorted_points {
        let sorted = ctx.expand(x);
        let quota = realizes_sorted(&sorted, &ctx.winning, &ctx.losing).expect("integer LP points realise the game");
        let arrangements = if preserve_types {
            vec![sorted]
        } else {
            class_arrangements(&sorted, &classes)
        };
        for weights in arrangements {
            let checked = realizes(&weights, game);
            assert_eq!(checked, Some(quota), "representation {weights:?} fails the full check");
            reps.push(WeightRep { weights, quota });
        }
    }
    reps.sort();
    reps.dedup();
    debug_assert!(reps.iter().all(|r| r.sum() == min_sum));
    Resolution {
        bounds,
        fast_path: fast.is_some(),
        result: MinRepResult {
            min_sum,
            unique: reps.len() == 1,
            reps,
            preserve_types,
        },
        stats,
    }
}

/// Exact minimum weight sum over integer representations.
pub fn min_sum(lattice: &Lattice, game: &CompleteGame) -> u64 {
    let ctx = GroupLp::new(lattice, game, false);
    let mut stats = SimplexStats::default();
    let (u, bounds) = iterate_bounds(&ctx, game, &mut stats);
    if realizes_sorted(&bounds.u, &ctx.winning, &ctx.losing).is_some() {
        return bounds.sum();
    }
    branch_and_bound(&ctx, &u, &mut stats) as u64
}

pub fn all_min_sum_reps(lattice: &Lattice, game: &CompleteGame) -> MinRepResult {
    resolve(lattice, game, false).result
}

pub fn all_min_sum_reps_preserving_types(lattice: &Lattice, game: &CompleteGame) -> MinRepResult {
    resolve(lattice, game, true).result
}
