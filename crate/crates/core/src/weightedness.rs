//! Feasibility LPs deciding whether a (partial) complete game has weights.
//!
//! Variables are `w_1, …, w_n, q` in that order. A minimal winning coalition
//! `u` contributes `Σ u_i w_i ≥ q`, a losing coalition `v` contributes
//! `1 + Σ v_i w_i ≤ q`, and weights are non-increasing in the voter index.

use crate::coalition::Coalition;
use crate::error::GameError;
use crate::game::CompleteGame;
use crate::lattice::{CoalitionSet, Lattice};
use crate::rational::Rational;
use crate::simplex::{Constraint, LPOutcome, RationalLP, Relation, SimplexState};

/// A rational weight vector and quota.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalRep {
    pub quota: Rational,
    pub weights: Vec<Rational>,
}

impl RationalRep {
    fn from_solution(n: usize, x: &[Rational]) -> Self {
        RationalRep {
            quota: x[n].clone(),
            weights: x[..n].to_vec(),
        }
    }

    /// Whether the representation separates `winning` from `losing` with
    /// margin one.
    pub fn separates(&self, winning: &[Coalition], losing: &[Coalition]) -> bool {
        let weight = |c: &Coalition| -> Rational { c.voters().map(|v| self.weights[v - 1].clone()).sum() };
        winning.iter().all(|u| weight(u) >= self.quota)
            && losing.iter().all(|v| &weight(v) + &Rational::ONE <= self.quota)
    }
}

/// A search node: the minimal winning coalitions chosen so far together
/// with the coalitions that may still be added below it.
#[derive(Clone, Debug)]
pub struct PartialNode {
    pub n: usize,
    /// Lexicographically decreasing.
    pub min_winning: Vec<Coalition>,
    /// Candidates: lexicographically below the last element and
    /// incomparable to every element of `min_winning`.
    pub remaining: CoalitionSet,
    pub l_hat: CoalitionSet,
}

impl PartialNode {
    pub fn new(lattice: &Lattice, min_winning: Vec<Coalition>) -> Result<Self, GameError> {
        let remaining = remaining_candidates(lattice, &min_winning)?;
        let l_hat = partial_losing(
            lattice,
            &CoalitionSet::from_coalitions(lattice.n(), min_winning.iter().copied()),
            &remaining,
        );
        Ok(PartialNode {
            n: lattice.n(),
            min_winning,
            remaining,
            l_hat,
        })
    }
}

/// Nonzero coalitions lexicographically below the smallest element of `w`
/// and incomparable to all of `w`: everything a descendant may still add.
pub fn remaining_candidates(lattice: &Lattice, w: &[Coalition]) -> Result<CoalitionSet, GameError> {
    let n = lattice.n();
    let smallest = w.iter().min().ok_or(GameError::NoWinningCoalitions)?;
    let mut rem = CoalitionSet::below(n, smallest.bits());
    rem.remove(0);
    for u in w {
        rem.subtract(&lattice.comparable(u.bits()));
    }
    Ok(rem)
}

/// Shift-maximal coalitions that lose in every completion of a node whose
/// winning generators are `w` and whose possible additions are `remaining`.
pub fn partial_losing(lattice: &Lattice, w: &CoalitionSet, remaining: &CoalitionSet) -> CoalitionSet {
    let mut gens = w.clone();
    gens.union_with(remaining);
    let up = lattice.upset(&gens);
    lattice.maximal(&up.complement())
}

/// Partial losing set of the node `w`, assuming every coalition a
/// descendant could add is still available.
pub fn compute_partial_losing(lattice: &Lattice, w: &[Coalition]) -> Result<CoalitionSet, GameError> {
    let remaining = remaining_candidates(lattice, w)?;
    let set = CoalitionSet::from_coalitions(lattice.n(), w.iter().copied());
    Ok(partial_losing(lattice, &set, &remaining))
}

pub(crate) fn winning_row(n: usize, u: Coalition) -> Constraint {
    let mut coeffs: Vec<Rational> = u.indicator().iter().map(|&b| Rational::from_int(b as i64)).collect();
    coeffs.push(Rational::from_int(-1));
    debug_assert_eq!(coeffs.len(), n + 1);
    Constraint::new(coeffs, Relation::Ge, Rational::ZERO)
}

pub(crate) fn losing_row(n: usize, v: Coalition) -> Constraint {
    let mut coeffs: Vec<Rational> = v.indicator().iter().map(|&b| Rational::from_int(b as i64)).collect();
    coeffs.push(Rational::from_int(-1));
    debug_assert_eq!(coeffs.len(), n + 1);
    Constraint::new(coeffs, Relation::Le, Rational::from_int(-1))
}

/// `w_i ≥ w_{i+1}` for `i = 1..n-1`.
pub(crate) fn monotonicity_rows(n: usize) -> Vec<Constraint> {
    (0..n.saturating_sub(1))
        .map(|i| {
            let mut coeffs = vec![Rational::ZERO; n + 1];
            coeffs[i] = Rational::ONE;
            coeffs[i + 1] = Rational::from_int(-1);
            Constraint::new(coeffs, Relation::Ge, Rational::ZERO)
        })
        .collect()
}

/// The empty feasibility LP (monotonicity only), minimising the quota.
pub(crate) fn base_lp(n: usize) -> RationalLP {
    let mut lp = RationalLP::new(n + 1);
    let mut objective = vec![Rational::ZERO; n + 1];
    objective[n] = Rational::ONE;
    lp.set_objective(objective);
    for row in monotonicity_rows(n) {
        lp.add_constraint(row);
    }
    lp
}

/// Feasibility LP for winning coalitions `w` and losing coalitions `l_hat`.
pub fn feasibility_lp(n: usize, w: &[Coalition], l_hat: &[Coalition]) -> RationalLP {
    let mut lp = base_lp(n);
    for &u in w {
        lp.add_constraint(winning_row(n, u));
    }
    for &v in l_hat {
        lp.add_constraint(losing_row(n, v));
    }
    lp
}

/// Rational weights for a complete game, or `None` if it is not weighted.
pub fn is_weighted(lattice: &Lattice, game: &CompleteGame) -> Option<RationalRep> {
    let n = game.n();
    let losing = game.max_losing(lattice);
    let lp = feasibility_lp(n, game.min_winning(), &losing);
    match SimplexState::solve(lp).0 {
        LPOutcome::Optimal { solution, .. } => Some(RationalRep::from_solution(n, &solution)),
        LPOutcome::Infeasible => None,
        LPOutcome::Unbounded => unreachable!("quota is bounded below by zero"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(s: &str) -> Coalition {
        s.parse().unwrap()
    }

    fn game(n: usize, w: &[&str]) -> CompleteGame {
        CompleteGame::new(n, w.iter().map(|s| c(s)).collect()).unwrap()
    }

    #[test]
    fn partial_losing_examples() {
        let lat = Lattice::new(3).unwrap();
        let unanimity = compute_partial_losing(&lat, &[c("111")]).unwrap();
        assert!(unanimity.contains(0b110));
        // node {100} with its completion {100} fixed: nothing left to add
        let w = CoalitionSet::from_coalitions(3, [c("100")]);
        let fixed = partial_losing(&lat, &w, &CoalitionSet::empty(3));
        assert_eq!(fixed.coalitions_desc(), vec![c("011")]);
        // node {100} with 011 still addable: only 010 is certainly losing
        let open = compute_partial_losing(&lat, &[c("100")]).unwrap();
        assert_eq!(open.coalitions_desc(), vec![c("010")]);
        assert!(compute_partial_losing(&lat, &[]).is_err());
    }

    #[test]
    fn complete_node_gives_full_losing_set() {
        let lat = Lattice::new(5).unwrap();
        let g = game(5, &["11000", "10110", "01111"]);
        let w = g.min_winning_set();
        let l_hat = partial_losing(&lat, &w, &CoalitionSet::empty(5));
        assert_eq!(l_hat.coalitions_desc(), g.max_losing(&lat));
    }

    #[test]
    fn row_counts() {
        let lp = feasibility_lp(3, &[c("100")], &[c("011")]);
        assert_eq!(lp.constraints().len(), 4);
        let lat = Lattice::new(9).unwrap();
        let g = CompleteGame::from_weights(&[92, 84, 78, 74, 67, 58, 45, 40, 30], 295).unwrap();
        let l = g.max_losing(&lat);
        let lp = feasibility_lp(9, g.min_winning(), &l);
        assert_eq!(lp.constraints().len(), 11 + l.len() + 8);
    }

    #[test]
    fn shared_coalition_is_infeasible() {
        let lp = feasibility_lp(3, &[c("110")], &[c("110")]);
        assert_eq!(SimplexState::solve(lp).0, LPOutcome::Infeasible);
    }

    #[test]
    fn dictator_and_extremal_are_weighted() {
        let lat3 = Lattice::new(3).unwrap();
        let d = game(3, &["100"]);
        let rep = is_weighted(&lat3, &d).unwrap();
        assert!(rep.separates(d.min_winning(), &d.max_losing(&lat3)));
        assert_eq!(rep.weights[1], Rational::ZERO);
        assert_eq!(rep.quota, Rational::ONE);

        let lat9 = Lattice::new(9).unwrap();
        let g = CompleteGame::from_weights(&[92, 84, 78, 74, 67, 58, 45, 40, 30], 295).unwrap();
        let rep = is_weighted(&lat9, &g).unwrap();
        assert!(rep.separates(g.min_winning(), &g.max_losing(&lat9)));
        let given = RationalRep {
            quota: Rational::from_int(295),
            weights: [92, 84, 78, 74, 67, 58, 45, 40, 30]
                .iter()
                .map(|&v| Rational::from_int(v))
                .collect(),
        };
        assert!(given.separates(g.min_winning(), &g.max_losing(&lat9)));
    }
}
