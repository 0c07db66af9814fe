//! Complete simple games given by their `⪯`-minimal winning coalitions.

use std::ops::Range;

use crate::coalition::{check_voters, full_mask, Coalition, ShiftOrder};
use crate::error::GameError;
use crate::lattice::{CoalitionSet, Lattice};

/// A complete simple game on voters `1 ⊒ 2 ⊒ … ⊒ n`, characterised by the
/// antichain of its shift-minimal winning coalitions.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CompleteGame {
    n: usize,
    /// Sorted by decreasing lexicographic order.
    min_winning: Vec<Coalition>,
}

impl CompleteGame {
    /// Validates `min_winning` as a nonempty `⪯`-antichain of nonzero
    /// coalitions on `n` voters. Order of the input does not matter.
    pub fn new(n: usize, mut min_winning: Vec<Coalition>) -> Result<Self, GameError> {
        check_voters(n)?;
        if min_winning.is_empty() {
            return Err(GameError::NoWinningCoalitions);
        }
        for &c in &min_winning {
            if c.n() != n {
                return Err(GameError::VoterMismatch { left: n, right: c.n() });
            }
            if c.is_empty() {
                return Err(GameError::EmptyWinning);
            }
        }
        min_winning.sort_unstable_by(|a, b| b.cmp(a));
        for pair in min_winning.windows(2) {
            if pair[0] == pair[1] {
                return Err(GameError::Duplicate(pair[0]));
            }
        }
        for (i, &a) in min_winning.iter().enumerate() {
            for &b in &min_winning[i + 1..] {
                match a.cmp_shift(b)? {
                    ShiftOrder::Incomparable => {}
                    ShiftOrder::LessEq | ShiftOrder::Equal => {
                        return Err(GameError::NotAntichain { lower: a, upper: b })
                    }
                    ShiftOrder::GreaterEq => return Err(GameError::NotAntichain { lower: b, upper: a }),
                }
            }
        }
        Ok(CompleteGame { n, min_winning })
    }

    /// Trusted constructor for antichains produced internally.
    pub(crate) fn from_antichain_unchecked(n: usize, mut min_winning: Vec<Coalition>) -> Self {
        min_winning.sort_unstable_by(|a, b| b.cmp(a));
        CompleteGame { n, min_winning }
    }

    /// Builds the game whose winning coalitions are exactly `winning`.
    ///
    /// Fails unless `winning` is closed upwards under `⪯`, i.e. the voters are
    /// already sorted by desirability, or if it is empty or contains `∅`.
    pub fn from_winning_set(lattice: &Lattice, winning: &CoalitionSet) -> Result<Self, GameError> {
        let n = lattice.n();
        if winning.is_empty() {
            return Err(GameError::NoWinningCoalitions);
        }
        if winning.contains(0) {
            return Err(GameError::EmptyWinning);
        }
        if !lattice.is_up_closed(winning) {
            return Err(first_desirability_violation(n, winning));
        }
        let min = lattice.minimal(winning);
        Ok(CompleteGame::from_antichain_unchecked(n, min.coalitions_desc()))
    }

    /// The weighted game `[q; w_1, …, w_n]`.
    pub fn from_weights(weights: &[u64], quota: u64) -> Result<Self, GameError> {
        let n = weights.len();
        let lattice = Lattice::new(n)?;
        let mut winning = CoalitionSet::empty(n);
        for c in 0..=full_mask(n) {
            let sum: u64 = Coalition::from_bits(n, c)?.weight(weights);
            if sum >= quota {
                winning.insert(c);
            }
        }
        CompleteGame::from_winning_set(&lattice, &winning)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn min_winning(&self) -> &[Coalition] {
        &self.min_winning
    }

    pub fn min_winning_set(&self) -> CoalitionSet {
        CoalitionSet::from_coalitions(self.n, self.min_winning.iter().copied())
    }

    /// All winning coalitions.
    pub fn winning_set(&self, lattice: &Lattice) -> CoalitionSet {
        debug_assert_eq!(lattice.n(), self.n);
        lattice.upset(&self.min_winning_set())
    }

    /// `χ(c)`.
    pub fn evaluate(&self, c: Coalition) -> Result<bool, GameError> {
        if c.n() != self.n {
            return Err(GameError::VoterMismatch {
                left: self.n,
                right: c.n(),
            });
        }
        Ok(self.min_winning.iter().any(|w| w.shift_le(c)))
    }

    /// Shift-maximal losing coalitions, sorted by decreasing lexicographic order.
    pub fn max_losing(&self, lattice: &Lattice) -> Vec<Coalition> {
        let losing = self.winning_set(lattice).complement();
        lattice.maximal(&losing).coalitions_desc()
    }

    /// Null voters; for a complete game these are the voters after the
    /// last one occurring in a shift-minimal winning coalition.
    pub fn null_voters(&self) -> Vec<usize> {
        let used = self.min_winning.iter().fold(0u32, |acc, c| acc | c.bits());
        // Lowest set bit = highest-numbered voter in use.
        let last = self.n - used.trailing_zeros() as usize;
        (last + 1..=self.n).collect()
    }

    /// The dual game `χ*(U) = 1 − χ(N \ U)`.
    pub fn dual(&self, lattice: &Lattice) -> CompleteGame {
        let winning = self.winning_set(lattice);
        let losing = winning.complement();
        let dual_winning = lattice.complement_map(&losing);
        CompleteGame::from_winning_set(lattice, &dual_winning)
            .expect("the dual of a complete game is complete with the same voter order")
    }

    /// Equivalence classes of the desirability relation, checked by the swap
    /// test on the full truth table.
    pub fn desirability_classes(&self, lattice: &Lattice) -> Result<EquivalenceClasses, GameError> {
        EquivalenceClasses::from_winning_set(self.n, &self.winning_set(lattice))
    }
}

fn first_desirability_violation(n: usize, winning: &CoalitionSet) -> GameError {
    for c in winning.iter() {
        for v in 1..=n {
            let bit = 1u32 << (n - v);
            if c & bit == 0 && !winning.contains(c | bit) {
                return GameError::NotMonotone(
                    Coalition::from_bits(n, c).unwrap(),
                    Coalition::from_bits(n, c | bit).unwrap(),
                );
            }
        }
    }
    for i in 1..n {
        if !at_least_as_desirable(n, winning, i, i + 1) {
            return GameError::DesirabilityViolation(i, i + 1);
        }
    }
    unreachable!("an up-closed winning set would have been accepted")
}

/// Whether replacing `j` by `i` never turns a winning coalition losing.
pub fn at_least_as_desirable(n: usize, winning: &CoalitionSet, i: usize, j: usize) -> bool {
    let bi = 1u32 << (n - i);
    let bj = 1u32 << (n - j);
    (0..=full_mask(n))
        .filter(|&u| u & bj != 0 && u & bi == 0)
        .all(|u| !winning.contains(u) || winning.contains(u ^ bi ^ bj))
}

/// Ordered partition of the voters into blocks of equally desirable voters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivalenceClasses {
    blocks: Vec<Range<usize>>,
}

impl EquivalenceClasses {
    /// Computes the classes of an arbitrary winning set; fails if the voters
    /// are not sorted `1 ⊒ 2 ⊒ … ⊒ n`.
    pub fn from_winning_set(n: usize, winning: &CoalitionSet) -> Result<Self, GameError> {
        let mut blocks: Vec<Range<usize>> = Vec::new();
        let mut start = 1;
        for i in 1..n {
            if !at_least_as_desirable(n, winning, i, i + 1) {
                return Err(GameError::DesirabilityViolation(i, i + 1));
            }
            if !at_least_as_desirable(n, winning, i + 1, i) {
                blocks.push(start..i + 1);
                start = i + 1;
            }
        }
        blocks.push(start..n + 1);
        Ok(EquivalenceClasses { blocks })
    }

    /// Blocks as half-open ranges of 1-based voter indices.
    pub fn blocks(&self) -> &[Range<usize>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Block index of a 1-based voter.
    pub fn class_of(&self, voter: usize) -> usize {
        self.blocks
            .iter()
            .position(|b| b.contains(&voter))
            .expect("voter in range")
    }

    pub fn same_class(&self, i: usize, j: usize) -> bool {
        self.class_of(i) == self.class_of(j)
    }
}

/// Encodings of all coalitions on `n` voters.
#[cfg(test)]
pub(crate) fn all_coalitions(n: usize) -> impl Iterator<Item = Coalition> {
    (0..=full_mask(n)).map(move |b| Coalition::from_bits(n, b).unwrap())
}
