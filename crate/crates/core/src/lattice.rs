//! Sets of coalitions as bitsets over the `2^n` encodings, with closure
//! operations for the shift order.
//!
//! Bit `c` of a [`CoalitionSet`] is set iff the coalition with encoding `c`
//! is a member. The upper covers of a coalition under `⪯` are reached by two
//! kinds of elementary moves: adding an absent voter, or moving a member one
//! position towards voter 1 into a vacant slot. Both moves add `2^p` to the
//! encoding for a suitable bit position `p`, so each is a masked shift of the
//! whole bitset.

use std::fmt;

use crate::coalition::{check_voters, full_mask, shift_le, Coalition};
use crate::error::GameError;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CoalitionSet {
    n: u8,
    words: Vec<u64>,
}

fn word_count(n: usize) -> usize {
    (1usize << n).div_ceil(64)
}

impl CoalitionSet {
    pub fn empty(n: usize) -> Self {
        CoalitionSet {
            n: n as u8,
            words: vec![0; word_count(n)],
        }
    }

    /// All `2^n` coalitions.
    pub fn universe(n: usize) -> Self {
        let mut s = CoalitionSet::empty(n);
        let total = 1usize << n;
        for (i, w) in s.words.iter_mut().enumerate() {
            let lo = i * 64;
            let hi = (lo + 64).min(total);
            *w = if hi - lo == 64 {
                u64::MAX
            } else {
                (1u64 << (hi - lo)) - 1
            };
        }
        s
    }

    /// Coalitions whose encoding is strictly below `bound`.
    pub fn below(n: usize, bound: u32) -> Self {
        let mut s = CoalitionSet::empty(n);
        let bound = bound as usize;
        for (i, w) in s.words.iter_mut().enumerate() {
            let lo = i * 64;
            if bound >= lo + 64 {
                *w = u64::MAX;
            } else if bound > lo {
                *w = (1u64 << (bound - lo)) - 1;
            }
        }
        s
    }

    /// Drops every member whose encoding is `bound` or larger.
    pub fn retain_below(&mut self, bound: u32) {
        let bound = bound as usize;
        for (i, w) in self.words.iter_mut().enumerate() {
            let lo = i * 64;
            if bound <= lo {
                *w = 0;
            } else if bound < lo + 64 {
                *w &= (1u64 << (bound - lo)) - 1;
            }
        }
    }

    pub fn from_coalitions<I: IntoIterator<Item = Coalition>>(n: usize, items: I) -> Self {
        let mut s = CoalitionSet::empty(n);
        for c in items {
            s.insert(c.bits());
        }
        s
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n as usize
    }

    #[inline]
    pub fn contains(&self, bits: u32) -> bool {
        let b = bits as usize;
        self.words[b / 64] >> (b % 64) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, bits: u32) {
        let b = bits as usize;
        self.words[b / 64] |= 1 << (b % 64);
    }

    #[inline]
    pub fn remove(&mut self, bits: u32) {
        let b = bits as usize;
        self.words[b / 64] &= !(1 << (b % 64));
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn clear(&mut self) {
        self.words.iter_mut().for_each(|w| *w = 0);
    }

    pub fn union_with(&mut self, other: &CoalitionSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn intersect_with(&mut self, other: &CoalitionSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn subtract(&mut self, other: &CoalitionSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    /// Complement relative to all `2^n` coalitions.
    pub fn complement(&self) -> CoalitionSet {
        let mut out = CoalitionSet::universe(self.n());
        out.subtract(self);
        out
    }

    pub fn is_subset(&self, other: &CoalitionSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    /// Encodings in increasing order.
    pub fn iter(&self) -> impl DoubleEndedIterator<Item = u32> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let base = (i * 64) as u32;
            BitIter(w).map(move |b| base + b)
        })
    }

    /// Members in decreasing lexicographic order.
    pub fn coalitions_desc(&self) -> Vec<Coalition> {
        let n = self.n();
        self.iter()
            .rev()
            .map(|b| Coalition::from_bits(n, b).expect("in range"))
            .collect()
    }

    /// Largest member encoding, if any.
    pub fn max_bits(&self) -> Option<u32> {
        self.words
            .iter()
            .enumerate()
            .rev()
            .find(|(_, &w)| w != 0)
            .map(|(i, &w)| (i * 64) as u32 + 63 - w.leading_zeros())
    }
}

impl fmt::Debug for CoalitionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.coalitions_desc()).finish()
    }
}

struct BitIter(u64);

impl Iterator for BitIter {
    type Item = u32;
    fn next(&mut self) -> Option<u32> {
        if self.0 == 0 {
            return None;
        }
        let b = self.0.trailing_zeros();
        self.0 &= self.0 - 1;
        Some(b)
    }
}

impl DoubleEndedIterator for BitIter {
    fn next_back(&mut self) -> Option<u32> {
        if self.0 == 0 {
            return None;
        }
        let b = 63 - self.0.leading_zeros();
        self.0 &= !(1u64 << b);
        Some(b)
    }
}

/// One elementary upward move: encodings in `mask` gain `2^shift`.
#[derive(Clone)]
struct Move {
    shift: u32,
    mask: CoalitionSet,
    /// Image of `mask` under the move, used for preimages.
    image: CoalitionSet,
}

/// Precomputed masks for the shift order on `n` voters.
#[derive(Clone)]
pub struct Lattice {
    n: usize,
    adds: Vec<Move>,
    shifts: Vec<Move>,
    comparable: Option<Vec<CoalitionSet>>,
}

/// Above this voter count the per-coalition comparability table is not cached.
const COMPARABLE_CACHE_MAX_N: usize = 10;

impl Lattice {
    pub fn new(n: usize) -> Result<Self, GameError> {
        check_voters(n)?;
        let make = |shift: u32, pred: &dyn Fn(u32) -> bool| {
            let mut mask = CoalitionSet::empty(n);
            let mut image = CoalitionSet::empty(n);
            for c in 0..=full_mask(n) {
                if pred(c) {
                    mask.insert(c);
                    image.insert(c + (1 << shift));
                }
            }
            Move { shift, mask, image }
        };
        let adds = (0..n as u32).map(|p| make(p, &|c| c >> p & 1 == 0)).collect();
        let shifts = (0..n.saturating_sub(1) as u32)
            .map(|p| make(p, &|c| c >> p & 1 == 1 && c >> (p + 1) & 1 == 0))
            .collect();
        let mut lattice = Lattice {
            n,
            adds,
            shifts,
            comparable: None,
        };
        if n <= COMPARABLE_CACHE_MAX_N {
            let table = (0..=full_mask(n)).map(|c| lattice.compute_comparable(c)).collect();
            lattice.comparable = Some(table);
        }
        Ok(lattice)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    fn compute_comparable(&self, bits: u32) -> CoalitionSet {
        let mut s = CoalitionSet::empty(self.n);
        for c in 0..=full_mask(self.n) {
            if shift_le(self.n, c, bits) || shift_le(self.n, bits, c) {
                s.insert(c);
            }
        }
        s
    }

    /// Coalitions comparable to `bits` under `⪯` (including itself).
    pub fn comparable(&self, bits: u32) -> std::borrow::Cow<'_, CoalitionSet> {
        match &self.comparable {
            Some(table) => std::borrow::Cow::Borrowed(&table[bits as usize]),
            None => std::borrow::Cow::Owned(self.compute_comparable(bits)),
        }
    }

    /// `dst |= (src & mask) << 2^shift` over the multiword bitset.
    fn apply_up(mv: &Move, src: &CoalitionSet, dst: &mut CoalitionSet) -> bool {
        let k = 1usize << mv.shift;
        let (off, bit) = (k / 64, k % 64);
        let mut changed = false;
        let words = dst.words.len();
        for i in (off..words).rev() {
            let j = i - off;
            let mut add = (src.words[j] & mv.mask.words[j]) << bit;
            if bit != 0 && j > 0 {
                add |= (src.words[j - 1] & mv.mask.words[j - 1]) >> (64 - bit);
            }
            changed |= add & !dst.words[i] != 0;
            dst.words[i] |= add;
        }
        changed
    }

    /// In-place variant of [`Lattice::apply_up`]; words are visited from the
    /// top so every read sees the value before this move.
    fn apply_up_in_place(mv: &Move, set: &mut CoalitionSet) -> bool {
        let k = 1usize << mv.shift;
        let (off, bit) = (k / 64, k % 64);
        let mut changed = false;
        let words = set.words.len();
        for i in (off..words).rev() {
            let j = i - off;
            let mut add = (set.words[j] & mv.mask.words[j]) << bit;
            if bit != 0 && j > 0 {
                add |= (set.words[j - 1] & mv.mask.words[j - 1]) >> (64 - bit);
            }
            changed |= add & !set.words[i] != 0;
            set.words[i] |= add;
        }
        changed
    }

    /// `dst |= (src & image) >> 2^shift`.
    fn apply_down(mv: &Move, src: &CoalitionSet, dst: &mut CoalitionSet) {
        let k = 1usize << mv.shift;
        let (off, bit) = (k / 64, k % 64);
        let words = src.words.len();
        for i in 0..words.saturating_sub(off) {
            let j = i + off;
            let mut add = (src.words[j] & mv.image.words[j]) >> bit;
            if bit != 0 && j + 1 < words {
                add |= (src.words[j + 1] & mv.image.words[j + 1]) << (64 - bit);
            }
            dst.words[i] |= add;
        }
    }

    /// Closes `set` upwards under `⪯` in place.
    pub fn upset_in_place(&self, set: &mut CoalitionSet) {
        // Same-size moves first, then supersets: if u ⪯ v then the |u|
        // leftmost members of v form a coalition reachable from u by moves
        // towards voter 1, and it is a subset of v.
        loop {
            let mut changed = false;
            for mv in &self.shifts {
                changed |= Lattice::apply_up_in_place(mv, set);
            }
            if !changed {
                break;
            }
        }
        for mv in &self.adds {
            Lattice::apply_up_in_place(mv, set);
        }
    }

    pub fn upset(&self, set: &CoalitionSet) -> CoalitionSet {
        let mut s = set.clone();
        self.upset_in_place(&mut s);
        s
    }

    /// Closes `set` downwards under `⪯`.
    pub fn downset(&self, set: &CoalitionSet) -> CoalitionSet {
        let mut s = set.clone();
        loop {
            let before = s.clone();
            for mv in self.shifts.iter().rev() {
                let src = s.clone();
                Lattice::apply_down(mv, &src, &mut s);
            }
            if s == before {
                break;
            }
        }
        for mv in &self.adds {
            let src = s.clone();
            Lattice::apply_down(mv, &src, &mut s);
        }
        s
    }

    /// `⪯`-maximal members of `set`.
    pub fn maximal(&self, set: &CoalitionSet) -> CoalitionSet {
        // Coalitions one elementary move below a member; their downset is the
        // strict downset of `set`. For down-closed sets it is already closed.
        let mut dominated = CoalitionSet::empty(self.n);
        for mv in self.adds.iter().chain(&self.shifts) {
            Lattice::apply_down(mv, set, &mut dominated);
        }
        if !dominated.is_subset(set) {
            dominated = self.downset(&dominated);
        }
        let mut out = set.clone();
        out.subtract(&dominated);
        out
    }

    /// `⪯`-minimal members of `set`.
    pub fn minimal(&self, set: &CoalitionSet) -> CoalitionSet {
        let mut dominating = CoalitionSet::empty(self.n);
        for mv in self.adds.iter().chain(&self.shifts) {
            Lattice::apply_up(mv, set, &mut dominating);
        }
        if !dominating.is_subset(set) {
            self.upset_in_place(&mut dominating);
        }
        let mut out = set.clone();
        out.subtract(&dominating);
        out
    }

    pub fn is_up_closed(&self, set: &CoalitionSet) -> bool {
        let mut img = CoalitionSet::empty(self.n);
        for mv in self.adds.iter().chain(&self.shifts) {
            Lattice::apply_up(mv, set, &mut img);
        }
        img.is_subset(set)
    }

    pub fn is_down_closed(&self, set: &CoalitionSet) -> bool {
        let mut img = CoalitionSet::empty(self.n);
        for mv in self.adds.iter().chain(&self.shifts) {
            Lattice::apply_down(mv, set, &mut img);
        }
        img.is_subset(set)
    }

    /// Reflects a set through `c ↦ N \ c`.
    pub fn complement_map(&self, set: &CoalitionSet) -> CoalitionSet {
        let full = full_mask(self.n);
        let mut out = CoalitionSet::empty(self.n);
        for c in set.iter() {
            out.insert(full ^ c);
        }
        out
    }
}
