//! Coalitions as fixed-width characteristic vectors and the shift order on them.
//!
//! Voter 1 is the most significant bit, so a coalition renders as the string
//! `u_1 u_2 … u_n` and the lexicographic order on strings coincides with the
//! integer order on the underlying bits.

use std::fmt;
use std::str::FromStr;

use crate::error::GameError;

/// Largest supported number of voters.
pub const MAX_VOTERS: usize = 16;

/// A subset of the voters `1..=n`, stored as a bit vector.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coalition {
    bits: u16,
    n: u8,
}

/// Outcome of comparing two coalitions under the shift order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ShiftOrder {
    LessEq,
    GreaterEq,
    Equal,
    Incomparable,
}

impl Coalition {
    /// Builds a coalition from its integer encoding (voter 1 = bit `n - 1`).
    pub fn from_bits(n: usize, bits: u32) -> Result<Self, GameError> {
        check_voters(n)?;
        if n < 32 && bits >> n != 0 {
            return Err(GameError::BitsOutOfRange { n, bits });
        }
        Ok(Coalition {
            bits: bits as u16,
            n: n as u8,
        })
    }

    /// Builds a coalition from 1-based voter indices.
    pub fn from_voters(n: usize, voters: &[usize]) -> Result<Self, GameError> {
        check_voters(n)?;
        let mut bits = 0u32;
        for &v in voters {
            if v == 0 || v > n {
                return Err(GameError::VoterOutOfRange { voter: v, n });
            }
            bits |= 1 << (n - v);
        }
        Coalition::from_bits(n, bits)
    }

    pub fn empty(n: usize) -> Result<Self, GameError> {
        Coalition::from_bits(n, 0)
    }

    pub fn grand(n: usize) -> Result<Self, GameError> {
        check_voters(n)?;
        Coalition::from_bits(n, full_mask(n))
    }

    #[inline]
    pub fn n(self) -> usize {
        self.n as usize
    }

    #[inline]
    pub fn bits(self) -> u32 {
        self.bits as u32
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.bits == 0
    }

    #[inline]
    pub fn len(self) -> usize {
        self.bits.count_ones() as usize
    }

    /// Whether voter `voter` (1-based) belongs to the coalition.
    #[inline]
    pub fn contains(self, voter: usize) -> bool {
        debug_assert!(voter >= 1 && voter <= self.n());
        self.bits >> (self.n() - voter) & 1 == 1
    }

    /// Member voters in increasing order (1-based).
    pub fn voters(self) -> impl Iterator<Item = usize> {
        let n = self.n();
        let bits = self.bits;
        (1..=n).filter(move |&v| bits >> (n - v) & 1 == 1)
    }

    /// Characteristic vector `(u_1, …, u_n)`.
    pub fn indicator(self) -> Vec<u8> {
        (1..=self.n()).map(|v| self.contains(v) as u8).collect()
    }

    /// The coalition `N \ self`.
    pub fn complement(self) -> Coalition {
        Coalition {
            bits: (!self.bits) & full_mask(self.n()) as u16,
            n: self.n,
        }
    }

    /// Sum of `weights[v - 1]` over member voters `v`.
    pub fn weight<T>(self, weights: &[T]) -> T
    where
        T: Copy + std::iter::Sum<T>,
    {
        self.voters().map(|v| weights[v - 1]).sum()
    }

    /// Compares two coalitions under the shift order `⪯`.
    pub fn cmp_shift(self, other: Coalition) -> Result<ShiftOrder, GameError> {
        if self.n != other.n {
            return Err(GameError::VoterMismatch {
                left: self.n(),
                right: other.n(),
            });
        }
        let n = self.n();
        let le = shift_le(n, self.bits(), other.bits());
        let ge = shift_le(n, other.bits(), self.bits());
        Ok(match (le, ge) {
            (true, true) => ShiftOrder::Equal,
            (true, false) => ShiftOrder::LessEq,
            (false, true) => ShiftOrder::GreaterEq,
            (false, false) => ShiftOrder::Incomparable,
        })
    }

    /// `self ⪯ other`; both must have the same voter count.
    #[inline]
    pub fn shift_le(self, other: Coalition) -> bool {
        debug_assert_eq!(self.n, other.n);
        shift_le(self.n(), self.bits(), other.bits())
    }
}

/// `u ⪯ v` on raw encodings: every prefix `u_1..u_k` has at most as many
/// members as the corresponding prefix of `v`.
#[inline]
pub fn shift_le(n: usize, u: u32, v: u32) -> bool {
    let (mut su, mut sv) = (0u32, 0u32);
    for shift in (0..n).rev() {
        su += (u >> shift) & 1;
        sv += (v >> shift) & 1;
        if su > sv {
            return false;
        }
    }
    true
}

#[inline]
pub(crate) fn full_mask(n: usize) -> u32 {
    if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

pub(crate) fn check_voters(n: usize) -> Result<(), GameError> {
    if n == 0 || n > MAX_VOTERS {
        Err(GameError::VoterCount(n))
    } else {
        Ok(())
    }
}

impl fmt::Display for Coalition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in 1..=self.n() {
            f.write_str(if self.contains(v) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Coalition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Coalition({self})")
    }
}

impl FromStr for Coalition {
    type Err = GameError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        check_voters(s.len()).map_err(|_| GameError::BadCoalition(s.to_string()))?;
        let mut bits = 0u32;
        for ch in s.chars() {
            bits <<= 1;
            match ch {
                '0' => {}
                '1' => bits |= 1,
                _ => return Err(GameError::BadCoalition(s.to_string())),
            }
        }
        Coalition::from_bits(s.len(), bits)
    }
}

impl serde::Serialize for Coalition {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for Coalition {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}
